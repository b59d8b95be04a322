#pragma once

#include <cstdint>
#include <random>

#include "logsch/grid.hpp"

namespace logsch {

/// mt19937_64 with a platform-independent mapping to [0, 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Field uniform_field(const Grid& g, double lo, double hi) {
        Field f(g);
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = uniform(lo, hi);
        return f;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace logsch
