#pragma once

// Named identity and inequality checks. Each returns a signed margin:
// identities report a nonnegative defect that must stay below `tolerance`,
// inequalities report rhs - lhs (plus slack) that must stay >= 0.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "logsch/energy.hpp"
#include "logsch/grid.hpp"
#include "logsch/potential.hpp"

namespace logsch {

inline constexpr std::array<std::string_view, 6> kCheckRegistry = {
    "nehari", "energy_identity", "scaling", "log_sobolev", "linf", "gradient_fd",
};

struct CheckResult {
    std::string name;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::uint64_t grid_digest = 0;
    double lambda = 0.0;
    double p = 0.0;
};

/// |int(|grad u|^2 + V u^2) - int u^2 log u^2| / (1 + |lhs|).
CheckResult check_nehari(const Grid& g, const PotentialField& v, const Field& u, double tolerance = 1e-3);

/// Defect of 2 I_lam(u) - <I'_lam(u), u> = (2-p)/p lam (int |grad u|^p + int |u|^p) + int u^2,
/// relative to the larger side. Holds for every field.
CheckResult check_energy_identity(const Grid& g, const PotentialField& v, const Field& u,
                                  const PerturbationParams& params, double tolerance = 1e-10);

/// Max-norm defect of residual_{V - log mu^2}(v) - residual_V(mu v) / mu, relative to
/// the larger max norm. Throws std::invalid_argument for mu = 0.
CheckResult check_scaling(const Grid& g, const Field& potential, const Field& v, double mu,
                          double tolerance = 1e-12);

/// rhs - lhs + 1e-8 (1 + |lhs|) for
///   int u^2 log u^2 <= a^2/pi |grad u|_2^2 + (log |u|_2^2 - N (1 + log a)) |u|_2^2.
/// Throws std::invalid_argument for a zero field or a <= 0.
CheckResult check_log_sobolev(const Grid& g, const Field& u, double a);

/// cap - max |u|.
CheckResult check_linf(const Field& u, double cap = 1e3);

/// Worst |int G phi - (I(u + eps phi) - I(u - eps phi)) / (2 eps)| / (1 + |int G phi|)
/// over random (u, phi) with entries in [-amplitude, amplitude], eps = 1e-5.
/// Throws std::invalid_argument for trials < 1.
CheckResult check_gradient_fd(const Grid& g, const PotentialField& v, const PerturbationParams& params, int trials,
                              std::uint64_t rng_seed, double amplitude = 2.0, double tolerance = 1e-6);

}  // namespace logsch
