#pragma once

// Flat key=value run configuration.
//
//   dim=1
//   half_width=8
//   points=1022
//   potential=harmonic:2.0      # harmonic:a | quartic:c | shifted:<base>:<shift> | tabulated:<path>
//   p=1.5
//   lambda_start=1.0
//   lambda_ratio=0.1
//   lambda_min=1e-4
//   tol_grad=1e-6
//   max_outer=500
//   k_solutions=1
//   rng_seed=42
//   output_dir=out
//   emit=fields,diagnostics,plotdata,checks
//
// dim, half_width, points and potential are required; the rest default to
// the values shown above.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include "logsch/energy.hpp"
#include "logsch/grid.hpp"
#include "logsch/potential.hpp"
#include "logsch/solver.hpp"

namespace logsch {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunSpec {
    int dim = 1;
    double half_width = 8.0;
    int points = 1022;
    std::string potential_text = "harmonic:2.0";
    double p = 1.5;
    double grad_reg_eps = 1e-10;
    ContinuationSchedule schedule;
    double tol_grad = 1e-6;
    int max_outer = 500;
    int k_solutions = 1;
    std::uint64_t rng_seed = 42;
    std::string output_dir = "out";
    std::set<std::string> emit = {"fields", "diagnostics", "plotdata", "checks"};

    Grid grid() const { return Grid(dim, half_width, points); }
    Potential potential() const { return parse_potential(potential_text); }
    PerturbationParams params() const { return {0.0, p, grad_reg_eps}; }
    MountainPassConfig solver_config() const;
    bool emits(const std::string& what) const { return emit.count(what) > 0; }
};

/// Throws ConfigError naming the offending key and constraint.
RunSpec parse_config(const std::string& text);
RunSpec load_config(const std::string& path);

}  // namespace logsch
