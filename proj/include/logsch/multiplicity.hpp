#pragma once

// Several distinct critical points with increasing energies: structured
// seeds with j-1 sign changes, continuation for each, and deflation of the
// search direction against solutions already accepted.
//
// This is a heuristic. Finding k solutions is evidence for multiplicity,
// not a proof of it.

#include <stdexcept>
#include <string>
#include <vector>

#include "logsch/solver.hpp"

namespace logsch {

class DeflationProximity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DeflationSet {
    Field potential;              // V values, for H^1_V distances
    std::vector<Field> solutions;
    double power = 2.0;
    double shift = 1.0;
    double separation = 0.1;      // H^1_V distance, modulo sign

    explicit DeflationSet(Field potential_values) : potential(std::move(potential_values)) {}
};

/// min(||u - w||, ||u + w||) in H^1_V.
double distance_mod_sign(const Grid& g, const Field& potential, const Field& u, const Field& w);

/// prod_i (d_i^-power + shift) with d_i = distance_mod_sign(u, u_i); 1 for an
/// empty set. Throws DeflationProximity if some d_i < separation / 2.
double deflation_factor(const Field& u, const DeflationSet& ds);

Field deflate_direction(const Field& z, const Field& u, const DeflationSet& ds);

/// Hermite-like profile H_{j-1}(x_1) exp(-|x|^2/2) with j-1 sign changes
/// along the first axis, scaled to unit H^1_V norm. Throws
/// std::invalid_argument for j < 1 or j >= n/2.
Field structured_seed(const Grid& g, const PotentialField& v, int j);

struct FoundSolution {
    explicit FoundSolution(Field solution) : u(std::move(solution)) {}

    Field u;
    double energy = 0.0;
    SolveReport report;
    int seed_index = 0;
    double theta_proxy = 0.0;     // |u|_q / ||u||_{H^1_V}, q = 2 + delta
    bool possible_duplicate = false;
};

struct MultiplicityOptions {
    double separation = 0.1;
    double power = 2.0;
    double shift = 1.0;
    double energy_margin = 1e-6;
};

struct MultiplicityResult {
    std::vector<FoundSolution> solutions;  // ascending energy
    bool complete = false;                 // k solutions accepted
    int attempts = 0;
    std::vector<std::string> diagnostics;
};

/// Tries seeds j = 1, 2, ... (at most 3k attempts). A candidate is accepted
/// when its final residual is within cfg.descent_tol, int u^2 >= 1e-6, and it
/// lies at least `separation` from every accepted u_i and -u_i.
MultiplicityResult find_k_solutions(const Grid& g, const PotentialField& v, const ContinuationSchedule& sched,
                                    const PerturbationParams& params, const MountainPassConfig& cfg, int k,
                                    const MultiplicityOptions& opts = {});

/// True if u lies within `separation` of some accepted solution or its negative.
bool is_duplicate(const Grid& g, const Field& potential, const Field& u, const std::vector<FoundSolution>& accepted,
                  double separation);

}  // namespace logsch
