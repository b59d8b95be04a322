#pragma once

// Critical points of I_lam: mountain-pass search along a ray path, peak
// descent, and continuation lam -> 0.
//
// Descent runs on the "peak set": after every step each sign block of the
// iterate (connected region of one sign carrying non-negligible mass) is
// rescaled to the maximum of I_lam along its own ray. For a one-signed
// field this is the peak of the path t -> t u, i.e. the mountain-pass
// deformation of that path; for sign-changing seeds it keeps every nodal
// block away from zero. Iterates therefore never slide back to the trivial
// critical point, and the accepted energies are nonincreasing.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "logsch/energy.hpp"
#include "logsch/grid.hpp"
#include "logsch/potential.hpp"

namespace logsch {

struct ArmijoParams {
    double c1 = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
};

struct MountainPassConfig {
    int path_segments = 32;
    /// Path direction e; defaults to default_seed().
    std::optional<Field> seed_profile;
    /// Target for the preconditioned residual ||(-Lap+V+1)^{-1} G||_{H^1_V}.
    double descent_tol = 1e-6;
    int max_outer = 500;
    ArmijoParams armijo;
    /// Radius the path endpoint must clear (see check_geometry).
    double probe_radius = 0.5;
    /// Restart threshold on int u^2.
    double collapse_mass = 1e-8;
    int max_restarts = 3;
    /// Search direction from the iterate-dependent metric (see descend);
    /// false uses the fixed -Lap+V+1 metric.
    bool adaptive_metric = true;

    void validate() const;
};

struct ContinuationSchedule {
    double lambda_start = 1.0;
    double ratio = 0.1;
    double lambda_min = 1e-4;

    /// Throws std::invalid_argument on lambda_start outside (0,1], ratio
    /// outside (0,1) or lambda_min outside (0, lambda_start].
    void validate() const;
    /// lambda_start, lambda_start*ratio, ... down to lambda_min (inclusive).
    std::vector<double> lambdas() const;
};

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CollapseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Multiplier applied to the search direction at iterate u (deflation hook).
using DirectionScale = std::function<double(const Field& u)>;

struct DescentResult {
    explicit DescentResult(Field start) : u(std::move(start)) {}

    Field u;
    int iterations = 0;
    double residual = 0.0;      // preconditioned, H^1_V norm
    double raw_residual = 0.0;  // discrete L2 norm of G
    double energy = 0.0;
    bool converged = false;
    bool stagnated = false;     // line search ran out of backtracks
    bool collapsed = false;     // int u^2 fell below collapse_mass
    std::vector<double> energy_history;  // accepted iterates, starting point first
};

struct LambdaRecord {
    double lambda = 0.0;
    double energy = 0.0;
    double resid_precond = 0.0;
    double resid_raw = 0.0;
    int iterations = 0;
    double mass = 0.0;          // int u^2
    double lambda_w1p_p = 0.0;  // lam ||u||_{W^{1,p}}^p
    double linf = 0.0;
    bool converged = false;
};

struct SolveReport {
    std::vector<LambdaRecord> records;  // decreasing lambda, last one is lambda = 0
    double t0 = 0.0;
    double path_max = 0.0;              // sup of I_{lambda_start} along the initial path
    double nehari_margin = 0.0;
    double energy_identity_margin = 0.0;
    double linf = 0.0;
    double h1v_norm = 0.0;
    double wall_seconds = 0.0;
};

/// exp(-|x|^2 / 2) scaled to unit H^1_V norm.
Field default_seed(const Grid& g, const PotentialField& v);

/// Preconditioned residual ||(-Lap_h + V + 1)^{-1} G||_{H^1_V} of a gradient field G.
double preconditioned_residual(const Grid& g, const PotentialField& v, const Field& gradient);

/// Smallest t in {1, 2, 4, ...} with I(t e) < 0 and ||t e||_{H^1_V} > probe_radius.
/// Throws GeometryError past 2^60.
double find_t0(const Grid& g, const PotentialField& v, const Field& e, const PerturbationParams& params,
               double probe_radius = 0.5);

/// Minimum of I over `samples` random fields of H^1_V norm rho.
double check_geometry(const Grid& g, const PotentialField& v, const PerturbationParams& params, double rho,
                      int samples, std::uint64_t rng_seed);

/// Rescales every sign block of u to the maximum of I_lam along its ray.
Field peak_projection(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params);

DescentResult descend(const Grid& g, const PotentialField& v, const Field& u0, const PerturbationParams& params,
                      const MountainPassConfig& cfg, const DirectionScale& scale = {});

struct MountainPassResult {
    explicit MountainPassResult(const Grid& g) : u(g), descent(Field(g)) {}

    Field u;
    double c_lambda = 0.0;
    double t0 = 0.0;
    int peak_index = 0;      // segment index of the discrete path peak
    double path_max = 0.0;   // refined sup of I_lam along the path
    int restarts = 0;
    DescentResult descent;
};

MountainPassResult mountain_pass(const Grid& g, const PotentialField& v, const PerturbationParams& params,
                                 const MountainPassConfig& cfg, const DirectionScale& scale = {});

/// Per-step deflation hook: step 0 is lambda_start, the last step is lambda = 0.
using StepScale = std::function<double(std::size_t step, const Field& u)>;

struct ContinuationResult {
    explicit ContinuationResult(Field final_field) : u(std::move(final_field)) {}

    Field u;
    SolveReport report;
    std::vector<Field> trajectory;  // converged field per step
};

/// Mountain pass at lambda_start, warm-started descents down the schedule,
/// then a final descent of the unperturbed functional. Throws CollapseError
/// if the final field has int u^2 < 1e-6.
ContinuationResult continue_to_limit(const Grid& g, const PotentialField& v, const ContinuationSchedule& sched,
                                     const PerturbationParams& params, const MountainPassConfig& cfg,
                                     const StepScale& scale = {});

}  // namespace logsch
