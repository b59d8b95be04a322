#include "logsch/multiplicity.hpp"

#include <algorithm>
#include <cmath>

#include "logsch/numfmt.hpp"

namespace logsch {

namespace {

/// Exponent q = 2 + delta with delta = (2* - 2)/2, 2* = 6 for N = 3 and
/// capped at q = 4 where the critical exponent is infinite.
double theta_exponent(int dim) {
    const double crit = dim >= 3 ? 2.0 * dim / (dim - 2.0) : 6.0;
    return std::min(4.0, 2.0 + (crit - 2.0) / 2.0);
}

double theta_proxy(const Grid& g, const Field& potential, const Field& u) {
    const double q = theta_exponent(g.dim());
    double s = 0.0;
    for (double t : u.values()) s += std::pow(std::abs(t), q);
    const double lq = std::pow(s * g.cell_volume(), 1.0 / q);
    const double h1 = norm_h1v(g, potential, u);
    return h1 == 0.0 ? 0.0 : lq / h1;
}

}  // namespace

double distance_mod_sign(const Grid& g, const Field& potential, const Field& u, const Field& w) {
    return std::min(norm_h1v(g, potential, u - w), norm_h1v(g, potential, u + w));
}

double deflation_factor(const Field& u, const DeflationSet& ds) {
    double factor = 1.0;
    for (std::size_t i = 0; i < ds.solutions.size(); ++i) {
        const double d = distance_mod_sign(u.grid(), ds.potential, u, ds.solutions[i]);
        if (d < 0.5 * ds.separation) {
            throw DeflationProximity("iterate re-entered the basin of stored solution " + std::to_string(i) +
                                     " (distance " + format_double(d) + ")");
        }
        factor *= std::pow(d, -ds.power) + ds.shift;
    }
    return factor;
}

Field deflate_direction(const Field& z, const Field& u, const DeflationSet& ds) {
    Field out = z;
    out *= deflation_factor(u, ds);
    return out;
}

Field structured_seed(const Grid& g, const PotentialField& v, int j) {
    if (j < 1) throw std::invalid_argument("structured_seed: j must be at least 1");
    if (2 * j >= g.points_per_dim()) {
        throw std::invalid_argument("structured_seed: j = " + std::to_string(j) +
                                    " exceeds the oscillations the grid resolves (need j < n/2)");
    }
    Field seed(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(g.unravel(i)[0]);
        // Physicists' Hermite recurrence H_{k+1} = 2x H_k - 2k H_{k-1}.
        double h_prev = 1.0, h = 2.0 * x;
        if (j == 1) h = 1.0;
        for (int k = 1; k < j - 1; ++k) {
            const double next = 2.0 * x * h - 2.0 * k * h_prev;
            h_prev = h;
            h = next;
        }
        seed[i] = h * std::exp(-0.5 * g.radius_sq(i));
    }
    seed *= 1.0 / norm_h1v(g, v.values, seed);
    return seed;
}

bool is_duplicate(const Grid& g, const Field& potential, const Field& u, const std::vector<FoundSolution>& accepted,
                  double separation) {
    return std::any_of(accepted.begin(), accepted.end(), [&](const FoundSolution& s) {
        return distance_mod_sign(g, potential, u, s.u) < separation;
    });
}

MultiplicityResult find_k_solutions(const Grid& g, const PotentialField& v, const ContinuationSchedule& sched,
                                    const PerturbationParams& params, const MountainPassConfig& cfg, int k,
                                    const MultiplicityOptions& opts) {
    if (k < 1) throw std::invalid_argument("find_k_solutions: k must be at least 1");
    sched.validate();
    cfg.validate();

    MultiplicityResult out;
    // Converged fields per continuation step of every accepted solution.
    std::vector<std::vector<Field>> trajectories;

    int seed_index = 0;
    while (static_cast<int>(out.solutions.size()) < k && out.attempts < 3 * k) {
        ++out.attempts;
        ++seed_index;
        MountainPassConfig seeded = cfg;
        try {
            seeded.seed_profile = structured_seed(g, v, seed_index);
        } catch (const std::invalid_argument& e) {
            out.diagnostics.push_back(e.what());
            break;
        }

        StepScale scale;
        if (!trajectories.empty()) {
            scale = [&](std::size_t step, const Field& u) {
                DeflationSet ds(v.values);
                ds.power = opts.power;
                ds.shift = opts.shift;
                ds.separation = opts.separation;
                for (const auto& traj : trajectories) ds.solutions.push_back(traj[std::min(step, traj.size() - 1)]);
                return deflation_factor(u, ds);
            };
        }

        ContinuationResult run{Field(g)};
        try {
            run = continue_to_limit(g, v, sched, params, seeded, scale);
        } catch (const std::runtime_error& e) {
            out.diagnostics.push_back("seed " + std::to_string(seed_index) + ": " + e.what());
            continue;
        }

        const LambdaRecord& last = run.report.records.back();
        if (!(last.resid_precond <= cfg.descent_tol)) {
            out.diagnostics.push_back("seed " + std::to_string(seed_index) + ": residual " +
                                      format_double(last.resid_precond) + " above tolerance");
            continue;
        }
        if (is_duplicate(g, v.values, run.u, out.solutions, opts.separation)) {
            out.diagnostics.push_back("seed " + std::to_string(seed_index) + ": duplicate of an accepted solution");
            continue;
        }
        FoundSolution sol(run.u);
        sol.energy = last.energy;
        sol.report = run.report;
        sol.seed_index = seed_index;
        sol.theta_proxy = theta_proxy(g, v.values, run.u);
        out.solutions.push_back(std::move(sol));
        trajectories.push_back(std::move(run.trajectory));
    }

    std::stable_sort(out.solutions.begin(), out.solutions.end(),
                     [](const FoundSolution& a, const FoundSolution& b) { return a.energy < b.energy; });
    for (std::size_t i = 1; i < out.solutions.size(); ++i) {
        if (out.solutions[i].energy - out.solutions[i - 1].energy < opts.energy_margin) {
            out.solutions[i].possible_duplicate = true;
            out.diagnostics.push_back("energies of solutions " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                      " differ by less than the duplicate margin");
        }
    }
    out.complete = static_cast<int>(out.solutions.size()) == k;
    if (!out.complete) {
        out.diagnostics.push_back("accepted " + std::to_string(out.solutions.size()) + " of " + std::to_string(k) +
                                  " solutions after " + std::to_string(out.attempts) + " attempts");
    }
    return out;
}

}  // namespace logsch
