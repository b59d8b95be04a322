#include "logsch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "logsch/rng.hpp"

namespace logsch {

namespace {

CheckResult make_result(std::string_view name, double margin, double tolerance, bool pass, const Grid* g,
                        double lambda = 0.0, double p = 0.0) {
    CheckResult r;
    r.name = std::string(name);
    r.margin = margin;
    r.tolerance = tolerance;
    r.pass = pass;
    r.grid_digest = g ? g->digest() : 0;
    r.lambda = lambda;
    r.p = p;
    return r;
}

}  // namespace

CheckResult check_nehari(const Grid& g, const PotentialField& v, const Field& u, double tolerance) {
    const EnergyParts parts = energy_parts(g, v, u, PerturbationParams{});
    const double lhs = parts.dirichlet + parts.potential;
    const double margin = std::abs(lhs - parts.log_mass) / (1.0 + std::abs(lhs));
    return make_result("nehari", margin, tolerance, margin <= tolerance, &g);
}

CheckResult check_energy_identity(const Grid& g, const PotentialField& v, const Field& u,
                                  const PerturbationParams& params, double tolerance) {
    const double lhs = 2.0 * energy_total(g, v, u, params) - inner(g, el_gradient(g, v, u, params), u);

    // Right-hand side from unregularized quadrature, independent of the
    // energy/gradient code path.
    double grad_p = 0.0, mass_p = 0.0, mass = 0.0;
    if (params.lambda != 0.0) {
        const VectorField du = forward_gradient(g, u);
        for (std::size_t e = 0; e < g.ext_size(); ++e) grad_p += std::pow(du.norm_sq_at(e), 0.5 * params.p);
    }
    for (double t : u.values()) {
        mass += t * t;
        if (params.lambda != 0.0) mass_p += std::pow(std::abs(t), params.p);
    }
    const double hn = g.cell_volume();
    const double rhs = (2.0 - params.p) / params.p * params.lambda * (grad_p + mass_p) * hn + mass * hn;

    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    const double margin = scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
    return make_result("energy_identity", margin, tolerance, margin <= tolerance, &g, params.lambda, params.p);
}

CheckResult check_scaling(const Grid& g, const Field& potential, const Field& v, double mu, double tolerance) {
    if (mu == 0.0 || !std::isfinite(mu)) throw std::invalid_argument("scaling check needs a finite nonzero mu");
    Field shifted = potential;
    const double shift = -std::log(mu * mu);
    for (double& x : shifted.values()) x += shift;

    const Field direct = residual_original(g, shifted, v);
    Field scaled_input = v;
    scaled_input *= mu;
    Field via_scaling = residual_original(g, potential, scaled_input);
    via_scaling *= 1.0 / mu;

    double defect = 0.0, size = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        defect = std::max(defect, std::abs(direct[i] - via_scaling[i]));
        size = std::max({size, std::abs(direct[i]), std::abs(via_scaling[i])});
    }
    const double margin = size == 0.0 ? 0.0 : defect / size;
    return make_result("scaling", margin, tolerance, margin <= tolerance, &g);
}

CheckResult check_log_sobolev(const Grid& g, const Field& u, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("log-Sobolev parameter a must be positive");
    const double hn = g.cell_volume();
    double mass = 0.0, lhs = 0.0;
    for (double t : u.values()) {
        mass += t * t;
        lhs += log_density(t);
    }
    mass *= hn;
    lhs *= hn;
    if (!(mass > 0.0)) throw std::invalid_argument("log-Sobolev check needs a nonzero field");
    const VectorField du = forward_gradient(g, u);
    const double grad_sq = dirichlet_form(g, du, du);
    const double rhs = a * a / std::numbers::pi * grad_sq + (std::log(mass) - g.dim() * (1.0 + std::log(a))) * mass;
    const double margin = rhs - lhs + 1e-8 * (1.0 + std::abs(lhs));
    return make_result("log_sobolev", margin, 0.0, margin >= 0.0, &g);
}

CheckResult check_linf(const Field& u, double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("linf cap must be positive");
    const double margin = cap - max_abs(u);
    return make_result("linf", margin, cap, margin >= 0.0, &u.grid());
}

constexpr double kKinkGuard = 5e-4;

CheckResult check_gradient_fd(const Grid& g, const PotentialField& v, const PerturbationParams& params, int trials,
                              std::uint64_t rng_seed, double amplitude, double tolerance) {
    if (trials < 1) throw std::invalid_argument("gradient check needs at least one trial");
    constexpr double eps = 1e-5;
    Rng rng(rng_seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        // |t|^p and |grad u|^p are not C^2 at 0 and a difference quotient
        // straddling the kink is no oracle, so entries within kKinkGuard *
        // amplitude of 0, or of their predecessor along the first axis, are
        // redrawn. |grad u| >= |d_1 u| makes the one axis enough.
        Field u = rng.uniform_field(g, -amplitude, amplitude);
        const double guard = kKinkGuard * amplitude;
        const std::size_t s0 = g.stride(0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const bool has_prev = g.unravel(i)[0] > 0;
            while (std::abs(u[i]) < guard || (has_prev && std::abs(u[i] - u[i - s0]) < guard)) {
                u[i] = rng.uniform(-amplitude, amplitude);
            }
        }
        const Field phi = rng.uniform_field(g, -2.0, 2.0);
        const double pairing = inner(g, el_gradient(g, v, u, params), phi);
        Field plus = u, minus = u;
        plus.axpy(eps, phi);
        minus.axpy(-eps, phi);
        const double fd = (energy_total(g, v, plus, params) - energy_total(g, v, minus, params)) / (2.0 * eps);
        worst = std::max(worst, std::abs(pairing - fd) / (1.0 + std::abs(pairing)));
    }
    return make_result("gradient_fd", worst, tolerance, worst <= tolerance, &g, params.lambda, params.p);
}

}  // namespace logsch
