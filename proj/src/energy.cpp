#include "logsch/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace logsch {

double log_nonlin(double t) noexcept {
    // 2 log|t| rather than log(t^2), which underflows for |t| < 1e-154.
    return t == 0.0 ? 0.0 : 2.0 * t * std::log(std::abs(t));
}

double log_density(double t) noexcept {
    const double t2 = t * t;
    return t2 == 0.0 ? 0.0 : t2 * std::log(t2);
}

void PerturbationParams::validate() const {
    if (!(lambda == 0.0 || (lambda > 0.0 && lambda <= 1.0))) {
        throw std::invalid_argument("lambda must be 0 or lie in (0,1]");
    }
    if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("p must lie in the open interval (1,2)");
    if (!(grad_reg_eps > 0.0)) throw std::invalid_argument("grad_reg_eps must be positive");
}

double EnergyParts::total(const PerturbationParams& params) const noexcept {
    const double perturbation = params.lambda == 0.0 ? 0.0 : params.lambda / params.p * (grad_p + mass_p);
    return perturbation + 0.5 * (dirichlet + potential + mass) - 0.5 * log_mass;
}

EnergyParts energy_parts(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params) {
    params.validate();
    require_same_grid(g, u, "energy");
    require_same_grid(g, v.values, "energy (potential)");

    const VectorField du = forward_gradient(g, u);
    const double p = params.p;
    const double eps2 = params.grad_reg_eps * params.grad_reg_eps;
    const double eps_p = std::pow(params.grad_reg_eps, p);

    EnergyParts parts;
    for (std::size_t e = 0; e < g.ext_size(); ++e) {
        const double s = du.norm_sq_at(e);
        parts.dirichlet += s;
        if (params.lambda != 0.0) parts.grad_p += std::pow(s + eps2, 0.5 * p) - eps_p;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = u[i];
        const double t2 = t * t;
        parts.mass += t2;
        parts.potential += v.values[i] * t2;
        parts.log_mass += log_density(t);
        if (params.lambda != 0.0) parts.mass_p += std::pow(std::abs(t), p);
    }
    const double hn = g.cell_volume();
    parts.grad_p *= hn;
    parts.mass_p *= hn;
    parts.dirichlet *= hn;
    parts.potential *= hn;
    parts.mass *= hn;
    parts.log_mass *= hn;
    return parts;
}

double energy_total(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params) {
    return energy_parts(g, v, u, params).total(params);
}

Field el_gradient(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params) {
    params.validate();
    require_same_grid(g, u, "el_gradient");
    require_same_grid(g, v.values, "el_gradient (potential)");

    const int dim = g.dim();
    const double inv_h = 1.0 / g.spacing();
    const bool perturbed = params.lambda != 0.0;
    VectorField du = forward_gradient(g, u);

    // Plain Laplacian part from the unweighted differences.
    Field out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t e = g.ext_index(i);
        double lap = 0.0;
        for (int d = 0; d < dim; ++d) {
            const auto& c = du.components[d];
            lap += c[e - g.ext_stride(d)] - c[e];
        }
        out[i] = lap * inv_h + v.values[i] * u[i] - log_nonlin(u[i]);
    }
    if (!perturbed) return out;
    out.axpy(params.lambda, perturbation_gradient(g, u, params));
    return out;
}

Field perturbation_gradient(const Grid& g, const Field& u, const PerturbationParams& params) {
    require_same_grid(g, u, "perturbation_gradient");
    const int dim = g.dim();
    const double inv_h = 1.0 / g.spacing();
    VectorField du = forward_gradient(g, u);
    // Weighted fluxes w * grad u, in place.
    const double eps2 = params.grad_reg_eps * params.grad_reg_eps;
    const double expo = 0.5 * (params.p - 2.0);
    for (std::size_t e = 0; e < g.ext_size(); ++e) {
        const double w = std::pow(du.norm_sq_at(e) + eps2, expo);
        for (int d = 0; d < dim; ++d) du.components[d][e] *= w;
    }
    const double pm1 = params.p - 1.0;
    Field out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t e = g.ext_index(i);
        double div = 0.0;
        for (int d = 0; d < dim; ++d) {
            const auto& f = du.components[d];
            div += f[e - g.ext_stride(d)] - f[e];
        }
        const double t = u[i];
        const double mass_term = t == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(t), pm1), t);
        out[i] = div * inv_h + mass_term;
    }
    return out;
}

Field residual_original(const Grid& g, const Field& potential, const Field& u) {
    require_same_grid(g, potential, "residual_original (potential)");
    Field r = neg_laplacian_apply(g, u);
    for (std::size_t i = 0; i < g.size(); ++i) r[i] += potential[i] * u[i] - log_nonlin(u[i]);
    return r;
}

}  // namespace logsch
