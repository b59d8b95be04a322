#pragma once

// Discrete energy of the logarithmic Schroedinger problem
//
//   -Lap u + V u = u log u^2
//
// and of its p-Laplacian perturbation
//
//   I_lam(u) = lam/p (int |grad u|^p + int |u|^p)
//            + 1/2 int (|grad u|^2 + (V+1) u^2) - 1/2 int u^2 log u^2.
//
// lam = 0 gives the unperturbed functional. |grad u|^p is regularized per
// extended node as (|grad u|^2 + eps^2)^(p/2) - eps^p so that it vanishes at
// u = 0 and stays differentiable; the gradient uses the matching weights.

#include "logsch/grid.hpp"
#include "logsch/potential.hpp"

namespace logsch {

/// t log t^2, extended by 0 at t = 0.
double log_nonlin(double t) noexcept;
/// t^2 log t^2, extended by 0 at t = 0.
double log_density(double t) noexcept;

struct PerturbationParams {
    double lambda = 0.0;
    double p = 1.5;
    double grad_reg_eps = 1e-10;

    /// Throws std::invalid_argument unless lambda in {0} U (0,1], p in (1,2)
    /// and grad_reg_eps > 0.
    void validate() const;
};

/// The individual integrals entering I_lam, each already integrated.
struct EnergyParts {
    double grad_p = 0.0;     // int (|grad u|^2 + eps^2)^(p/2) - eps^p
    double mass_p = 0.0;     // int |u|^p
    double dirichlet = 0.0;  // int |grad u|^2
    double potential = 0.0;  // int V u^2
    double mass = 0.0;       // int u^2
    double log_mass = 0.0;   // int u^2 log u^2

    double total(const PerturbationParams& params) const noexcept;
};

EnergyParts energy_parts(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params);

double energy_total(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params);

/// Field G with integrate(G phi) = <I'_lam(u), phi> for all phi:
///   G = lam (-div(w grad u) + |u|^(p-2) u) + (-Lap_h u + V u - u log u^2),
///   w = (|grad u|^2 + eps^2)^((p-2)/2).
Field el_gradient(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params);

/// The bracket multiplying lam in el_gradient.
Field perturbation_gradient(const Grid& g, const Field& u, const PerturbationParams& params);

/// -Lap_h u + V u - u log u^2 with V given by raw grid values.
Field residual_original(const Grid& g, const Field& potential, const Field& u);

}  // namespace logsch
