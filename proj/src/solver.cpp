#include "logsch/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "logsch/rng.hpp"
#include "logsch/spd_operator.hpp"
#include "logsch/verify.hpp"

namespace logsch {

namespace {

// Caps on the iterate-dependent metric coefficients; they only shape the
// search direction, never the energy.
constexpr double kWeightCap = 1e6;
constexpr double kLogStiffnessCap = 1e3;
// Sign blocks lighter than this fraction of int u^2 are left unscaled.
constexpr double kBlockMassFraction = 1e-4;
// Relative size of rounding error in an energy evaluation.
constexpr double kEnergyNoise = 1e-12;
// Newton polish starts once the residual is this small relative to ||u||.
constexpr double kPolishStart = 1e-3;
constexpr int kPolishCooldown = 10;

double mass_of(const Grid& g, const Field& u) { return inner(g, u, u); }

bool is_zero(const Field& u) {
    return std::all_of(u.values().begin(), u.values().end(), [](double x) { return x == 0.0; });
}

/// Connected same-sign regions (2N-neighborhood) with non-negligible mass.
std::vector<std::vector<std::size_t>> sign_blocks(const Grid& g, const Field& u) {
    const std::size_t n = g.size();
    const int pts = g.points_per_dim();
    std::vector<int> label(n, -1);
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<double> masses;
    double total = 0.0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] >= 0 || u[s] == 0.0) continue;
        const bool positive = u[s] > 0.0;
        const int id = static_cast<int>(blocks.size());
        blocks.emplace_back();
        double mass = 0.0;
        stack.assign(1, s);
        label[s] = id;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            blocks.back().push_back(i);
            mass += u[i] * u[i];
            const auto m = g.unravel(i);
            for (int d = 0; d < g.dim(); ++d) {
                const std::size_t st = g.stride(d);
                for (int dir : {-1, 1}) {
                    const int c = m[d] + dir;
                    if (c < 0 || c >= pts) continue;
                    const std::size_t j = dir < 0 ? i - st : i + st;
                    if (label[j] >= 0 || u[j] == 0.0 || (u[j] > 0.0) != positive) continue;
                    label[j] = id;
                    stack.push_back(j);
                }
            }
        }
        masses.push_back(mass);
        total += mass;
    }
    std::vector<std::vector<std::size_t>> kept;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (masses[b] >= kBlockMassFraction * total) kept.push_back(std::move(blocks[b]));
    }
    return kept;
}

/// Moves u to the maximizer of t -> I(u + (t-1) w) and returns t.
double maximize_along(const Grid& g, const PotentialField& v, const PerturbationParams& params, Field& u,
                      const Field& w) {
    auto slope = [&](double t) {
        Field x = u;
        x.axpy(t - 1.0, w);
        return inner(g, el_gradient(g, v, x, params), w);
    };
    double lo = 1.0, hi = 1.0;
    double flo = slope(1.0), fhi = flo;
    if (flo == 0.0) return 1.0;
    if (flo > 0.0) {
        for (int k = 0; k < 200 && fhi > 0.0; ++k) {
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            fhi = slope(hi);
        }
    } else {
        for (int k = 0; k < 200 && flo <= 0.0; ++k) {
            hi = lo;
            fhi = flo;
            lo *= 0.5;
            flo = slope(lo);
        }
    }
    if (!(flo > 0.0 && fhi <= 0.0)) {
        const double t = flo > 0.0 ? hi : lo;
        u.axpy(t - 1.0, w);
        return t;
    }
    // Illinois false position on the bracket.
    int side = 0;
    double t = lo;
    for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
        t = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
        const double ft = slope(t);
        if (ft == 0.0) {
            lo = hi = t;
            break;
        }
        if (ft > 0.0) {
            lo = t;
            flo = ft;
            if (side == 1) fhi *= 0.5;
            side = 1;
        } else {
            hi = t;
            fhi = ft;
            if (side == -1) flo *= 0.5;
            side = -1;
        }
    }
    t = 0.5 * (lo + hi);
    u.axpy(t - 1.0, w);
    return t;
}

/// -Lap + V + 1 augmented by the secant weights of the p-terms and the
/// positive part of the curvature of -u^2 log u^2 / 2.
SpdOperator adaptive_metric(const Grid& g, const PotentialField& v, const Field& u,
                            const PerturbationParams& params) {
    const int dim = g.dim();
    const double lam = params.lambda;
    const double eps2 = params.grad_reg_eps * params.grad_reg_eps;
    const double expo = 0.5 * (params.p - 2.0);

    std::vector<std::vector<double>> edges(dim, std::vector<double>(g.ext_size(), 1.0));
    if (lam != 0.0) {
        const VectorField du = forward_gradient(g, u);
        for (std::size_t e = 0; e < g.ext_size(); ++e) {
            const double w = 1.0 + lam * std::min(std::pow(du.norm_sq_at(e) + eps2, expo), kWeightCap);
            for (int d = 0; d < dim; ++d) edges[d][e] = w;
        }
    }
    std::vector<double> diag(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t2 = u[i] * u[i];
        double c = v.values[i] + 1.0;
        if (lam != 0.0) c += lam * std::min(std::pow(t2 + eps2, expo), kWeightCap);
        const double log_stiff = t2 > 0.0 ? -std::log(t2) - 3.0 : kLogStiffnessCap;
        c += std::clamp(log_stiff, 0.0, kLogStiffnessCap);
        diag[i] = c;
    }
    return SpdOperator(g, std::move(edges), std::move(diag));
}

// Hessian of I_lam at u applied to z. The smooth part is exact; the p-part is
// a central difference of its gradient.
Field hessian_apply(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params,
                    const Field& z) {
    Field out = neg_laplacian_apply(g, z);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t2 = u[i] * u[i];
        const double stiff = t2 > 0.0 ? std::min(-std::log(t2) - 2.0, kLogStiffnessCap) : kLogStiffnessCap;
        out[i] += (v.values[i] + stiff) * z[i];
    }
    if (params.lambda == 0.0) return out;
    double umax = 0.0, zmax = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        umax = std::max(umax, std::abs(u[i]));
        zmax = std::max(zmax, std::abs(z[i]));
    }
    if (zmax == 0.0) return out;
    const double tau = 1e-7 * std::max(umax, 1e-3) / zmax;
    Field plus = u, minus = u;
    plus.axpy(tau, z);
    minus.axpy(-tau, z);
    Field diff = perturbation_gradient(g, plus, params);
    diff -= perturbation_gradient(g, minus, params);
    out.axpy(params.lambda / (2.0 * tau), diff);
    return out;
}

// Preconditioned MINRES for the symmetric, possibly indefinite system A x = b.
Field minres(const std::function<Field(const Field&)>& apply, const SpdOperator& precond, const Field& b,
             double rel_tol, int max_iter) {
    const Grid& g = b.grid();
    auto dot = [](const Field& a, const Field& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };
    Field x(g), w(g), w1(g), w2(g);
    Field r1 = b, r2 = b;
    Field y = precond.solve(r1, 1e-12);
    const double beta1 = std::sqrt(std::max(dot(r1, y), 0.0));
    if (beta1 == 0.0) return x;
    double beta = beta1, oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        Field vk = y;
        vk *= 1.0 / beta;
        y = apply(vk);
        if (it >= 2) y.axpy(-beta / oldb, r1);
        const double alfa = dot(vk, y);
        y.axpy(-alfa / beta, r2);
        r1 = std::move(r2);
        r2 = y;
        y = precond.solve(r2, 1e-12);
        oldb = beta;
        const double bb = dot(r2, y);
        if (!(bb >= 0.0)) break;
        beta = std::sqrt(bb);
        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar *= sn;
        w1 = std::move(w2);
        w2 = std::move(w);
        w = vk;
        w.axpy(-oldeps, w1);
        w.axpy(-delta, w2);
        w *= 1.0 / gamma;
        x.axpy(phi, w);
        if (phibar <= rel_tol * beta1 || beta == 0.0) break;
    }
    return x;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && b - a > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

}  // namespace

void MountainPassConfig::validate() const {
    if (path_segments < 8) throw std::invalid_argument("path_segments must be at least 8");
    if (!(descent_tol > 0.0)) throw std::invalid_argument("descent_tol must be positive");
    if (max_outer < 0) throw std::invalid_argument("max_outer must be nonnegative");
    if (!(armijo.c1 > 0.0 && armijo.c1 < 1.0)) throw std::invalid_argument("Armijo c1 must lie in (0,1)");
    if (!(armijo.backtrack > 0.0 && armijo.backtrack < 1.0)) {
        throw std::invalid_argument("Armijo backtrack ratio must lie in (0,1)");
    }
    if (armijo.max_backtracks < 1) throw std::invalid_argument("Armijo max_backtracks must be positive");
    if (!(probe_radius > 0.0)) throw std::invalid_argument("probe_radius must be positive");
    if (!(collapse_mass > 0.0)) throw std::invalid_argument("collapse_mass must be positive");
    if (seed_profile && is_zero(*seed_profile)) throw std::invalid_argument("seed_profile must be nonzero");
}

void ContinuationSchedule::validate() const {
    if (!(lambda_start > 0.0 && lambda_start <= 1.0)) throw std::invalid_argument("lambda_start must lie in (0,1]");
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("lambda_ratio must lie in (0,1); the schedule never terminates otherwise");
    }
    if (!(lambda_min > 0.0 && lambda_min <= lambda_start)) {
        throw std::invalid_argument("lambda_min must lie in (0, lambda_start]");
    }
}

std::vector<double> ContinuationSchedule::lambdas() const {
    validate();
    std::vector<double> out;
    double lam = lambda_start;
    // Tolerate rounding in lambda_start * ratio^k so that 1 -> 1e-4 by 0.1 is 5 steps.
    while (lam >= lambda_min * (1.0 - 1e-9)) {
        out.push_back(lam);
        lam *= ratio;
    }
    return out;
}

Field default_seed(const Grid& g, const PotentialField& v) {
    Field e(g);
    for (std::size_t i = 0; i < g.size(); ++i) e[i] = std::exp(-0.5 * g.radius_sq(i));
    e *= 1.0 / norm_h1v(g, v.values, e);
    return e;
}

double preconditioned_residual(const Grid& g, const PotentialField& v, const Field& gradient) {
    const SpdOperator metric = h1v_metric(g, v.values);
    return norm_h1v(g, v.values, metric.solve(gradient, 1e-10));
}

double find_t0(const Grid& g, const PotentialField& v, const Field& e, const PerturbationParams& params,
               double probe_radius) {
    if (is_zero(e)) throw std::invalid_argument("path direction must be nonzero");
    const double norm_e = norm_h1v(g, v.values, e);
    double t = 1.0;
    for (int k = 0; k <= 60; ++k, t *= 2.0) {
        Field te = e;
        te *= t;
        if (t * norm_e > probe_radius && energy_total(g, v, te, params) < 0.0) return t;
    }
    throw GeometryError("find_t0: I(t e) stayed nonnegative up to t = 2^60 (degenerate seed)");
}

double check_geometry(const Grid& g, const PotentialField& v, const PerturbationParams& params, double rho,
                      int samples, std::uint64_t rng_seed) {
    if (!(rho > 0.0)) throw std::invalid_argument("check_geometry: rho must be positive");
    if (samples < 1) throw std::invalid_argument("check_geometry: samples must be at least 1");
    Rng rng(rng_seed);
    double lowest = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Field u = rng.uniform_field(g, -1.0, 1.0);
        const double norm = norm_h1v(g, v.values, u);
        if (norm == 0.0) continue;
        u *= rho / norm;
        lowest = std::min(lowest, energy_total(g, v, u, params));
    }
    return lowest;
}

Field peak_projection(const Grid& g, const PotentialField& v, const Field& u, const PerturbationParams& params) {
    Field out = u;
    for (int sweep = 0; sweep < 20; ++sweep) {
        const auto blocks = sign_blocks(g, out);
        if (blocks.empty()) break;
        double worst = 0.0;
        for (const auto& block : blocks) {
            Field w(g);
            for (std::size_t i : block) w[i] = out[i];
            const double t = maximize_along(g, v, params, out, w);
            worst = std::max(worst, std::abs(t - 1.0));
        }
        // One block is a single exact ray maximization.
        if (blocks.size() == 1 || worst < 1e-10) break;
    }
    return out;
}

DescentResult descend(const Grid& g, const PotentialField& v, const Field& u0, const PerturbationParams& params,
                      const MountainPassConfig& cfg, const DirectionScale& scale) {
    params.validate();
    cfg.validate();
    require_same_grid(g, u0, "descend");

    DescentResult res(u0);
    const SpdOperator metric = h1v_metric(g, v.values);
    if (!is_zero(u0)) res.u = peak_projection(g, v, u0, params);
    res.energy = energy_total(g, v, res.u, params);
    res.energy_history.push_back(res.energy);
    // Steps may not merge, split or drop sign blocks: descent stays on the
    // nodal class of the starting point.
    const std::size_t block_count = sign_blocks(g, res.u).size();

    Field z0(g);
    int cooldown = 0;
    while (true) {
        const Field grad = el_gradient(g, v, res.u, params);
        z0 = metric.solve(grad, 1e-10, 5000, &z0);
        res.residual = norm_h1v(g, v.values, z0);
        res.raw_residual = std::sqrt(inner(g, grad, grad));
        if (res.residual <= cfg.descent_tol) {
            res.converged = true;
            break;
        }
        if (res.iterations >= cfg.max_outer || res.stagnated || res.collapsed) break;

        // Near a critical point the energy decrease of a descent step drowns
        // in rounding; Newton on the gradient converges regardless.
        if (cooldown > 0) --cooldown;
        if (cooldown == 0 && res.residual <= kPolishStart * norm_h1v(g, v.values, res.u)) {
            const SpdOperator precond = adaptive_metric(g, v, res.u, params);
            const Field step = minres(
                [&](const Field& z) { return hessian_apply(g, v, res.u, params, z); }, precond, grad, 1e-8, 300);
            bool taken = false;
            for (double alpha = 1.0; alpha >= 0.1 && !taken; alpha *= 0.5) {
                Field trial = res.u;
                trial.axpy(-alpha, step);
                trial = peak_projection(g, v, trial, params);
                if (sign_blocks(g, trial).size() != block_count) continue;
                const double trial_energy = energy_total(g, v, trial, params);
                if (trial_energy > res.energy + kEnergyNoise * (1.0 + std::abs(res.energy))) continue;
                const Field z = metric.solve(el_gradient(g, v, trial, params), 1e-10, 5000, &z0);
                if (norm_h1v(g, v.values, z) >= res.residual) continue;
                res.u = std::move(trial);
                res.energy = trial_energy;
                taken = true;
            }
            if (taken) {
                res.energy_history.push_back(res.energy);
                ++res.iterations;
                continue;
            }
            cooldown = kPolishCooldown;
        }

        const Field dir = cfg.adaptive_metric ? adaptive_metric(g, v, res.u, params).solve(grad, 1e-8, 1000) : z0;
        const double factor = scale ? scale(res.u) : 1.0;
        const double slope = factor * inner(g, grad, dir);

        double alpha = 1.0;
        bool accepted = false;
        Field trial(g);
        double trial_energy = 0.0;
        for (int b = 0; b <= cfg.armijo.max_backtracks; ++b) {
            trial = res.u;
            trial.axpy(-alpha * factor, dir);
            trial = peak_projection(g, v, trial, params);
            trial_energy = energy_total(g, v, trial, params);
            if (sign_blocks(g, trial).size() != block_count) {
                alpha *= cfg.armijo.backtrack;
                continue;
            }
            if (trial_energy <= res.energy - cfg.armijo.c1 * alpha * slope) {
                accepted = true;
                break;
            }
            // Inside the rounding band of the energy sum the Armijo test is
            // blind; fall back to a decrease of the residual.
            if (std::abs(trial_energy - res.energy) <= kEnergyNoise * (1.0 + std::abs(res.energy))) {
                const Field z = metric.solve(el_gradient(g, v, trial, params), 1e-10, 5000, &z0);
                if (norm_h1v(g, v.values, z) < res.residual) {
                    accepted = true;
                    break;
                }
            }
            alpha *= cfg.armijo.backtrack;
        }
        if (!accepted) {
            res.stagnated = true;
            continue;
        }
        res.u = std::move(trial);
        res.energy = trial_energy;
        res.energy_history.push_back(trial_energy);
        ++res.iterations;
        if (mass_of(g, res.u) < cfg.collapse_mass) res.collapsed = true;
    }
    return res;
}

MountainPassResult mountain_pass(const Grid& g, const PotentialField& v, const PerturbationParams& params,
                                 const MountainPassConfig& cfg, const DirectionScale& scale) {
    params.validate();
    cfg.validate();
    const Field e = cfg.seed_profile ? *cfg.seed_profile : default_seed(g, v);
    require_same_grid(g, e, "mountain_pass seed");

    MountainPassResult out(g);
    out.t0 = find_t0(g, v, e, params, cfg.probe_radius);
    const int segments = cfg.path_segments;
    for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
        auto path_energy = [&](double s) {
            Field x = e;
            x *= s * out.t0;
            return energy_total(g, v, x, params);
        };
        int peak = 0;
        double peak_energy = path_energy(0.0);
        for (int k = 1; k <= segments; ++k) {
            const double ek = path_energy(static_cast<double>(k) / segments);
            if (ek > peak_energy) {  // strict: ties keep the smallest index
                peak = k;
                peak_energy = ek;
            }
        }
        out.peak_index = peak;
        const double a = std::max(0, peak - 1) / static_cast<double>(segments);
        const double b = std::min(segments, peak + 1) / static_cast<double>(segments);
        out.path_max = std::max(peak_energy, golden_max(path_energy, a, b));

        Field start = e;
        start *= out.t0 * peak / segments;
        out.descent = descend(g, v, start, params, cfg, scale);
        out.restarts = attempt;
        if (!out.descent.collapsed && mass_of(g, out.descent.u) >= cfg.collapse_mass) {
            out.u = out.descent.u;
            out.c_lambda = out.descent.energy;
            return out;
        }
        out.t0 *= 2.0;
    }
    throw GeometryError("mountain_pass: iterate collapsed to zero after " + std::to_string(cfg.max_restarts) +
                        " restarts");
}

ContinuationResult continue_to_limit(const Grid& g, const PotentialField& v, const ContinuationSchedule& sched,
                                     const PerturbationParams& params, const MountainPassConfig& cfg,
                                     const StepScale& scale) {
    const auto started = std::chrono::steady_clock::now();
    const std::vector<double> lambdas = sched.lambdas();
    PerturbationParams step_params = params;
    step_params.lambda = lambdas.front();
    step_params.validate();

    auto step_scale = [&scale](std::size_t step) -> DirectionScale {
        if (!scale) return {};
        return [&scale, step](const Field& u) { return scale(step, u); };
    };

    ContinuationResult out{Field(g)};
    auto record = [&](const DescentResult& d, double lam) {
        LambdaRecord r;
        r.lambda = lam;
        r.energy = d.energy;
        r.resid_precond = d.residual;
        r.resid_raw = d.raw_residual;
        r.iterations = d.iterations;
        r.mass = mass_of(g, d.u);
        r.lambda_w1p_p = lam == 0.0 ? 0.0 : lam * std::pow(norm_w1p(g, d.u, params.p), params.p);
        r.linf = max_abs(d.u);
        r.converged = d.converged;
        out.report.records.push_back(r);
        out.trajectory.push_back(d.u);
    };

    const MountainPassResult mp = mountain_pass(g, v, step_params, cfg, step_scale(0));
    out.report.t0 = mp.t0;
    out.report.path_max = mp.path_max;
    record(mp.descent, step_params.lambda);
    Field u = mp.u;

    for (std::size_t k = 1; k < lambdas.size(); ++k) {
        step_params.lambda = lambdas[k];
        const DescentResult d = descend(g, v, u, step_params, cfg, step_scale(k));
        record(d, lambdas[k]);
        u = d.u;
    }
    step_params.lambda = 0.0;
    const DescentResult last = descend(g, v, u, step_params, cfg, step_scale(lambdas.size()));
    record(last, 0.0);
    u = last.u;

    const double mass = mass_of(g, u);
    if (!(mass >= 1e-6)) {
        throw CollapseError("continuation collapsed: int u^2 = " + std::to_string(mass) + " < 1e-6");
    }
    out.report.h1v_norm = norm_h1v(g, v.values, u);
    out.report.nehari_margin = check_nehari(g, v, u).margin;
    out.report.energy_identity_margin = check_energy_identity(g, v, u, step_params).margin;
    out.report.linf = max_abs(u);
    out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out.u = std::move(u);
    return out;
}

}  // namespace logsch
