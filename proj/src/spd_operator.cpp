#include "logsch/spd_operator.hpp"

#include <cmath>
#include <stdexcept>

namespace logsch {

SpdOperator::SpdOperator(const Grid& g, std::vector<double> diag) : grid_(g), diag_(std::move(diag)) {
    if (diag_.size() != g.size()) throw std::invalid_argument("operator diagonal does not match grid");
    build_tables();
}

SpdOperator::SpdOperator(const Grid& g, std::vector<std::vector<double>> edge_weights, std::vector<double> diag)
    : grid_(g), edge_weights_(std::move(edge_weights)), diag_(std::move(diag)) {
    if (diag_.size() != g.size()) throw std::invalid_argument("operator diagonal does not match grid");
    if (edge_weights_.size() != static_cast<std::size_t>(g.dim())) {
        throw std::invalid_argument("operator needs one edge-weight array per axis");
    }
    for (const auto& w : edge_weights_) {
        if (w.size() != g.ext_size()) throw std::invalid_argument("edge weights must live on the extended set");
    }
    build_tables();
}

void SpdOperator::build_tables() {
    const int dim = grid_.dim();
    const int n = grid_.points_per_dim();
    const std::size_t size = grid_.size();
    left_.resize(size * dim);
    right_.resize(size * dim);
    ext_left_.resize(size * dim);
    ext_right_.resize(size * dim);
    for (std::size_t i = 0; i < size; ++i) {
        const auto m = grid_.unravel(i);
        const std::size_t e = grid_.ext_index(i);
        for (int d = 0; d < dim; ++d) {
            const std::size_t k = i * dim + d;
            const auto s = static_cast<std::int64_t>(grid_.stride(d));
            left_[k] = m[d] > 0 ? static_cast<std::int64_t>(i) - s : -1;
            right_[k] = m[d] < n - 1 ? static_cast<std::int64_t>(i) + s : -1;
            ext_left_[k] = e - grid_.ext_stride(d);
            ext_right_[k] = e;
        }
    }
}

Field SpdOperator::apply(const Field& z) const {
    require_same_grid(grid_, z, "SpdOperator::apply");
    const int dim = grid_.dim();
    const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
    Field out(grid_);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double acc = 0.0;
        const double zi = z[i];
        for (int d = 0; d < dim; ++d) {
            const std::size_t k = i * dim + d;
            const double zl = left_[k] >= 0 ? z[static_cast<std::size_t>(left_[k])] : 0.0;
            const double zr = right_[k] >= 0 ? z[static_cast<std::size_t>(right_[k])] : 0.0;
            acc += weight(d, ext_left_[k]) * (zi - zl) - weight(d, ext_right_[k]) * (zr - zi);
        }
        out[i] = acc * inv_h2 + diag_[i] * zi;
    }
    return out;
}

std::vector<double> SpdOperator::diagonal() const {
    const int dim = grid_.dim();
    const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
    std::vector<double> out(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double acc = 0.0;
        for (int d = 0; d < dim; ++d) {
            const std::size_t k = i * dim + d;
            acc += weight(d, ext_left_[k]) + weight(d, ext_right_[k]);
        }
        out[i] = acc * inv_h2 + diag_[i];
    }
    return out;
}

Field SpdOperator::solve(const Field& rhs, double rel_tol, int max_iter, const Field* guess, SolveStats* stats) const {
    require_same_grid(grid_, rhs, "SpdOperator::solve");
    if (grid_.dim() == 1) {
        if (stats) *stats = {1, 0.0};
        return solve_tridiagonal(rhs);
    }
    return solve_cg(rhs, rel_tol, max_iter, guess, stats);
}

Field SpdOperator::solve_tridiagonal(const Field& rhs) const {
    const std::size_t n = grid_.size();
    const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
    const std::vector<double> diag = diagonal();
    // Off-diagonal between j and j+1 is -k(ext j+1) / h^2.
    std::vector<double> c(n), d(n);
    Field x(grid_);
    double denom = diag[0];
    c[0] = n > 1 ? -weight(0, ext_right_[0]) * inv_h2 / denom : 0.0;
    d[0] = rhs[0] / denom;
    for (std::size_t j = 1; j < n; ++j) {
        const double a = -weight(0, ext_left_[j]) * inv_h2;
        denom = diag[j] - a * c[j - 1];
        c[j] = j + 1 < n ? -weight(0, ext_right_[j]) * inv_h2 / denom : 0.0;
        d[j] = (rhs[j] - a * d[j - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) x[j] = d[j] - c[j] * x[j + 1];
    return x;
}

Field SpdOperator::solve_cg(const Field& rhs, double rel_tol, int max_iter, const Field* guess,
                            SolveStats* stats) const {
    const std::size_t n = grid_.size();
    const std::vector<double> diag = diagonal();
    auto dot = [n](const Field& a, const Field& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };

    Field x = guess ? *guess : Field(grid_);
    Field r = rhs;
    if (guess) r -= apply(x);
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) {
        if (stats) *stats = {0, 0.0};
        return Field(grid_);
    }
    Field zr(grid_);
    for (std::size_t i = 0; i < n; ++i) zr[i] = r[i] / diag[i];
    Field p = zr;
    double rz = dot(r, zr);
    int it = 0;
    double rel = std::sqrt(dot(r, r)) / bnorm;
    while (rel > rel_tol && it < max_iter) {
        const Field ap = apply(p);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rz / pap;
        x.axpy(alpha, p);
        r.axpy(-alpha, ap);
        for (std::size_t i = 0; i < n; ++i) zr[i] = r[i] / diag[i];
        const double rz_new = dot(r, zr);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = zr[i] + beta * p[i];
        ++it;
        rel = std::sqrt(dot(r, r)) / bnorm;
    }
    if (stats) *stats = {it, rel};
    return x;
}

SpdOperator h1v_metric(const Grid& g, const Field& potential) {
    require_same_grid(g, potential, "h1v_metric");
    std::vector<double> diag(potential.values().begin(), potential.values().end());
    for (double& c : diag) c += 1.0;
    return SpdOperator(g, std::move(diag));
}

}  // namespace logsch
