#include "logsch/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace logsch {

Grid::Grid(int dim, double half_width, int points_per_dim)
    : dim_(dim), half_width_(half_width), points_(points_per_dim) {
    if (dim < 1 || dim > 3) {
        throw std::invalid_argument("dimension out of range: dim must be 1, 2 or 3");
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw std::invalid_argument("invalid discretization: half_width must be positive");
    }
    if (points_per_dim < 3) {
        throw std::invalid_argument("invalid discretization: need at least 3 points per axis");
    }
    spacing_ = 2.0 * half_width / (points_per_dim + 1);

    const auto n = static_cast<std::size_t>(points_per_dim);
    size_ = 1;
    ext_size_ = 1;
    for (int d = 0; d < dim; ++d) {
        if (size_ > std::numeric_limits<std::size_t>::max() / (n + 1)) {
            throw std::invalid_argument("invalid discretization: point count overflows");
        }
        size_ *= n;
        ext_size_ *= n + 1;
    }
    std::size_t s = 1, es = 1;
    for (int d = dim - 1; d >= 0; --d) {
        strides_[d] = s;
        ext_strides_[d] = es;
        s *= n;
        es *= n + 1;
    }
    cell_volume_ = std::pow(spacing_, dim);
}

std::array<int, 3> Grid::unravel(std::size_t idx) const noexcept {
    std::array<int, 3> m{0, 0, 0};
    for (int d = 0; d < dim_; ++d) {
        m[d] = static_cast<int>(idx / strides_[d]);
        idx %= strides_[d];
    }
    return m;
}

double Grid::radius_sq(std::size_t idx) const noexcept {
    const auto m = unravel(idx);
    double r2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
        const double x = coord(m[d]);
        r2 += x * x;
    }
    return r2;
}

std::size_t Grid::ext_index(std::size_t idx) const noexcept {
    const auto m = unravel(idx);
    std::size_t e = 0;
    for (int d = 0; d < dim_; ++d) e += static_cast<std::size_t>(m[d] + 1) * ext_strides_[d];
    return e;
}

std::uint64_t Grid::digest() const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(dim_));
    mix(static_cast<std::uint64_t>(points_));
    mix(std::bit_cast<std::uint64_t>(half_width_));
    return h;
}

Field::Field(const Grid& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
    if (values_.size() != g.size()) {
        throw std::invalid_argument("field length does not match grid interior point count");
    }
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(grid_, o, "field addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(grid_, o, "field subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

Field& Field::axpy(double a, const Field& x) {
    require_same_grid(grid_, x, "axpy");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
    return *this;
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
    require_same_grid(a.grid(), b, "pointwise product");
    Field out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double VectorField::norm_sq_at(std::size_t ext_idx) const noexcept {
    double s = 0.0;
    for (const auto& c : components) s += c[ext_idx] * c[ext_idx];
    return s;
}

void require_same_grid(const Grid& g, const Field& u, const char* what) {
    if (!(u.grid() == g) || u.size() != g.size()) {
        throw std::invalid_argument(std::string("grid mismatch in ") + what);
    }
}

Field neg_laplacian_apply(const Grid& g, const Field& u) {
    require_same_grid(g, u, "neg_laplacian_apply");
    const int n = g.points_per_dim();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    Field out(g);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const auto m = g.unravel(idx);
        double acc = 2.0 * g.dim() * u[idx];
        for (int d = 0; d < g.dim(); ++d) {
            const std::size_t s = g.stride(d);
            if (m[d] > 0) acc -= u[idx - s];
            if (m[d] < n - 1) acc -= u[idx + s];
        }
        out[idx] = acc * inv_h2;
    }
    return out;
}

VectorField forward_gradient(const Grid& g, const Field& u) {
    require_same_grid(g, u, "forward_gradient");
    const int dim = g.dim();
    const int n = g.points_per_dim();
    const double inv_h = 1.0 / g.spacing();

    VectorField grad{g, std::vector<std::vector<double>>(dim, std::vector<double>(g.ext_size(), 0.0))};

    // Walk the extended multi-index m in {-1..n-1}^N.
    std::array<int, 3> m{-1, -1, -1};
    for (int d = dim; d < 3; ++d) m[d] = 0;
    for (std::size_t e = 0; e < g.ext_size(); ++e) {
        bool inside = true;
        std::size_t idx = 0;
        for (int d = 0; d < dim; ++d) {
            if (m[d] < 0) inside = false;
            else idx += static_cast<std::size_t>(m[d]) * g.stride(d);
        }
        const double here = inside ? u[idx] : 0.0;
        for (int d = 0; d < dim; ++d) {
            // The neighbor m + e_d is interior iff every other axis is >= 0
            // and m[d] + 1 <= n - 1.
            bool next_inside = m[d] + 1 <= n - 1;
            std::size_t nidx = 0;
            for (int k = 0; k < dim && next_inside; ++k) {
                const int mk = (k == d) ? m[k] + 1 : m[k];
                if (mk < 0) next_inside = false;
                else nidx += static_cast<std::size_t>(mk) * g.stride(k);
            }
            const double next = next_inside ? u[nidx] : 0.0;
            grad.components[d][e] = (next - here) * inv_h;
        }
        for (int d = dim - 1; d >= 0; --d) {
            if (++m[d] <= n - 1) break;
            m[d] = -1;
        }
    }
    return grad;
}

double integrate(const Grid& g, const Field& w) {
    require_same_grid(g, w, "integrate");
    double s = 0.0;
    for (double v : w.values()) s += v;
    return s * g.cell_volume();
}

double inner(const Grid& g, const Field& a, const Field& b) {
    require_same_grid(g, a, "inner");
    require_same_grid(g, b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * g.cell_volume();
}

double dirichlet_form(const Grid& g, const VectorField& du, const VectorField& dv) {
    if (!(du.grid == g) || !(dv.grid == g)) throw std::invalid_argument("grid mismatch in dirichlet_form");
    double s = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
        const auto& a = du.components[d];
        const auto& b = dv.components[d];
        for (std::size_t e = 0; e < a.size(); ++e) s += a[e] * b[e];
    }
    return s * g.cell_volume();
}

double norm_h1v(const Grid& g, const Field& potential, const Field& u) {
    require_same_grid(g, potential, "norm_h1v (potential)");
    const VectorField du = forward_gradient(g, u);
    double pot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) pot += potential[i] * u[i] * u[i];
    return std::sqrt(dirichlet_form(g, du, du) + pot * g.cell_volume());
}

double norm_w1p(const Grid& g, const Field& u, double p) {
    if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("p must lie in the open interval (1,2)");
    const VectorField du = forward_gradient(g, u);
    double grad_p = 0.0;
    for (std::size_t e = 0; e < g.ext_size(); ++e) grad_p += std::pow(du.norm_sq_at(e), 0.5 * p);
    double mass_p = 0.0;
    for (double v : u.values()) mass_p += std::pow(std::abs(v), p);
    return std::pow((grad_p + mass_p) * g.cell_volume(), 1.0 / p);
}

double max_abs(const Field& u) noexcept {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace logsch
