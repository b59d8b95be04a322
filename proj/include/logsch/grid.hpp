#pragma once

// Uniform box discretization of [-L, L]^N with homogeneous Dirichlet exterior.
//
// Interior points are stored row-major with the last axis fastest. Forward
// differences live on the "extended" index set {-1, ..., n-1}^N, which holds
// every edge touching an interior point exactly once, so that
//
//   h^N * sum_ext grad(u) . grad(v) == h^N * sum_int (-Lap_h u) v
//
// holds to rounding.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace logsch {

class Grid {
public:
    /// Throws std::invalid_argument on dim outside {1,2,3}, half_width <= 0
    /// or points_per_dim < 3.
    Grid(int dim, double half_width, int points_per_dim);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return half_width_; }
    int points_per_dim() const noexcept { return points_; }
    double spacing() const noexcept { return spacing_; }

    /// n^N
    std::size_t size() const noexcept { return size_; }
    /// (n+1)^N, number of nodes carrying forward differences.
    std::size_t ext_size() const noexcept { return ext_size_; }
    /// h^N
    double cell_volume() const noexcept { return cell_volume_; }

    /// Coordinate of interior index i along any axis: -L + (i+1) h.
    double coord(int i) const noexcept { return -half_width_ + (i + 1) * spacing_; }

    /// Interior multi-index of a linear index (unused axes are 0).
    std::array<int, 3> unravel(std::size_t idx) const noexcept;
    /// |x|^2 at a linear interior index.
    double radius_sq(std::size_t idx) const noexcept;

    /// Stride of axis d in the interior layout.
    std::size_t stride(int d) const noexcept { return strides_[d]; }
    /// Stride of axis d in the extended layout.
    std::size_t ext_stride(int d) const noexcept { return ext_strides_[d]; }
    /// Extended linear index of an interior linear index.
    std::size_t ext_index(std::size_t idx) const noexcept;

    /// 64-bit FNV-1a digest of (dim, points, half_width bits).
    std::uint64_t digest() const noexcept;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.dim_ == b.dim_ && a.points_ == b.points_ && a.half_width_ == b.half_width_;
    }

private:
    int dim_;
    double half_width_;
    int points_;
    double spacing_;
    std::size_t size_;
    std::size_t ext_size_;
    double cell_volume_;
    std::array<std::size_t, 3> strides_{};
    std::array<std::size_t, 3> ext_strides_{};
};

inline Grid make_grid(int dim, double half_width, int points_per_dim) {
    return Grid(dim, half_width, points_per_dim);
}

/// Grid function sampled at interior points.
class Field {
public:
    explicit Field(const Grid& g) : grid_(g), values_(g.size(), 0.0) {}
    Field(const Grid& g, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s) noexcept;

    /// this += a * x
    Field& axpy(double a, const Field& x);

    bool all_finite() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

/// Forward differences: components[d][m] = (u(m + e_d) - u(m)) / h on the
/// extended set, with u = 0 outside the interior.
struct VectorField {
    Grid grid;
    std::vector<std::vector<double>> components;

    /// sum_d components[d][m]^2
    double norm_sq_at(std::size_t ext_idx) const noexcept;
};

/// Throws std::invalid_argument when the field is not defined on g.
void require_same_grid(const Grid& g, const Field& u, const char* what);

Field neg_laplacian_apply(const Grid& g, const Field& u);
VectorField forward_gradient(const Grid& g, const Field& u);

/// h^N * sum of interior values.
double integrate(const Grid& g, const Field& w);
/// integrate(a * b) without materializing the product.
double inner(const Grid& g, const Field& a, const Field& b);
/// h^N * sum over the extended set of grad(u) . grad(v).
double dirichlet_form(const Grid& g, const VectorField& du, const VectorField& dv);

/// sqrt( int |grad u|^2 + int V u^2 ), V given by its grid values.
double norm_h1v(const Grid& g, const Field& potential, const Field& u);
/// ( int |grad u|^p + int |u|^p )^(1/p); p must lie in (1, 2).
double norm_w1p(const Grid& g, const Field& u, double p);

double max_abs(const Field& u) noexcept;

}  // namespace logsch
