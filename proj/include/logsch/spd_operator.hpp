#pragma once

// Symmetric positive definite operators of the form
//
//   (A z)_j = sum_d [ k_d(j-e_d) (z_j - z_{j-e_d}) - k_d(j) (z_{j+e_d} - z_j) ] / h^2 + c_j z_j
//
// with zero Dirichlet exterior; k_d lives on the extended index set (edge
// from m to m+e_d), c on the interior. k = 1, c = V + 1 is the H^1_V metric
// used for residual measurement.

#include <cstdint>
#include <optional>
#include <vector>

#include "logsch/grid.hpp"

namespace logsch {

class SpdOperator {
public:
    /// Unit edge weights.
    SpdOperator(const Grid& g, std::vector<double> diag);
    SpdOperator(const Grid& g, std::vector<std::vector<double>> edge_weights, std::vector<double> diag);

    const Grid& grid() const noexcept { return grid_; }
    Field apply(const Field& z) const;
    /// Main diagonal of the matrix.
    std::vector<double> diagonal() const;

    struct SolveStats {
        int iterations = 0;
        double relative_residual = 0.0;
    };

    /// Direct tridiagonal elimination in 1D, Jacobi-preconditioned CG
    /// otherwise. `guess` seeds CG.
    Field solve(const Field& rhs, double rel_tol, int max_iter = 5000, const Field* guess = nullptr,
                SolveStats* stats = nullptr) const;

private:
    double weight(int d, std::size_t ext) const noexcept {
        return edge_weights_.empty() ? 1.0 : edge_weights_[d][ext];
    }
    void build_tables();
    Field solve_tridiagonal(const Field& rhs) const;
    Field solve_cg(const Field& rhs, double rel_tol, int max_iter, const Field* guess, SolveStats* stats) const;

    Grid grid_;
    std::vector<std::vector<double>> edge_weights_;
    std::vector<double> diag_;
    // Per interior point and axis: neighbor indices (-1 when outside) and the
    // extended indices of the left and right edges.
    std::vector<std::int64_t> left_, right_;
    std::vector<std::size_t> ext_left_, ext_right_;
};

/// The fixed metric -Lap_h + V + 1.
SpdOperator h1v_metric(const Grid& g, const Field& potential);

}  // namespace logsch
