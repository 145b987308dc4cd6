#pragma once

// Discrete Schrodinger operator A = -Laplace + V - lambda on the interior
// nodes with homogeneous Dirichlet ends: symmetric tridiagonal with diagonal
// 2/h^2 + V(x_i) - lambda and off-diagonal -1/h^2.

#include <cmath>
#include <vector>

#include "cwaves/grid.hpp"
#include "cwaves/linalg.hpp"
#include "cwaves/potential.hpp"

namespace cwaves {

struct DiscreteOperator {
    grid_ptr grid;
    std::vector<double> diag;  // interior nodes only, size M-2
    double offdiag = 0.0;      // -1/h^2
    double lambda = 0.0;
    double rho_v_inf = 0.0;    // grid estimate of rho(V_inf)

    std::size_t dim() const { return diag.size(); }
    double ess_bottom() const { return rho_v_inf - lambda; }

    /// y = A u on fields (Dirichlet: boundary entries of the result are zero).
    Field apply(const Field& u) const {
        require_same_grid(u, Field::zero(grid));
        const std::size_t m = u.size();
        Field y = Field::zero(grid);
        const double inv_h2 = -offdiag;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            y[i] = inv_h2 * (2.0 * u[i] - u[i - 1] - u[i + 1]) +
                   (diag[i - 1] - 2.0 * inv_h2) * u[i];
        }
        return y;
    }
};

inline DiscreteOperator assemble(const grid_ptr& grid, const PotentialSpec& V, double lambda) {
    DiscreteOperator op;
    op.grid = grid;
    op.lambda = lambda;
    const double h = grid->spacing();
    const double inv_h2 = 1.0 / (h * h);
    op.offdiag = -inv_h2;
    op.diag.resize(grid->interior_points());
    for (std::size_t i = 0; i < op.diag.size(); ++i) {
        const double v = V(grid->node(i + 1));
        if (!std::isfinite(v)) throw numerical_error("assemble: non-finite potential sample");
        op.diag[i] = 2.0 * inv_h2 + v - lambda;
    }
    op.rho_v_inf = asymptotic_bottom(V, grid).value;
    return op;
}

/// Same matrix with an extra diagonal term added (used for linearizations).
inline DiscreteOperator with_added_diagonal(const DiscreteOperator& op,
                                            const std::vector<double>& extra) {
    DiscreteOperator out = op;
    for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] += extra[i];
    return out;
}

/// Interior slice of a field (the vector the tridiagonal matrix acts on).
inline std::vector<double> interior(const Field& u) {
    return std::vector<double>(u.values.begin() + 1, u.values.end() - 1);
}

inline Field from_interior(const grid_ptr& grid, const std::vector<double>& v) {
    Field f = Field::zero(grid);
    for (std::size_t i = 0; i < v.size(); ++i) f[i + 1] = v[i];
    return f;
}

} // namespace cwaves
