#pragma once

// Tridiagonal kernels: LU with partial pivoting (robust for indefinite
// systems such as Newton Jacobians) and a symmetric matvec.

#include <cmath>
#include <cstddef>
#include <vector>

#include "cwaves/errors.hpp"

namespace cwaves {

/// LU factorization of a tridiagonal matrix with partial pivoting.
/// Row swaps introduce one extra superdiagonal (the classic dgttrf layout).
class TridiagLU {
public:
    TridiagLU(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
        : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
        const std::size_t n = d_.size();
        du2_.assign(n > 2 ? n - 2 : 0, 0.0);
        ipiv_.assign(n, 0);
        factor();
    }

    /// Symmetric convenience constructor: constant off-diagonal.
    static TridiagLU symmetric(const std::vector<double>& diag, double off) {
        std::vector<double> l(diag.size() > 1 ? diag.size() - 1 : 0, off);
        return TridiagLU(l, diag, l);
    }

    bool singular() const { return singular_; }
    double min_pivot() const { return min_pivot_; }

    void solve_in_place(std::vector<double>& b) const {
        const std::size_t n = d_.size();
        if (singular_) throw numerical_error("tridiagonal solve: singular matrix");
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (ipiv_[i] != static_cast<int>(i)) std::swap(b[i], b[i + 1]);
            b[i + 1] -= mult_[i] * b[i];
        }
        // back substitution
        b[n - 1] /= d_[n - 1];
        if (n >= 2) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (std::size_t k = n; k-- > 2;) {
            std::size_t i = k - 2;
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
        }
    }

    std::vector<double> solve(std::vector<double> b) const {
        solve_in_place(b);
        return b;
    }

private:
    void factor() {
        const std::size_t n = d_.size();
        mult_.assign(n > 1 ? n - 1 : 0, 0.0);
        min_pivot_ = std::abs(d_.empty() ? 0.0 : d_[0]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                ipiv_[i] = static_cast<int>(i);
                if (d_[i] == 0.0) {
                    singular_ = true;
                    return;
                }
                const double m = dl_[i] / d_[i];
                mult_[i] = m;
                d_[i + 1] -= m * du_[i];
                if (i + 2 < n) du2_[i] = 0.0;
            } else {
                ipiv_[i] = static_cast<int>(i) + 1;
                const double m = d_[i] / dl_[i];
                mult_[i] = m;
                d_[i] = dl_[i];
                const double tmp = d_[i + 1];
                d_[i + 1] = du_[i] - m * tmp;
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -m * du2_[i];
                }
                du_[i] = tmp;
            }
            min_pivot_ = std::min(min_pivot_, std::abs(d_[i]));
        }
        if (!d_.empty()) min_pivot_ = std::min(min_pivot_, std::abs(d_[n - 1]));
        if (d_[n - 1] == 0.0) singular_ = true;
    }

    std::vector<double> dl_, d_, du_, du2_, mult_;
    std::vector<int> ipiv_;
    bool singular_ = false;
    double min_pivot_ = 0.0;
};

/// y = T x for a symmetric tridiagonal matrix (diag, constant off-diagonal).
inline void sym_tridiag_matvec(const std::vector<double>& diag, double off,
                               const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = diag.size();
    y.resize(n);
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + off * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
        y[i] = off * x[i - 1] + diag[i] * x[i] + off * x[i + 1];
    y[n - 1] = off * x[n - 2] + diag[n - 1] * x[n - 1];
}

} // namespace cwaves
