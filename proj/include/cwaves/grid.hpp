#pragma once

// Uniform symmetric grid on [-L, L] with homogeneous Dirichlet ends, nodal
// fields, trapezoidal quadrature and the radial cut-off weights phi_n.

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "cwaves/errors.hpp"

namespace cwaves {

class Grid {
public:
    Grid(double half_length, std::size_t points)
        : half_length_(half_length), points_(points) {
        if (!(half_length > 0.0)) throw std::invalid_argument("grid: half length must be positive");
        if (points < 3) throw std::invalid_argument("grid: need at least 3 points");
        spacing_ = 2.0 * half_length / static_cast<double>(points - 1);
        nodes_.resize(points);
        for (std::size_t i = 0; i < points; ++i)
            nodes_[i] = -half_length + spacing_ * static_cast<double>(i);
        nodes_.front() = -half_length;
        nodes_.back() = half_length;
    }

    double half_length() const { return half_length_; }
    std::size_t points() const { return points_; }
    std::size_t interior_points() const { return points_ - 2; }
    double spacing() const { return spacing_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }

    bool operator==(const Grid& o) const {
        return half_length_ == o.half_length_ && points_ == o.points_;
    }

private:
    double half_length_;
    std::size_t points_;
    double spacing_;
    std::vector<double> nodes_;
};

using grid_ptr = std::shared_ptr<const Grid>;

inline grid_ptr build_grid(double half_length, std::size_t points) {
    return std::make_shared<const Grid>(half_length, points);
}

/// Nodal values over a shared grid. Immutable by convention after construction.
struct Field {
    grid_ptr grid;
    std::vector<double> values;

    Field() = default;
    Field(grid_ptr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (!grid) throw std::invalid_argument("field: null grid");
        if (values.size() != grid->points())
            throw std::invalid_argument("field: value count does not match grid");
    }
    static Field zero(const grid_ptr& g) {
        return Field(g, std::vector<double>(g->points(), 0.0));
    }
    template <typename Fn>
    static Field sample(const grid_ptr& g, Fn&& fn) {
        std::vector<double> v(g->points());
        for (std::size_t i = 0; i < g->points(); ++i) v[i] = fn(g->node(i));
        return Field(g, std::move(v));
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void require_same_grid(const Field& a, const Field& b) {
    if (!a.grid || !b.grid || !(*a.grid == *b.grid))
        throw std::invalid_argument("fields live on different grids");
}

// ---- algebra -------------------------------------------------------------

inline Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Field operator*(double s, const Field& a) {
    Field r = a;
    for (auto& v : r.values) v *= s;
    return r;
}

inline void axpy(double s, const Field& x, Field& y) {
    require_same_grid(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

// ---- quadrature ----------------------------------------------------------

/// Trapezoidal integral of nodal samples.
inline double integrate(const Field& f) {
    const double h = f.grid->spacing();
    const std::size_t n = f.size();
    double s = 0.5 * (f[0] + f[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
    return h * s;
}

inline double inner_l2(const Field& a, const Field& b) {
    require_same_grid(a, b);
    const double h = a.grid->spacing();
    const std::size_t n = a.size();
    double s = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += a[i] * b[i];
    return h * s;
}

inline double l2_norm_sq(const Field& a) { return inner_l2(a, a); }
inline double l2_norm(const Field& a) { return std::sqrt(l2_norm_sq(a)); }

/// Central-difference gradient samples; one-sided at the two ends.
inline Field gradient(const Field& u) {
    const double h = u.grid->spacing();
    const std::size_t n = u.size();
    Field g = Field::zero(u.grid);
    g[0] = (u[1] - u[0]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    g[n - 1] = (u[n - 1] - u[n - 2]) / h;
    return g;
}

inline double h1_norm_sq(const Field& u) {
    Field g = gradient(u);
    return l2_norm_sq(u) + l2_norm_sq(g);
}

inline double h1_norm(const Field& u) { return std::sqrt(h1_norm_sq(u)); }

/// Discrete L^p norm (||f||_p)^p via trapezoid of |f|^p, then the p-th root.
inline double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    Field a = f;
    for (auto& v : a.values) v = std::pow(std::abs(v), p);
    return std::pow(integrate(a), 1.0 / p);
}

inline double linf_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

// ---- cut-off weights -----------------------------------------------------

/// Radial cut-off profile: 0 on [0,1], 1 on [2,inf), quintic smoothstep between.
/// The derivative bound is attained at the midpoint of the transition.
struct CutoffProfile {
    double operator()(double t) const {
        if (t <= 1.0) return 0.0;
        if (t >= 2.0) return 1.0;
        const double y = t - 1.0;
        return y * y * y * (10.0 + y * (-15.0 + 6.0 * y));
    }
    // sup |phi'| = s'(1/2) of the quintic smoothstep on a unit interval
    static constexpr double derivative_bound = 15.0 / 8.0;
};

/// Samples of phi_n(x) = phi(|x|^2 / n^2).
inline Field cutoff_weights(const grid_ptr& grid, int n, const CutoffProfile& profile = {}) {
    if (n < 1) throw std::invalid_argument("cutoff_weights: n must be >= 1");
    const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    return Field::sample(grid, [&](double x) { return profile(x * x * inv_n2); });
}

/// Largest n for which phi_n is not identically zero on the grid (n < L).
inline int max_cutoff_index(const Grid& grid) {
    int n = static_cast<int>(std::ceil(grid.half_length())) - 1;
    return std::max(1, n);
}

} // namespace cwaves
