#pragma once

// Low spectrum of the discrete operator, classification against the essential
// bottom and the kernel tolerance band, the splitting X_- + X_0 + X_+ with its
// orthogonal projections, exponential decay fits of eigenfields, and the
// semigroup constants (K, rho_+, rho_-).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cwaves/eigensolve.hpp"
#include "cwaves/grid.hpp"
#include "cwaves/operator.hpp"

namespace cwaves {

enum class eig_class { negative, kernel, positive, continuum_artifact };

inline const char* to_string(eig_class c) {
    switch (c) {
        case eig_class::negative: return "negative";
        case eig_class::kernel: return "kernel";
        case eig_class::positive: return "positive";
        case eig_class::continuum_artifact: return "continuum_artifact";
    }
    return "?";
}

struct SpectralData {
    grid_ptr grid;
    double lambda = 0.0;                 // shift used in A = -Laplace + V - lambda
    double ess_bottom = 0.0;             // rho(V_inf) - lambda
    double tau_ker = 0.0;
    std::vector<double> spectrum;        // full discrete spectrum, ascending
    std::vector<double> eigenvalues;     // k lowest
    std::vector<Field> eigenfields;      // L2-orthonormal, zero Dirichlet ends
    std::vector<double> residuals;       // ||A e - mu e||_{L2} per pair
    std::vector<eig_class> classes;      // per computed pair

    double rho_plus = 0.0;               // decay rate available on X_+
    double rho_minus = 0.0;              // growth rate on X_- (0 when empty)
    std::optional<double> K_smoothing;   // measured constant of the X_+ bound

    std::size_t count_class(eig_class c) const {
        std::size_t n = 0;
        for (auto cl : classes)
            if (cl == c) ++n;
        return n;
    }
};

inline double default_tau_ker(const std::vector<double>& window) {
    if (window.size() < 2) return 1e-12;
    const double width = window.back() - window.front();
    return std::max(1e-12, 1e-6 * width);
}

/// k lowest eigenpairs of A plus its full discrete spectrum. Deterministic.
inline SpectralData eigen_lowest(const DiscreteOperator& op, std::size_t k,
                                 double tau_ker_override = -1.0) {
    const std::size_t n = op.dim();
    if (k < 1 || k > n) throw std::invalid_argument("eigen_lowest: need 1 <= k <= M-2");

    SpectralData sd;
    sd.grid = op.grid;
    sd.lambda = op.lambda;
    sd.ess_bottom = op.ess_bottom();
    sd.spectrum = tridiag_eigenvalues(op.diag, op.offdiag);
    sd.eigenvalues.assign(sd.spectrum.begin(), sd.spectrum.begin() + k);
    sd.tau_ker = tau_ker_override > 0.0 ? tau_ker_override : default_tau_ker(sd.eigenvalues);

    auto pairs = tridiag_lowest_pairs(op.diag, op.offdiag, sd.spectrum, k);
    const double h = op.grid->spacing();
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    for (auto& p : pairs) {
        Field e = Field::zero(op.grid);
        for (std::size_t i = 0; i < p.vector.size(); ++i) e[i + 1] = p.vector[i] * inv_sqrt_h;
        sd.eigenfields.push_back(std::move(e));
        sd.residuals.push_back(p.residual); // equals the L2 residual for unit vectors
        const double tol = 1e-8 * std::max(1.0, std::abs(p.value));
        if (p.residual > tol)
            throw numerical_error("eigen_lowest: residual " + std::to_string(p.residual) +
                                  " exceeds tolerance for eigenvalue " + std::to_string(p.value));
    }
    for (double mu : sd.eigenvalues) {
        if (mu >= sd.ess_bottom)
            sd.classes.push_back(eig_class::continuum_artifact);
        else if (mu < -sd.tau_ker)
            sd.classes.push_back(eig_class::negative);
        else if (mu <= sd.tau_ker)
            sd.classes.push_back(eig_class::kernel);
        else
            sd.classes.push_back(eig_class::positive);
    }
    // rho_+: smallest genuine positive eigenvalue, else the essential bottom
    sd.rho_plus = sd.ess_bottom > 0.0 ? sd.ess_bottom : 0.0;
    for (std::size_t i = 0; i < sd.classes.size(); ++i) {
        if (sd.classes[i] == eig_class::positive) {
            sd.rho_plus = sd.eigenvalues[i];
            break;
        }
    }
    // rho_-: magnitude of the largest (least negative) negative eigenvalue
    sd.rho_minus = 0.0;
    for (std::size_t i = 0; i < sd.classes.size(); ++i)
        if (sd.classes[i] == eig_class::negative) sd.rho_minus = -sd.eigenvalues[i];
    return sd;
}

// ---- Morse counting --------------------------------------------------------

struct MorseCount {
    std::size_t count = 0;
    bool boundary = false; // an eigenvalue sits inside the tolerance band at level
};

/// Number of eigenvalues strictly below level - tau_ker; precondition
/// level < essential bottom so the count is finite-dimensionally meaningful.
inline MorseCount morse_count(const SpectralData& sd, double level) {
    if (level >= sd.ess_bottom)
        throw std::invalid_argument("morse_count: level is not below the essential bottom");
    MorseCount mc;
    for (double mu : sd.spectrum) {
        if (mu < level - sd.tau_ker) ++mc.count;
        if (std::abs(mu - level) <= sd.tau_ker) mc.boundary = true;
        if (mu > level + sd.tau_ker) break;
    }
    return mc;
}

// ---- projections ------------------------------------------------------------

struct ProjectionSplit {
    std::vector<Field> kernel_basis;    // X_0
    std::vector<Field> negative_basis;  // discrete X_-
    double tau_ker = 0.0;

    std::size_t dim_x0() const { return kernel_basis.size(); }
    std::size_t d_minus() const { return negative_basis.size(); }

    Field apply_p(const Field& u) const {
        Field r = Field::zero(u.grid);
        for (const auto& phi : kernel_basis) axpy(inner_l2(u, phi), phi, r);
        return r;
    }
    Field apply_q_minus(const Field& u) const {
        Field r = Field::zero(u.grid);
        for (const auto& phi : negative_basis) axpy(inner_l2(u, phi), phi, r);
        return r;
    }
    Field apply_q_plus(const Field& u) const {
        Field r = u;
        for (const auto& phi : kernel_basis) axpy(-inner_l2(u, phi), phi, r);
        for (const auto& phi : negative_basis) axpy(-inner_l2(u, phi), phi, r);
        return r;
    }
    /// Q = I - P.
    Field apply_q(const Field& u) const {
        Field r = u;
        for (const auto& phi : kernel_basis) axpy(-inner_l2(u, phi), phi, r);
        return r;
    }
};

/// Splits the computed window into X_-, X_0 bases; verifies by a gap check
/// that no kernel candidate lies beyond the computed eigenvector window.
inline ProjectionSplit projections(const SpectralData& sd, double tau_ker = -1.0) {
    ProjectionSplit ps;
    ps.tau_ker = tau_ker > 0.0 ? tau_ker : sd.tau_ker;
    const std::size_t k = sd.eigenvalues.size();
    if (k < sd.spectrum.size() && sd.spectrum[k] <= ps.tau_ker)
        throw numerical_error("projections: possible kernel eigenvalue beyond computed window");
    for (std::size_t i = 0; i < k; ++i) {
        const double mu = sd.eigenvalues[i];
        if (mu >= sd.ess_bottom) continue; // continuum artifacts excluded
        if (mu < -ps.tau_ker)
            ps.negative_basis.push_back(sd.eigenfields[i]);
        else if (mu <= ps.tau_ker)
            ps.kernel_basis.push_back(sd.eigenfields[i]);
    }
    return ps;
}

// ---- decay-rate fit ---------------------------------------------------------

struct DecayFit {
    double delta = 0.0;     // fitted rate, |u| ~ C exp(-delta |x|)
    double amplitude = 0.0; // C
    double residual = 0.0;  // rms residual of the log-linear fit
    bool ok = false;        // positive rate obtained from a usable window
    std::string message;
};

/// Least-squares fit of log|u| against |x| over nodes with |x| in the window.
/// Windows must stay at least 10% of L away from the Dirichlet boundary.
inline DecayFit decay_rate(const Field& u, double window_lo, double window_hi) {
    const double L = u.grid->half_length();
    if (!(window_lo > 0.0) || !(window_hi > window_lo))
        throw std::invalid_argument("decay_rate: bad window");
    if (window_hi > 0.9 * L)
        throw std::invalid_argument("decay_rate: window too close to the Dirichlet boundary");

    double peak = linf_norm(u);
    DecayFit fit;
    if (peak == 0.0) {
        fit.message = "field vanishes";
        return fit;
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double ax = std::abs(u.grid->node(i));
        if (ax < window_lo || ax > window_hi) continue;
        const double av = std::abs(u[i]);
        if (av < 1e-14 * peak) continue; // below eigenvector noise floor
        xs.push_back(ax);
        ys.push_back(std::log(av));
    }
    if (xs.size() < 3) {
        fit.message = "field vanishes on the fit window";
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        rss += r * r;
    }
    fit.delta = -slope;
    fit.amplitude = std::exp(intercept);
    fit.residual = std::sqrt(rss / n);
    fit.ok = fit.delta > 0.0;
    if (!fit.ok) fit.message = "non-negative fitted slope";
    return fit;
}

// ---- semigroup constants and eigen-expansion ---------------------------------

/// Coefficients of u in the computed eigenbasis plus the unresolved remainder.
inline std::vector<double> eigen_coeffs(const SpectralData& sd, const Field& u) {
    std::vector<double> c(sd.eigenfields.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = inner_l2(u, sd.eigenfields[i]);
    return c;
}

inline Field eigen_reconstruct(const SpectralData& sd, const std::vector<double>& c) {
    Field u = Field::zero(sd.grid);
    for (std::size_t i = 0; i < c.size(); ++i) axpy(c[i], sd.eigenfields[i], u);
    return u;
}

/// S(t) u by eigen-expansion, valid for u in the span of the computed window.
inline Field semigroup_apply(const SpectralData& sd, const Field& u, double t) {
    auto c = eigen_coeffs(sd, u);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-sd.eigenvalues[i] * t);
    return eigen_reconstruct(sd, c);
}

/// Endpoint of u' = -A u + g (g constant in time) by eigen-expansion.
inline Field duhamel_constant_forcing(const SpectralData& sd, const Field& u0, const Field& g,
                                      double t) {
    auto cu = eigen_coeffs(sd, u0);
    auto cg = eigen_coeffs(sd, g);
    for (std::size_t i = 0; i < cu.size(); ++i) {
        const double mu = sd.eigenvalues[i];
        const double decay = std::exp(-mu * t);
        double convolved;
        if (std::abs(mu) > 1e-13)
            convolved = (1.0 - decay) / mu;
        else
            convolved = t; // kernel direction: integral of 1
        cu[i] = decay * cu[i] + convolved * cg[i];
    }
    return eigen_reconstruct(sd, cu);
}

struct SmoothingConstant {
    double K = 0.0;
    double rho_plus = 0.0;
    std::size_t probes = 0;
    std::uint64_t seed = 0;
};

/// Empirical K of the X_+ smoothing bound: max over probe fields and a t-grid
/// of sqrt(t) e^{rho_+ t} ||S(t)u||_{H1} / ||u||_{L2}. Probes are the positive
/// eigenfields plus random combinations of them, fixed seed.
inline SmoothingConstant measure_smoothing_constant(const SpectralData& sd,
                                                    std::size_t random_probes = 24,
                                                    std::uint64_t seed = 20240901ull) {
    std::vector<std::size_t> pos_idx;
    for (std::size_t i = 0; i < sd.classes.size(); ++i)
        if (sd.classes[i] == eig_class::positive || sd.classes[i] == eig_class::continuum_artifact)
            pos_idx.push_back(i);
    SmoothingConstant out;
    out.rho_plus = sd.rho_plus;
    out.seed = seed;
    if (pos_idx.empty()) return out;

    std::vector<std::vector<double>> probes;
    for (auto i : pos_idx) {
        std::vector<double> c(sd.eigenfields.size(), 0.0);
        c[i] = 1.0;
        probes.push_back(std::move(c));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::size_t p = 0; p < random_probes; ++p) {
        std::vector<double> c(sd.eigenfields.size(), 0.0);
        for (auto i : pos_idx) c[i] = unif(rng);
        probes.push_back(std::move(c));
    }

    std::vector<double> t_grid;
    for (double t = 0.01; t <= 5.0; t *= 1.5) t_grid.push_back(t);

    double K = 0.0;
    for (const auto& c : probes) {
        Field u = eigen_reconstruct(sd, c);
        const double nl2 = l2_norm(u);
        if (nl2 == 0.0) continue;
        for (double t : t_grid) {
            Field st = semigroup_apply(sd, u, t);
            const double val = std::sqrt(t) * std::exp(sd.rho_plus * t) * h1_norm(st) / nl2;
            K = std::max(K, val);
        }
    }
    out.K = K;
    out.probes = probes.size();
    return out;
}

} // namespace cwaves
