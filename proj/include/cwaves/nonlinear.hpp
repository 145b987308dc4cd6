#pragma once

// Declarative nonlinearity f(x,u) with its certified structure: Lipschitz
// field l = l_inf + l_0, optional uniform bound m, optional sign bound a,
// limit potentials at zero and at infinity, and the sampled certification of
// the Landesman-Lazer / sign resonance conditions.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cwaves/expr.hpp"
#include "cwaves/grid.hpp"
#include "cwaves/potential.hpp"

namespace cwaves {

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double v = adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 28);
    if (!std::isfinite(v)) throw numerical_error("primitive quadrature failed");
    return v;
}

} // namespace detail

struct KRComponent {
    scalar_fn value;
    double p = 2.0;
};

struct LimitPotential {
    scalar_fn bounded;   // part in L^inf
    scalar_fn decaying;  // part in L^r
    double r = 2.0;

    double operator()(double x) const {
        return (bounded ? bounded(x) : 0.0) + (decaying ? decaying(x) : 0.0);
    }
};

struct NonlinearitySpec {
    std::function<double(double, double)> f;

    scalar_fn l_inf;     // bounded Lipschitz part
    scalar_fn l_0;       // decaying Lipschitz part
    double r = 2.0;      // exponent of l_0

    std::optional<scalar_fn> m;  // uniform bound |f| <= m

    struct SignBound {
        scalar_fn a_inf;                    // bounded part
        std::vector<KRComponent> a_0;       // decaying components, each with its own p
        double operator()(double x) const {
            double v = a_inf ? a_inf(x) : 0.0;
            for (const auto& c : a_0) v += c.value(x);
            return v;
        }
    };
    std::optional<SignBound> a;  // u f(x,u) <= a(x) u^2

    std::optional<LimitPotential> alpha;  // lim_{u->0} f/u
    std::optional<LimitPotential> omega;  // lim_{|u|->inf} f/u

    /// Optional closed-form antiderivative in u; adaptive quadrature otherwise.
    std::function<double(double, double)> primitive_fn;

    double c(double x) const { return f(x, 0.0); }
    double l(double x) const { return (l_inf ? l_inf(x) : 0.0) + (l_0 ? l_0(x) : 0.0); }

    double primitive(double x, double v) const {
        if (primitive_fn) return primitive_fn(x, v);
        if (v == 0.0) return 0.0;
        auto g = [this, x](double w) { return f(x, w); };
        return detail::adaptive_simpson(g, 0.0, v, 1e-10);
    }
};

/// Builds a spec whose rule (and primitive, when the grammar yields one)
/// comes from a parsed expression of (x, u).
inline NonlinearitySpec nonlinearity_from_expr(const expr& rule) {
    NonlinearitySpec s;
    s.f = [rule](double x, double u) { return rule(x, u); };
    if (rule.primitive(0.0, 1.0).has_value())
        s.primitive_fn = [rule](double x, double v) { return *rule.primitive(x, v); };
    return s;
}

// ---- Nemytskii operator -----------------------------------------------------

inline Field nemytskii(const NonlinearitySpec& spec, const Field& u) {
    Field out = Field::zero(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = spec.f(u.grid->node(i), u[i]);
        if (!std::isfinite(out[i])) throw numerical_error("nemytskii: rule evaluation failed");
    }
    return out;
}

// ---- Lipschitz / sublinear bounds --------------------------------------------

struct GrowthBounds {
    double lipschitz = 0.0; // ||l_inf||_inf + ||l_0||_{L^r}: the H1 -> L2 constant
    double c_l2 = 0.0;      // ||f(.,0)||_{L2}
};

inline GrowthBounds lipschitz_growth_bounds(const NonlinearitySpec& spec, const grid_ptr& grid) {
    GrowthBounds gb;
    Field li = Field::sample(grid, spec.l_inf ? spec.l_inf : scalar_fn([](double) { return 0.0; }));
    Field l0 = Field::sample(grid, spec.l_0 ? spec.l_0 : scalar_fn([](double) { return 0.0; }));
    const double lr = lp_norm(l0, spec.r);
    if (!std::isfinite(lr)) throw numerical_error("lipschitz bounds: non-integrable l_0 sample");
    gb.lipschitz = linf_norm(li) + lr;
    Field c = Field::sample(grid, [&](double x) { return spec.c(x); });
    gb.c_l2 = l2_norm(c);
    return gb;
}

// ---- sampled certification ----------------------------------------------------

struct CertificationReport {
    bool lipschitz_ok = true;
    bool m_ok = true;       // vacuous when m absent
    bool a_ok = true;       // vacuous when a absent
    bool c_in_l2 = true;
    double worst_lipschitz_excess = 0.0;
    double worst_m_excess = 0.0;
    double worst_a_excess = 0.0;
    double c_norm = 0.0;
    std::uint64_t seed = 0;

    bool all_ok() const { return lipschitz_ok && m_ok && a_ok && c_in_l2; }
};

/// Randomized probe certification of the declared structural bounds.
inline CertificationReport certify(const NonlinearitySpec& spec, const grid_ptr& grid,
                                   std::size_t probes = 4096, double u_range = 64.0,
                                   std::uint64_t seed = 7117u) {
    CertificationReport rep;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> node(0, grid->points() - 1);
    std::uniform_real_distribution<double> uval(-u_range, u_range);
    const double slack = 1e-9;

    for (std::size_t i = 0; i < probes; ++i) {
        const double x = grid->node(node(rng));
        const double u = uval(rng), v = uval(rng);
        const double lx = spec.l(x);
        const double lhs = std::abs(spec.f(x, u) - spec.f(x, v));
        const double excess = lhs - lx * std::abs(u - v);
        if (excess > slack * (1.0 + lx)) {
            rep.lipschitz_ok = false;
            rep.worst_lipschitz_excess = std::max(rep.worst_lipschitz_excess, excess);
        }
        if (spec.m) {
            const double ex = std::abs(spec.f(x, u)) - (*spec.m)(x);
            if (ex > slack) {
                rep.m_ok = false;
                rep.worst_m_excess = std::max(rep.worst_m_excess, ex);
            }
        }
        if (spec.a) {
            const double ex = u * spec.f(x, u) - (*spec.a)(x)*u * u;
            if (ex > slack * (1.0 + u * u)) {
                rep.a_ok = false;
                rep.worst_a_excess = std::max(rep.worst_a_excess, ex);
            }
        }
    }
    Field c = Field::sample(grid, [&](double x) { return spec.c(x); });
    rep.c_norm = l2_norm(c);
    rep.c_in_l2 = std::isfinite(rep.c_norm);
    return rep;
}

// ---- limit potential checks ----------------------------------------------------

struct LimitCheck {
    std::vector<double> ladder;        // probe amplitudes
    std::vector<double> discrepancy;   // max_x |f(x,u)/u - limit(x)| per rung
    bool monotone = false;
    bool converged = false;            // final discrepancy below tolerance
};

enum class limit_kind { zero, infinity };

inline LimitCheck limit_potential_check(const NonlinearitySpec& spec, limit_kind which,
                                        const grid_ptr& grid, std::size_t rungs = 8,
                                        double tol = 1e-4) {
    const auto& lp = which == limit_kind::zero ? spec.alpha : spec.omega;
    if (!lp) throw std::invalid_argument("limit_potential_check: limit potential not declared");
    LimitCheck lc;
    for (std::size_t j = 0; j <= rungs; ++j) {
        const double mag = which == limit_kind::zero ? std::pow(10.0, -static_cast<double>(j))
                                                     : std::pow(10.0, static_cast<double>(j));
        lc.ladder.push_back(mag);
        double worst = 0.0;
        for (double x : grid->nodes()) {
            const double target = (*lp)(x);
            for (double s : {mag, -mag})
                worst = std::max(worst, std::abs(spec.f(x, s) / s - target));
        }
        lc.discrepancy.push_back(worst);
    }
    lc.monotone = true;
    for (std::size_t j = 1; j < lc.discrepancy.size(); ++j)
        if (lc.discrepancy[j] > lc.discrepancy[j - 1] * 1.10 + 1e-14) lc.monotone = false;
    lc.converged = lc.discrepancy.back() < tol;
    return lc;
}

// ---- resonance conditions -------------------------------------------------------

struct ResonanceReport {
    Field f_hat_plus, f_check_plus;   // limsup / liminf of f(x,s), s -> +inf
    Field f_hat_minus, f_check_minus; // s -> -inf
    Field k_hat_plus, k_check_plus;   // limsup / liminf of f(x,s) s, s -> +inf
    Field k_hat_minus, k_check_minus;
    bool ll_plus = false, ll_minus = false;
    bool sr_plus = false, sr_minus = false;
    bool inconclusive = false;  // extrema not stable between s_max and 2 s_max
    bool degenerate = false;    // both sign conditions: f s == 0 on probes
    std::vector<std::size_t> witness_nodes;
    double witness_weight = 0.0;
    double s_max = 0.0;
    double stability_factor = 0.0;
};

namespace detail {

struct asymptotic_fields {
    Field fhp, fcp, fhm, fcm, khp, kcp, khm, kcm;
    bool sign_nonneg = true; // f(x,s)s >= 0 over the full probe range
    bool sign_nonpos = true;
};

inline asymptotic_fields sample_asymptotics(const NonlinearitySpec& spec, const grid_ptr& grid,
                                            double s_lo, double s_hi, double sign_tol) {
    const std::size_t n_s = 33;
    std::vector<double> svals(n_s);
    const double ratio = std::pow(s_hi / s_lo, 1.0 / (n_s - 1));
    for (std::size_t j = 0; j < n_s; ++j) svals[j] = s_lo * std::pow(ratio, j);

    asymptotic_fields out{Field::zero(grid), Field::zero(grid), Field::zero(grid),
                          Field::zero(grid), Field::zero(grid), Field::zero(grid),
                          Field::zero(grid), Field::zero(grid)};
    // full-range probes for the pointwise sign clause of (SR): small and large s
    std::vector<double> full;
    for (double s = 1e-3; s < s_hi; s *= 4.0) full.push_back(s);
    full.push_back(s_hi);

    for (std::size_t i = 0; i < grid->points(); ++i) {
        const double x = grid->node(i);
        double fhp = -1e300, fcp = 1e300, khp = -1e300, kcp = 1e300;
        double fhm = -1e300, fcm = 1e300, khm = -1e300, kcm = 1e300;
        for (double s : svals) {
            double v = spec.f(x, s);
            fhp = std::max(fhp, v);
            fcp = std::min(fcp, v);
            khp = std::max(khp, v * s);
            kcp = std::min(kcp, v * s);
            v = spec.f(x, -s);
            fhm = std::max(fhm, v);
            fcm = std::min(fcm, v);
            khm = std::max(khm, v * -s);
            kcm = std::min(kcm, v * -s);
        }
        out.fhp[i] = fhp;
        out.fcp[i] = fcp;
        out.fhm[i] = fhm;
        out.fcm[i] = fcm;
        out.khp[i] = khp;
        out.kcp[i] = kcp;
        out.khm[i] = khm;
        out.kcm[i] = kcm;
        for (double s : full) {
            const double prod_p = spec.f(x, s) * s;
            const double prod_m = spec.f(x, -s) * -s;
            if (prod_p < -sign_tol || prod_m < -sign_tol) out.sign_nonneg = false;
            if (prod_p > sign_tol || prod_m > sign_tol) out.sign_nonpos = false;
        }
    }
    return out;
}

struct condition_flags {
    bool ll_plus, ll_minus, sr_plus, sr_minus;
    std::vector<std::size_t> witness;
    double weight;
};

// A witness value must clear the margin on both windows and must not be
// draining towards zero as the window moves out; that rejects limits like
// f = u/(1+u^2) whose sampled liminf is positive at any finite horizon but
// halves every time the horizon doubles.
inline bool stable_witness(double v1, double v2, int sign, double margin) {
    if (sign > 0) return v1 > margin && v2 > margin && v2 >= 0.6 * v1;
    return v1 < -margin && v2 < -margin && v2 <= 0.6 * v1;
}

inline condition_flags evaluate_conditions(const asymptotic_fields& a, const asymptotic_fields& b,
                                           const grid_ptr& grid, double margin) {
    condition_flags out{false, false, false, false, {}, 0.0};
    const double h = grid->spacing();
    const double tol = margin;

    auto everywhere = [&](auto&& pred) {
        for (std::size_t i = 0; i < grid->points(); ++i)
            if (!pred(i)) return false;
        return true;
    };
    auto witness_set = [&](auto&& pred) {
        std::vector<std::size_t> w;
        for (std::size_t i = 0; i < grid->points(); ++i)
            if (pred(i)) w.push_back(i);
        return w;
    };

    // (LL)+: f_check_+ >= 0, f_hat_- <= 0 a.e.; both strictly nonzero somewhere
    if (everywhere([&](std::size_t i) { return a.fcp[i] >= -tol && a.fhm[i] <= tol; })) {
        auto w = witness_set([&](std::size_t i) {
            return stable_witness(a.fcp[i], b.fcp[i], +1, margin) &&
                   stable_witness(a.fhm[i], b.fhm[i], -1, margin);
        });
        if (!w.empty()) {
            out.ll_plus = true;
            out.witness = w;
        }
    }
    // (LL)-: f_hat_+ <= 0, f_check_- >= 0 a.e.
    if (!out.ll_plus &&
        everywhere([&](std::size_t i) { return a.fhp[i] <= tol && a.fcm[i] >= -tol; })) {
        auto w = witness_set([&](std::size_t i) {
            return stable_witness(a.fhp[i], b.fhp[i], -1, margin) &&
                   stable_witness(a.fcm[i], b.fcm[i], +1, margin);
        });
        if (!w.empty()) {
            out.ll_minus = true;
            out.witness = w;
        }
    }
    // (SR)+: f(x,s)s >= 0 everywhere; k_check_+- positive on positive measure
    if (a.sign_nonneg) {
        auto w = witness_set([&](std::size_t i) {
            return stable_witness(a.kcp[i], b.kcp[i], +1, margin) &&
                   stable_witness(a.kcm[i], b.kcm[i], +1, margin);
        });
        if (!w.empty()) {
            out.sr_plus = true;
            if (out.witness.empty()) out.witness = w;
        }
    }
    // (SR)-: f(x,s)s <= 0 everywhere; k_hat_+- negative on positive measure
    if (a.sign_nonpos) {
        auto w = witness_set([&](std::size_t i) {
            return stable_witness(a.khp[i], b.khp[i], -1, margin) &&
                   stable_witness(a.khm[i], b.khm[i], -1, margin);
        });
        if (!w.empty()) {
            out.sr_minus = true;
            if (out.witness.empty()) out.witness = w;
        }
    }
    out.weight = h * static_cast<double>(out.witness.size());
    return out;
}

} // namespace detail

/// Certifies the resonance conditions from samples over the asymptotic window
/// [s_max, stability_factor * s_max]; re-runs at twice the window and flags
/// any boolean that changed as inconclusive rather than guessing.
inline ResonanceReport resonance_conditions(const NonlinearitySpec& spec, const grid_ptr& grid,
                                            double s_max, double stability_factor = 10.0,
                                            double margin = 1e-8) {
    if (!(s_max > 0.0)) throw std::invalid_argument("resonance_conditions: s_max must be positive");
    auto a1 = detail::sample_asymptotics(spec, grid, s_max, stability_factor * s_max, margin);
    auto a2 = detail::sample_asymptotics(spec, grid, 2.0 * s_max, 2.0 * stability_factor * s_max,
                                         margin);
    auto a4 = detail::sample_asymptotics(spec, grid, 4.0 * s_max, 4.0 * stability_factor * s_max,
                                         margin);
    auto f1 = detail::evaluate_conditions(a1, a2, grid, margin);
    auto f2 = detail::evaluate_conditions(a2, a4, grid, margin);

    ResonanceReport rep;
    rep.f_hat_plus = a1.fhp;
    rep.f_check_plus = a1.fcp;
    rep.f_hat_minus = a1.fhm;
    rep.f_check_minus = a1.fcm;
    rep.k_hat_plus = a1.khp;
    rep.k_check_plus = a1.kcp;
    rep.k_hat_minus = a1.khm;
    rep.k_check_minus = a1.kcm;
    rep.s_max = s_max;
    rep.stability_factor = stability_factor;
    rep.ll_plus = f1.ll_plus;
    rep.ll_minus = f1.ll_minus;
    rep.sr_plus = f1.sr_plus;
    rep.sr_minus = f1.sr_minus;
    rep.witness_nodes = f1.witness;
    rep.witness_weight = f1.weight;
    rep.inconclusive = f1.ll_plus != f2.ll_plus || f1.ll_minus != f2.ll_minus ||
                       f1.sr_plus != f2.sr_plus || f1.sr_minus != f2.sr_minus;
    rep.degenerate = a1.sign_nonneg && a1.sign_nonpos;
    return rep;
}

} // namespace cwaves
