#pragma once

// Potentials split as V = V_inf + V_0: a bounded part with a declared value at
// infinity and an integrably decaying part with its integrability exponent.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cwaves/grid.hpp"

namespace cwaves {

using scalar_fn = std::function<double(double)>;

struct PotentialSpec {
    scalar_fn v_inf;                      // bounded part
    scalar_fn v_0;                        // decaying part, in L^p
    double p = 2.0;                       // integrability exponent of v_0
    std::optional<double> rho_declared;   // declared asymptotic bottom, if any

    double operator()(double x) const { return v_inf(x) + v_0(x); }

    static PotentialSpec bounded_only(scalar_fn vi, std::optional<double> rho = std::nullopt) {
        PotentialSpec s;
        s.v_inf = std::move(vi);
        s.v_0 = [](double) { return 0.0; };
        s.rho_declared = rho;
        return s;
    }
};

struct AsymptoticBottom {
    double value = 0.0;          // sup_R inf_{|x|>R} V_inf on the grid
    bool declared_mismatch = false;
    double declared_gap = 0.0;   // |value - rho_declared| when declared
};

/// Grid realization of lim_{R->inf} essinf_{|x|>R} V_inf: the supremum over
/// truncation radii of the infimum of V_inf samples outside that radius.
inline AsymptoticBottom asymptotic_bottom(const PotentialSpec& spec, const grid_ptr& grid) {
    const auto& xs = grid->nodes();
    const std::size_t n = xs.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = spec.v_inf(xs[i]);
        if (!std::isfinite(v[i]))
            throw numerical_error("asymptotic_bottom: non-finite V_inf sample");
    }
    // sweep radii through |x| of every node; maintain min over the exterior set
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(xs[a]) < std::abs(xs[b]);
    });
    // suffix minima in order of decreasing |x|
    double best = -std::numeric_limits<double>::infinity();
    double suffix_min = std::numeric_limits<double>::infinity();
    std::vector<double> ext_min(n);
    for (std::size_t k = n; k-- > 0;) {
        suffix_min = std::min(suffix_min, v[order[k]]);
        ext_min[k] = suffix_min;
    }
    // R strictly between two distinct magnitudes leaves nodes k..n-1 outside;
    // ties (the +-x twin nodes) are not valid cuts
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(xs[order[k]]) > std::abs(xs[order[k - 1]]))
            best = std::max(best, ext_min[k]);
    }
    if (!std::isfinite(best)) best = ext_min.empty() ? 0.0 : ext_min[0];

    AsymptoticBottom out;
    out.value = best;
    if (spec.rho_declared) {
        out.declared_gap = std::abs(best - *spec.rho_declared);
        out.declared_mismatch = out.declared_gap > 1e-6 * (1.0 + std::abs(*spec.rho_declared));
    }
    return out;
}

/// Bottom for a shifted bounded part V_inf - w_inf (used for rho(V_inf - a_inf) etc.).
inline AsymptoticBottom asymptotic_bottom_shifted(const PotentialSpec& spec, const scalar_fn& w_inf,
                                                  const grid_ptr& grid) {
    PotentialSpec shifted;
    const scalar_fn base = spec.v_inf;
    shifted.v_inf = [base, w_inf](double x) { return base(x) - (w_inf ? w_inf(x) : 0.0); };
    shifted.v_0 = [](double) { return 0.0; };
    return asymptotic_bottom(shifted, grid);
}

} // namespace cwaves
