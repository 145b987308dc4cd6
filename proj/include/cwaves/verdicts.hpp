#pragma once

// Scenario engines: the non-resonant count criterion, the resonant criteria
// (with and without a trivial solution), the constant-shift corollary clauses,
// and the realization phase that turns a positive verdict into computed
// standing waves and orbits.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwaves/existence.hpp"
#include "cwaves/nonlinear.hpp"
#include "cwaves/operator.hpp"
#include "cwaves/semiflow.hpp"
#include "cwaves/spectral.hpp"

namespace cwaves {

enum class scenario_kind { nonresonant, resonant_plain, resonant_trivial_solution };

inline const char* to_string(scenario_kind s) {
    switch (s) {
        case scenario_kind::nonresonant: return "nonresonant";
        case scenario_kind::resonant_plain: return "resonant_plain";
        case scenario_kind::resonant_trivial_solution: return "resonant_trivial_solution";
    }
    return "?";
}

struct HypothesisItem {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct ExistenceVerdict {
    scenario_kind scenario = scenario_kind::nonresonant;
    double lambda_used = 0.0;
    std::vector<HypothesisItem> checklist;
    bool hypotheses_met = false;
    bool prediction_positive = false;
    std::string conclusion;
    std::string resonance_condition; // "LL+", "LL-", "SR+", "SR-" or empty

    std::optional<std::size_t> d_minus_alpha; // d^-(V - alpha, lambda)
    std::optional<std::size_t> d_minus_omega; // d^-(V - omega, lambda)
    std::optional<std::size_t> d_minus;       // d^-(V, lambda)
    std::optional<std::size_t> dim_x0;
    std::optional<std::size_t> k_inf;
    std::optional<int> corollary_clause;
    std::optional<double> alpha_bar;

    std::optional<double> alpha_geo, r0, r_inf, K_measured, rho_plus, rho_minus, m_norm;
    std::vector<Equilibrium> equilibria;
    std::vector<std::string> equilibrium_labels;
    std::vector<OrbitReport> orbits;
    std::uint64_t seed = 0;

    void add(std::string name, bool pass, double margin = 0.0, std::string detail = {}) {
        checklist.push_back({std::move(name), pass, margin, std::move(detail)});
    }
    bool all_pass() const {
        for (const auto& it : checklist)
            if (!it.pass) return false;
        return true;
    }
};

struct CheckOptions {
    std::size_t eigen_k = 10;
    double tau_ker = -1.0;  // negative: derive from the computed window
    bool snap_lambda = true;
    bool realize = true;
    bool want_orbit = false;
    EquilibriumPolicy eq_policy;
    OrbitPolicy orbit_policy;
    double s_max = 1e3;
    double stability_factor = 10.0;
    double kernel_scan_range = 40.0;
    std::uint64_t seed = 12345;
};

inline PotentialSpec subtract_limit_potential(const PotentialSpec& V, const LimitPotential& w) {
    PotentialSpec out;
    out.v_inf = [a = V.v_inf, b = w.bounded](double x) { return a(x) - (b ? b(x) : 0.0); };
    out.v_0 = [a = V.v_0, b = w.decaying](double x) { return a(x) - (b ? b(x) : 0.0); };
    out.p = V.p;
    return out;
}

namespace detail {

inline double band_distance(const SpectralData& sd, double level) {
    double best = std::numeric_limits<double>::infinity();
    for (double mu : sd.spectrum) {
        if (mu >= sd.ess_bottom) break;
        best = std::min(best, std::abs(mu - level));
    }
    return best;
}

inline void dedupe_push(std::vector<Equilibrium>& eqs, Equilibrium&& cand) {
    if (!cand.converged) return;
    for (const auto& e : eqs)
        if (h1_norm(e.u - cand.u) < 1e-5 * (1.0 + h1_norm(e.u))) return;
    eqs.push_back(std::move(cand));
}

/// Sign-change scan of the reduced kernel map v -> <F(v phi_1), phi_1>,
/// the cheap first guess at where resonant equilibria sit on the kernel line.
inline std::vector<double> kernel_line_roots(const NonlinearitySpec& f,
                                             const ProjectionSplit& split, double range) {
    const Field& phi = split.kernel_basis.front();
    auto g = [&](double v) { return inner_l2(phi, nemytskii(f, v * phi)); };
    std::vector<double> roots;
    const int n = 81;
    double prev_v = -range, prev_g = g(prev_v);
    for (int i = 1; i < n; ++i) {
        const double v = -range + 2.0 * range * i / (n - 1);
        const double gv = g(v);
        if (prev_g == 0.0) roots.push_back(prev_v);
        if (prev_g * gv < 0.0) {
            double lo = prev_v, hi = v, glo = prev_g;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (glo * gm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_v = v;
        prev_g = gv;
    }
    return roots;
}

} // namespace detail

/// Criterion of the non-resonant case: distinct Morse counts of the two
/// linearizations predict a nonzero standing wave and a connecting orbit.
inline ExistenceVerdict check_nonresonant(const PotentialSpec& V, const NonlinearitySpec& f,
                                          double lambda, const grid_ptr& grid,
                                          const CheckOptions& opts = {}) {
    ExistenceVerdict v;
    v.scenario = scenario_kind::nonresonant;
    v.lambda_used = lambda;
    v.seed = opts.seed;

    auto cert = certify(f, grid, 4096, 64.0, opts.seed);
    v.add("(f1)-(f2): Lipschitz field certified, c in L2", cert.lipschitz_ok && cert.c_in_l2,
          -cert.worst_lipschitz_excess);
    v.add("(f3): sign bound a declared and certified", f.a.has_value() && cert.a_ok,
          -cert.worst_a_excess);
    if (!f.alpha || !f.omega) {
        v.add("limit potentials alpha, omega declared", false);
        v.conclusion = "hypotheses not met: declare alpha and omega";
        return v;
    }
    auto lc0 = limit_potential_check(f, limit_kind::zero, grid);
    v.add("f(x,u)/u -> alpha(x) as u -> 0", lc0.converged, -lc0.discrepancy.back());
    auto lci = limit_potential_check(f, limit_kind::infinity, grid);
    v.add("f(x,u)/u -> omega(x) as |u| -> inf", lci.converged, -lci.discrepancy.back());

    const double rho_a =
        f.a ? asymptotic_bottom_shifted(V, f.a->a_inf, grid).value
            : asymptotic_bottom(V, grid).value;
    const double rho_alpha = asymptotic_bottom_shifted(V, f.alpha->bounded, grid).value;
    const double rho_omega = asymptotic_bottom_shifted(V, f.omega->bounded, grid).value;
    const double rho_min = std::min({rho_a, rho_alpha, rho_omega});
    v.add("lambda below min rho(V_inf - {a,alpha,omega}_inf)", lambda < rho_min,
          rho_min - lambda);
    if (!(lambda < rho_min)) {
        v.conclusion = "hypotheses not met: lambda at or above the essential bottom";
        return v;
    }

    PotentialSpec v_alpha = subtract_limit_potential(V, *f.alpha);
    PotentialSpec v_omega = subtract_limit_potential(V, *f.omega);
    SpectralData sd_alpha = eigen_lowest(assemble(grid, v_alpha, 0.0), opts.eigen_k, opts.tau_ker);
    SpectralData sd_omega = eigen_lowest(assemble(grid, v_omega, 0.0), opts.eigen_k, opts.tau_ker);

    const double dist_alpha = detail::band_distance(sd_alpha, lambda);
    const double dist_omega = detail::band_distance(sd_omega, lambda);
    const bool res_alpha = dist_alpha <= sd_alpha.tau_ker;
    const bool res_omega = dist_omega <= sd_omega.tau_ker;
    v.add("lambda not in sigma(-Delta + V - alpha)", !res_alpha, dist_alpha);
    v.add("lambda not in sigma(-Delta + V - omega)", !res_omega, dist_omega);
    if (res_alpha || res_omega) {
        v.conclusion = "resonant boundary, use resonant scenario";
        return v;
    }

    v.d_minus_alpha = morse_count(sd_alpha, lambda).count;
    v.d_minus_omega = morse_count(sd_omega, lambda).count;
    v.add("d^-(V - alpha, lambda) != d^-(V - omega, lambda)",
          *v.d_minus_alpha != *v.d_minus_omega,
          std::abs(static_cast<double>(*v.d_minus_alpha) -
                   static_cast<double>(*v.d_minus_omega)));

    v.hypotheses_met = v.all_pass();
    v.prediction_positive = v.hypotheses_met;
    v.conclusion = v.prediction_positive
                       ? "nonzero standing wave and connecting orbit to 0 predicted"
                       : "hypotheses not met";
    if (!v.prediction_positive || !opts.realize) return v;

    // realization: shoot along unstable directions of the linearization at 0
    DiscreteOperator A = assemble(grid, V, lambda);
    auto flow = make_plain_flow(A, std::make_shared<NonlinearitySpec>(f));
    DiscreteOperator A_alpha = assemble(grid, v_alpha, lambda);
    SpectralData lin0 = eigen_lowest(A_alpha, std::min<std::size_t>(6, A_alpha.dim()));

    std::vector<Equilibrium> eqs;
    for (std::size_t i = 0; i < lin0.eigenvalues.size(); ++i) {
        if (lin0.eigenvalues[i] >= -1e-8) break;
        for (double amp : {0.5, 2.0, -0.5, -2.0}) {
            Field seed = Field::zero(grid);
            axpy(amp, lin0.eigenfields[i], seed);
            detail::dedupe_push(eqs, find_equilibrium(flow, seed, opts.eq_policy, sd_alpha.tau_ker));
        }
    }
    for (auto& e : eqs) e.energy = energy(e.u, V, lambda, &f);
    v.equilibria = std::move(eqs);
    for (std::size_t i = 0; i < v.equilibria.size(); ++i)
        v.equilibrium_labels.push_back(l2_norm(v.equilibria[i].u) < 1e-6
                                           ? "zero"
                                           : "wave_" + std::to_string(i));

    if (opts.want_orbit) {
        std::vector<std::pair<std::string, Field>> targets;
        targets.emplace_back("zero", Field::zero(grid));
        for (std::size_t i = 0; i < v.equilibria.size(); ++i)
            if (v.equilibrium_labels[i] != "zero")
                targets.emplace_back(v.equilibrium_labels[i], v.equilibria[i].u);
        v.orbits = detect_connecting_orbit(flow, Field::zero(grid), "zero", targets,
                                           opts.orbit_policy, V);
    }
    return v;
}

/// Criteria of the resonant case. resonant_plain needs only boundedness and
/// the resonance condition; resonant_trivial_solution adds the vanishing of
/// f(.,0), the limit potential at zero and the count mismatch clauses.
inline ExistenceVerdict check_resonant(const PotentialSpec& V, const NonlinearitySpec& f,
                                       double lambda_target, const grid_ptr& grid,
                                       scenario_kind scenario, const CheckOptions& opts = {}) {
    if (scenario == scenario_kind::nonresonant)
        throw std::invalid_argument("check_resonant: resonant scenario expected");
    ExistenceVerdict v;
    v.scenario = scenario;
    v.seed = opts.seed;

    SpectralData sd0 = eigen_lowest(assemble(grid, V, 0.0), opts.eigen_k, opts.tau_ker);
    double lambda = lambda_target;
    if (opts.snap_lambda) {
        double best = std::numeric_limits<double>::infinity();
        for (double mu : sd0.spectrum) {
            if (mu >= sd0.ess_bottom) break;
            if (std::abs(mu - lambda_target) < best) {
                best = std::abs(mu - lambda_target);
                lambda = mu;
            }
        }
    }
    v.lambda_used = lambda;

    const double dist = detail::band_distance(sd0, lambda);
    v.add("lambda within tau_ker of an eigenvalue of -Delta + V", dist <= sd0.tau_ker, -dist);
    const double rho_v = asymptotic_bottom(V, grid).value;
    v.add("rho(V_inf) > lambda", rho_v > lambda, rho_v - lambda);

    auto cert = certify(f, grid, 4096, 64.0, opts.seed);
    v.add("(f1): c = f(.,0) in L2", cert.c_in_l2, cert.c_norm);
    v.add("(f2): Lipschitz field certified", cert.lipschitz_ok, -cert.worst_lipschitz_excess);
    v.add("(f1)': uniform bound m declared and certified", f.m.has_value() && cert.m_ok,
          -cert.worst_m_excess);
    if (!v.all_pass()) {
        v.conclusion = "hypotheses not met";
        return v;
    }

    DiscreteOperator A = assemble(grid, V, lambda);
    SpectralData sd = eigen_lowest(A, opts.eigen_k, opts.tau_ker);
    auto split = std::make_shared<ProjectionSplit>(projections(sd));
    v.dim_x0 = split->dim_x0();
    v.add("dim X_0 >= 1", split->dim_x0() >= 1, static_cast<double>(split->dim_x0()));

    auto rr = resonance_conditions(f, grid, opts.s_max, opts.stability_factor);
    int sign = 0;
    if (rr.ll_plus) {
        v.resonance_condition = "LL+";
        sign = +1;
    } else if (rr.ll_minus) {
        v.resonance_condition = "LL-";
        sign = -1;
    } else if (rr.sr_plus) {
        v.resonance_condition = "SR+";
        sign = +1;
    } else if (rr.sr_minus) {
        v.resonance_condition = "SR-";
        sign = -1;
    }
    v.add("one of (LL)+-/(SR)+- certified (stable under window doubling)",
          sign != 0 && !rr.inconclusive, rr.witness_weight,
          v.resonance_condition.empty() ? "no condition certified" : v.resonance_condition);
    if (sign == 0 || rr.inconclusive) {
        v.conclusion = "hypotheses not met: no resonance condition certified";
        return v;
    }

    v.d_minus = morse_count(sd0, lambda).count;
    v.k_inf = sign > 0 ? *v.d_minus + *v.dim_x0 : *v.d_minus;

    std::optional<std::size_t> d_minus_alpha;
    if (scenario == scenario_kind::resonant_trivial_solution) {
        double c_max = 0.0;
        for (double x : grid->nodes()) c_max = std::max(c_max, std::abs(f.c(x)));
        v.add("f(x,0) = 0", c_max <= 1e-12, -c_max);
        v.add("(f3): sign bound a declared and certified", f.a.has_value() && cert.a_ok,
              -cert.worst_a_excess);
        if (!f.alpha) {
            v.add("limit potential alpha declared", false);
            v.conclusion = "hypotheses not met";
            return v;
        }
        auto lc0 = limit_potential_check(f, limit_kind::zero, grid);
        v.add("f(x,u)/u -> alpha(x) as u -> 0", lc0.converged, -lc0.discrepancy.back());

        const double rho_alpha = asymptotic_bottom_shifted(V, f.alpha->bounded, grid).value;
        const double rho_a = f.a ? asymptotic_bottom_shifted(V, f.a->a_inf, grid).value : rho_v;
        const double rho_min = std::min({rho_v, rho_alpha, rho_a});
        v.add("lambda below min rho(V_inf - {0,alpha,a}_inf)", lambda < rho_min,
              rho_min - lambda);

        PotentialSpec v_alpha = subtract_limit_potential(V, *f.alpha);
        SpectralData sd_alpha =
            eigen_lowest(assemble(grid, v_alpha, 0.0), opts.eigen_k, opts.tau_ker);
        const double dist_alpha = detail::band_distance(sd_alpha, lambda);
        v.add("lambda not in sigma(-Delta + V - alpha)", dist_alpha > sd_alpha.tau_ker,
              dist_alpha);
        d_minus_alpha = morse_count(sd_alpha, lambda).count;
        v.d_minus_alpha = d_minus_alpha;

        const std::size_t lhs_count = sign > 0 ? *v.d_minus + *v.dim_x0 : *v.d_minus;
        v.add(sign > 0 ? "d^-(V,lambda) + dim X_0 != d^-(V - alpha, lambda)"
                       : "d^-(V,lambda) != d^-(V - alpha, lambda)",
              lhs_count != *d_minus_alpha,
              std::abs(static_cast<double>(lhs_count) - static_cast<double>(*d_minus_alpha)));

        // constant alpha: the corollary clauses over the shifted spectrum
        double a0 = f.alpha->operator()(grid->node(0));
        bool constant = true;
        for (double x : grid->nodes())
            if (std::abs(f.alpha->operator()(x) - a0) > 1e-10 * (1.0 + std::abs(a0)))
                constant = false;
        if (constant) {
            v.alpha_bar = a0;
            auto count_in = [&](double lo, double hi) {
                std::size_t c = 0;
                for (double mu : sd0.spectrum) {
                    if (mu >= sd0.ess_bottom) break;
                    if (mu > lo && mu < hi) ++c;
                }
                return c;
            };
            if (sign > 0 && a0 < 0.0)
                v.corollary_clause = 1;
            else if (sign < 0 && a0 > 0.0)
                v.corollary_clause = 2;
            else if (sign > 0 && a0 > 0.0 && count_in(lambda, a0 + lambda) > 0)
                v.corollary_clause = 3;
            else if (sign < 0 && a0 < 0.0 && count_in(a0 + lambda, lambda) > 0)
                v.corollary_clause = 4;
        }
    }

    v.hypotheses_met = v.all_pass();
    v.prediction_positive = v.hypotheses_met;
    if (scenario == scenario_kind::resonant_plain)
        v.conclusion = v.prediction_positive ? "standing wave predicted (bounded solution set)"
                                             : "hypotheses not met";
    else
        v.conclusion = v.prediction_positive
                           ? "nonzero standing wave and connecting orbit to 0 predicted"
                           : "hypotheses not met";
    if (!v.hypotheses_met || !opts.realize) return v;

    // geometry constants
    const double m_norm = l2_norm(Field::sample(grid, [&](double x) { return (*f.m)(x); }));
    auto smoothing = measure_smoothing_constant(sd);
    v.m_norm = m_norm;
    v.K_measured = smoothing.K;
    v.rho_plus = sd.rho_plus;
    v.rho_minus = sd.rho_minus;
    const bool x_minus_trivial = split->d_minus() == 0;
    v.r_inf = q_bound(m_norm, smoothing.K, sd.rho_plus, x_minus_trivial ? 1.0 : sd.rho_minus,
                      x_minus_trivial);

    // realization: kernel-line roots, the origin side, and negative directions
    auto f_shared = std::make_shared<NonlinearitySpec>(f);
    auto flow = make_plain_flow(A, f_shared);
    std::vector<Equilibrium> eqs;
    for (double root : detail::kernel_line_roots(f, *split, opts.kernel_scan_range)) {
        Field seed = Field::zero(grid);
        axpy(root, split->kernel_basis.front(), seed);
        detail::dedupe_push(eqs, newton_polish(A, f, seed, opts.eq_policy, sd.tau_ker));
    }
    detail::dedupe_push(eqs, find_equilibrium(flow, Field::zero(grid), opts.eq_policy, sd.tau_ker));
    for (const auto& e : split->negative_basis)
        for (double amp : {0.75, -0.75}) {
            Field seed = Field::zero(grid);
            axpy(amp, e, seed);
            detail::dedupe_push(eqs, find_equilibrium(flow, seed, opts.eq_policy, sd.tau_ker));
        }
    for (auto& e : eqs) e.energy = energy(e.u, V, lambda, &f);
    v.equilibria = std::move(eqs);
    for (std::size_t i = 0; i < v.equilibria.size(); ++i)
        v.equilibrium_labels.push_back(l2_norm(v.equilibria[i].u) < 1e-6
                                           ? "zero"
                                           : "wave_" + std::to_string(i));

    // Q-samples: Q-parts of the found equilibria plus probe-trajectory snapshots
    std::vector<Field> q_samples;
    for (const auto& e : v.equilibria) q_samples.push_back(split->apply_q(e.u));
    {
        EvolvePolicy ep;
        ep.dt = opts.eq_policy.dt;
        ep.record_stride = 40;
        ep.h1_ceiling = opts.eq_policy.h1_ceiling;
        ep.record_energy = false;
        Field seed = Field::zero(grid);
        axpy(0.5, split->kernel_basis.front(), seed);
        try {
            Trajectory probe = evolve(flow, seed, 8.0, ep);
            for (const auto& u : probe.fields) {
                if (q_samples.size() >= 64) break;
                q_samples.push_back(split->apply_q(u));
            }
        } catch (const numerical_error&) {
            // blow-up of the probe only shrinks the sample set
        }
    }
    auto r0s = find_r0(f, *split, q_samples, sign);
    if (r0s.found) {
        v.r0 = r0s.r0;
        v.alpha_geo = r0s.margin.alpha_geo;
    }

    if (opts.want_orbit && scenario == scenario_kind::resonant_trivial_solution) {
        std::vector<std::pair<std::string, Field>> targets;
        targets.emplace_back("zero", Field::zero(grid));
        for (std::size_t i = 0; i < v.equilibria.size(); ++i)
            if (v.equilibrium_labels[i] != "zero")
                targets.emplace_back(v.equilibrium_labels[i], v.equilibria[i].u);
        v.orbits =
            detect_connecting_orbit(flow, Field::zero(grid), "zero", targets, opts.orbit_policy, V);
    }
    return v;
}

} // namespace cwaves
