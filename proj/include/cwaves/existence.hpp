#pragma once

// Hypothesis engines for the existence criteria, standing-wave computation
// (flow phase + damped Newton), connecting-orbit shooting, the Duhamel-based
// Q-part bound, the geometric margin on the kernel sphere, and the isolating
// neighborhood built from them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cwaves/nonlinear.hpp"
#include "cwaves/operator.hpp"
#include "cwaves/semiflow.hpp"
#include "cwaves/spectral.hpp"

namespace cwaves {

// ---- equilibria ---------------------------------------------------------------

struct Equilibrium {
    Field u;
    double residual = 0.0; // ||-A u + F(u)||_{L2}
    double energy = 0.0;
    bool converged = false;
    bool degenerate = false;            // linearization kernel inside the tolerance band
    std::optional<std::size_t> morse_index; // negative eigenvalue count of A - f_u(., u)
    std::string message;
};

struct EquilibriumPolicy {
    double dt = 0.01;
    double t_max = 40.0;
    double switch_tol = 1e-3;  // ||u'||_{L2} threshold to hand over to Newton
    double newton_tol = 1e-10;
    int newton_max = 80;
    double h1_ceiling = 1e6;
};

namespace detail {

inline std::vector<double> f_u_diagonal(const NonlinearitySpec& f, const Field& u) {
    std::vector<double> d(u.grid->interior_points());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double x = u.grid->node(i + 1);
        const double ui = u[i + 1];
        const double e = 1e-6 * (1.0 + std::abs(ui));
        d[i] = (f.f(x, ui + e) - f.f(x, ui - e)) / (2.0 * e);
    }
    return d;
}

inline Field stationarity_residual(const DiscreteOperator& op, const NonlinearitySpec& f,
                                   const Field& u) {
    Field r = nemytskii(f, u) - op.apply(u);
    r[0] = 0.0;
    r[r.size() - 1] = 0.0;
    return r;
}

} // namespace detail

/// Morse data of the linearization A - f_u(., u) at a field.
struct LinearizationData {
    std::size_t negative_count = 0;
    bool kernel_within_band = false;
    double smallest_abs_eigenvalue = 0.0;
};

inline LinearizationData linearization_data(const DiscreteOperator& op, const NonlinearitySpec& f,
                                            const Field& u, double tau_ker) {
    auto fu = detail::f_u_diagonal(f, u);
    for (auto& v : fu) v = -v;
    DiscreteOperator lin = with_added_diagonal(op, fu);
    auto eigs = tridiag_eigenvalues(lin.diag, lin.offdiag);
    LinearizationData out;
    out.smallest_abs_eigenvalue = std::abs(eigs.front());
    for (double mu : eigs) {
        out.smallest_abs_eigenvalue = std::min(out.smallest_abs_eigenvalue, std::abs(mu));
        if (mu < -tau_ker) ++out.negative_count;
        if (std::abs(mu) <= tau_ker) out.kernel_within_band = true;
        if (mu > tau_ker) break;
    }
    return out;
}

/// Damped Newton on R(u) = -A u + F(u) with the tridiagonal Jacobian
/// -A + diag(f_u), finite differences in u.
inline Equilibrium newton_polish(const DiscreteOperator& op, const NonlinearitySpec& f,
                                 const Field& seed, const EquilibriumPolicy& policy,
                                 double tau_ker) {
    Equilibrium eq;
    eq.u = seed;
    eq.u[0] = 0.0;
    eq.u[eq.u.size() - 1] = 0.0;

    for (int iter = 0; iter < policy.newton_max; ++iter) {
        Field r = detail::stationarity_residual(op, f, eq.u);
        eq.residual = l2_norm(r);
        if (eq.residual <= policy.newton_tol) {
            eq.converged = true;
            break;
        }
        auto fu = detail::f_u_diagonal(f, eq.u);
        std::vector<double> jd(op.dim());
        for (std::size_t i = 0; i < jd.size(); ++i) jd[i] = -op.diag[i] + fu[i];
        TridiagLU lu = TridiagLU::symmetric(jd, -op.offdiag);
        if (lu.singular() || lu.min_pivot() < 1e-14) {
            eq.message = "Jacobian singular at iterate (degenerate equilibrium)";
            eq.degenerate = true;
            break;
        }
        std::vector<double> rhs = interior(r);
        for (auto& v : rhs) v = -v;
        lu.solve_in_place(rhs);
        Field delta = from_interior(eq.u.grid, rhs);

        // J delta = -R, so the full step is u + delta; damp by halving
        double s = 1.0;
        Field candidate = eq.u;
        for (; s >= 1.0 / 1024.0; s *= 0.5) {
            candidate = eq.u;
            axpy(s, delta, candidate);
            if (l2_norm(detail::stationarity_residual(op, f, candidate)) <
                (1.0 - 0.25 * s) * eq.residual)
                break;
        }
        eq.u = candidate;
    }
    if (!eq.converged && eq.message.empty()) eq.message = "Newton did not converge";
    if (eq.converged) {
        auto lin = linearization_data(op, f, eq.u, tau_ker);
        eq.morse_index = lin.negative_count;
        eq.degenerate = lin.kernel_within_band;
    }
    return eq;
}

/// Phase 1: relax along the plain flow until quasi-stationary; phase 2: Newton.
inline Equilibrium find_equilibrium(const FlowSpec& flow, const Field& seed,
                                    const EquilibriumPolicy& policy, double tau_ker = 1e-8) {
    if (flow.family != flow_family::plain)
        throw std::invalid_argument("find_equilibrium: plain flow required");
    Field u = seed;
    EvolvePolicy ep;
    ep.dt = policy.dt;
    ep.record_stride = 25;
    ep.h1_ceiling = policy.h1_ceiling;
    ep.record_energy = false;

    const double chunk = std::max(policy.dt * 25.0, policy.t_max / 64.0);
    double t = 0.0;
    while (t < policy.t_max) {
        Trajectory tr = evolve(flow, u, chunk, ep);
        u = tr.endpoint();
        t += chunk;
        if (!tr.dissipation.empty() &&
            std::sqrt(tr.dissipation.back()) < policy.switch_tol)
            break;
    }
    Equilibrium eq = newton_polish(flow.op, *flow.nonlinearity, u, policy, tau_ker);
    return eq;
}

// ---- connecting orbits -----------------------------------------------------------

struct OrbitReport {
    bool found = false;
    std::string from;          // label of the starting equilibrium
    std::string to;            // label of the reached equilibrium, or "inconclusive"
    double energy_start = 0.0;
    double energy_end = 0.0;
    double endpoint_distance = 0.0; // H1 distance to the classified target
    std::vector<double> final_distances; // H1 distance to each candidate at timeout
    Trajectory trajectory;
    std::string message;
};

struct OrbitPolicy {
    double delta = 1e-4;      // size of the unstable-direction kick
    double dt = 0.01;
    double t_max = 120.0;
    double orbit_tol = 1e-3;  // H1 proximity for endpoint classification
    double settle_tol = 1e-6; // ||u'|| level considered stationary
    double h1_ceiling = 1e6;
};

/// Launches trajectories from base + delta * (unstable eigenfield) for both
/// signs and classifies the endpoints against the supplied equilibria.
inline std::vector<OrbitReport> detect_connecting_orbit(
    const FlowSpec& flow, const Field& base, const std::string& base_label,
    const std::vector<std::pair<std::string, Field>>& targets, const OrbitPolicy& policy,
    const PotentialSpec& V) {
    if (flow.family != flow_family::plain)
        throw std::invalid_argument("detect_connecting_orbit: plain flow required");
    const auto& f = *flow.nonlinearity;

    auto fu = detail::f_u_diagonal(f, base);
    for (auto& v : fu) v = -v;
    DiscreteOperator lin = with_added_diagonal(flow.op, fu);
    SpectralData sd = eigen_lowest(lin, std::min<std::size_t>(6, lin.dim()));

    std::vector<OrbitReport> reports;
    std::vector<std::size_t> unstable;
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i)
        if (sd.eigenvalues[i] < -1e-8) unstable.push_back(i);
    if (unstable.empty()) {
        OrbitReport r;
        r.from = base_label;
        r.message = "no unstable direction at the requested equilibrium";
        reports.push_back(std::move(r));
        return reports;
    }

    EvolvePolicy ep;
    ep.dt = policy.dt;
    ep.record_stride = 20;
    ep.h1_ceiling = policy.h1_ceiling;
    ep.potential = &V;

    for (double sign : {+1.0, -1.0}) {
        Field u0 = base;
        axpy(sign * policy.delta, sd.eigenfields[unstable.front()], u0);

        OrbitReport rep;
        rep.from = base_label;
        rep.energy_start = energy(base, V, flow.op.lambda, &f);

        Field u = u0;
        Trajectory full;
        double t = 0.0;
        bool settled = false;
        const double chunk = std::max(policy.dt * 20.0, policy.t_max / 64.0);
        while (t < policy.t_max) {
            Trajectory tr = evolve(flow, u, chunk, ep);
            u = tr.endpoint();
            t += chunk;
            if (full.times.empty()) {
                full = tr;
            } else {
                const double t_off = full.times.back();
                for (std::size_t j = 1; j < tr.records(); ++j) {
                    full.times.push_back(t_off + tr.times[j]);
                    full.fields.push_back(tr.fields[j]);
                    full.h1_norms.push_back(tr.h1_norms[j]);
                    full.l2_norms.push_back(tr.l2_norms[j]);
                    full.dissipation.push_back(tr.dissipation[j]);
                    if (!tr.energies.empty()) full.energies.push_back(tr.energies[j]);
                }
            }
            if (!tr.dissipation.empty() && std::sqrt(tr.dissipation.back()) < policy.settle_tol) {
                settled = true;
                break;
            }
        }
        rep.trajectory = std::move(full);
        rep.energy_end = energy(u, V, flow.op.lambda, &f);

        double best = std::numeric_limits<double>::infinity();
        std::string best_label = "inconclusive";
        for (const auto& [label, target] : targets) {
            const double dist = h1_norm(u - target);
            rep.final_distances.push_back(dist);
            if (dist < best) {
                best = dist;
                best_label = label;
            }
        }
        rep.endpoint_distance = best;
        if (best < policy.orbit_tol && best_label != base_label) {
            rep.found = true;
            rep.to = best_label;
        } else {
            rep.to = "inconclusive";
            rep.message = settled ? "settled away from every candidate"
                                  : "timeout before settling";
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

// ---- geometry: Q-bound, kernel-sphere margin, isolating neighborhood ---------------

/// H1 bound on the Q-part of bounded solutions: the X_+ Duhamel term
/// 2 K ||m|| sqrt(pi / rho_+) plus the X_- group term 2 ||m|| / rho_-,
/// with a 10% safety factor. The X_- term is dropped when X_- is trivial.
inline double q_bound(double m_norm, double K, double rho_plus, double rho_minus,
                      bool x_minus_trivial = false) {
    if (!(rho_plus > 0.0)) throw std::invalid_argument("q_bound: rho_+ must be positive");
    if (!x_minus_trivial && !(rho_minus > 0.0))
        throw std::invalid_argument("q_bound: rho_- must be positive");
    double r = 2.0 * K * m_norm * std::sqrt(3.14159265358979323846 / rho_plus);
    if (!x_minus_trivial) r += 2.0 * m_norm / rho_minus;
    return 1.1 * r;
}

struct MarginResult {
    double alpha_geo = 0.0; // min over the sampled sphere x Q_samples x s_grid
    int sign = +1;
    double worst_v_coeff = 0.0;
    int worst_sample = -1;
    double worst_s = 0.0;
};

/// Margin of +- <v, F(v + s w)> over the kernel sphere ||v|| = R0, the supplied
/// Q-samples and the homotopy grid. Positive value certifies the geometric
/// condition on the sample; non-positive values carry the violating triple.
inline MarginResult geometric_margin(const NonlinearitySpec& f, const ProjectionSplit& split,
                                     const std::vector<Field>& q_samples, double r0, int sign,
                                     const std::vector<double>& s_grid,
                                     std::uint64_t seed = 424242ull) {
    const std::size_t d = split.dim_x0();
    if (d < 1) throw std::invalid_argument("geometric_margin: empty kernel");
    if (sign != +1 && sign != -1) throw std::invalid_argument("geometric_margin: sign is +-1");

    // sphere sample: +-R0 e_i axis points, plus 100 d random points for d >= 2
    std::vector<std::vector<double>> sphere;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> c(d, 0.0);
        c[i] = r0;
        sphere.push_back(c);
        c[i] = -r0;
        sphere.push_back(c);
    }
    if (d >= 2) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (std::size_t p = 0; p < 100 * d; ++p) {
            std::vector<double> c(d);
            double norm = 0.0;
            for (auto& v : c) {
                v = unif(rng);
                norm += v * v;
            }
            norm = std::sqrt(norm);
            if (norm < 1e-12) continue;
            for (auto& v : c) v *= r0 / norm;
            sphere.push_back(c);
        }
    }

    MarginResult out;
    out.sign = sign;
    out.alpha_geo = std::numeric_limits<double>::infinity();
    const Field zero = Field::zero(split.kernel_basis.front().grid);
    for (const auto& coeffs : sphere) {
        Field v = Field::zero(zero.grid);
        for (std::size_t i = 0; i < d; ++i) axpy(coeffs[i], split.kernel_basis[i], v);
        for (int qi = -1; qi < static_cast<int>(q_samples.size()); ++qi) {
            const Field& w = qi < 0 ? zero : q_samples[static_cast<std::size_t>(qi)];
            for (double s : s_grid) {
                Field arg = v;
                axpy(s, w, arg);
                const double val = sign * inner_l2(v, nemytskii(f, arg));
                if (val < out.alpha_geo) {
                    out.alpha_geo = val;
                    out.worst_v_coeff = coeffs.front();
                    out.worst_sample = qi;
                    out.worst_s = s;
                }
            }
        }
    }
    return out;
}

struct R0Search {
    double r0 = 0.0;
    MarginResult margin;
    bool found = false;
    int doublings = 0;
};

/// Doubles R0 from a starting guess until the margin turns positive (cap 20).
inline R0Search find_r0(const NonlinearitySpec& f, const ProjectionSplit& split,
                        const std::vector<Field>& q_samples, int sign, double r0_start = 1.0,
                        const std::vector<double>& s_grid = {0.0, 0.25, 0.5, 0.75, 1.0}) {
    R0Search out;
    double r0 = r0_start;
    for (int k = 0; k <= 20; ++k) {
        out.margin = geometric_margin(f, split, q_samples, r0, sign, s_grid);
        out.doublings = k;
        if (out.margin.alpha_geo > 0.0) {
            out.r0 = r0;
            out.found = true;
            return out;
        }
        r0 *= 2.0;
    }
    out.r0 = r0;
    return out;
}

struct IsolatingNeighborhood {
    double r_inf = 0.0;    // H1 bound on the Q-part
    double r0 = 0.0;       // L2 bound on the P-part
    double alpha_geo = 0.0;

    bool contains(const Field& u, const ProjectionSplit& split) const {
        return h1_norm(split.apply_q(u)) <= r_inf && l2_norm(split.apply_p(u)) <= r0;
    }
};

inline IsolatingNeighborhood isolating_neighborhood(double r_inf, double alpha_geo, double r0) {
    if (!(r_inf > 0.0) || !(alpha_geo > 0.0) || !(r0 > 0.0))
        throw std::invalid_argument("isolating_neighborhood: all parameters must be positive");
    return IsolatingNeighborhood{r_inf, r0, alpha_geo};
}

struct BoundaryCrossing {
    double t = 0.0;
    double p_norm = 0.0;
    double derivative = 0.0; // d/dt ||P u||^2 = 2 <P u, F(P u + s Q u)>
    bool exit_ok = false;    // sign * derivative > 2 alpha_geo
};

/// Checks the signed derivative identity at trajectory samples crossing the
/// P-sphere ||P u|| = R0 within the given band.
inline std::vector<BoundaryCrossing> boundary_exit_check(const Trajectory& traj,
                                                         const ProjectionSplit& split,
                                                         const NonlinearitySpec& f, double s,
                                                         const IsolatingNeighborhood& nbhd,
                                                         int sign, double band) {
    std::vector<BoundaryCrossing> out;
    for (std::size_t j = 0; j < traj.records(); ++j) {
        Field pu = split.apply_p(traj.fields[j]);
        const double pn = l2_norm(pu);
        if (std::abs(pn - nbhd.r0) > band) continue;
        Field arg = pu;
        axpy(s, split.apply_q(traj.fields[j]), arg);
        BoundaryCrossing bc;
        bc.t = traj.times[j];
        bc.p_norm = pn;
        bc.derivative = 2.0 * inner_l2(pu, nemytskii(f, arg));
        bc.exit_ok = sign * bc.derivative > 2.0 * nbhd.alpha_geo;
        out.push_back(bc);
    }
    return out;
}

} // namespace cwaves
