#pragma once

// Time integration of u' = -A u + G(u, s) for the flow families: the plain
// nonlinear flow, the two linearization homotopies (1-s)F + s*alpha*u and
// (1-s)F + s*omega*u, and the resonant homotopy PF(Pu+sQu) + sQF(Pu+sQu).
// One IMEX step solves (I + dt A) u+ = u + dt G(u): implicit in the linear
// part, explicit in G, unconditionally stable in A.

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwaves/grid.hpp"
#include "cwaves/linalg.hpp"
#include "cwaves/nonlinear.hpp"
#include "cwaves/operator.hpp"
#include "cwaves/spectral.hpp"

namespace cwaves {

enum class flow_family { plain, homotopy_zero, homotopy_infinity, resonant };

struct FlowSpec {
    DiscreteOperator op;
    flow_family family = flow_family::plain;
    double s = 1.0; // homotopy parameter
    std::shared_ptr<const NonlinearitySpec> nonlinearity;
    Field alpha_samples;  // homotopy_zero multiplier
    Field omega_samples;  // homotopy_infinity multiplier
    std::shared_ptr<const ProjectionSplit> split; // required for resonant

    void validate() const {
        if (s < 0.0 || s > 1.0) throw std::invalid_argument("flow: s must lie in [0,1]");
        if (family == flow_family::resonant) {
            if (!split) throw std::invalid_argument("flow: resonant family needs projections");
            if (split->dim_x0() < 1)
                throw std::invalid_argument("flow: resonant family needs a nontrivial kernel");
        }
    }
};

inline FlowSpec make_plain_flow(DiscreteOperator op, std::shared_ptr<const NonlinearitySpec> f) {
    FlowSpec fs;
    fs.op = std::move(op);
    fs.family = flow_family::plain;
    fs.nonlinearity = std::move(f);
    fs.s = 1.0;
    return fs;
}

inline Field rhs(const FlowSpec& flow, const Field& u) {
    flow.validate();
    const auto& f = *flow.nonlinearity;
    switch (flow.family) {
        case flow_family::plain: return nemytskii(f, u);
        case flow_family::homotopy_zero: {
            Field g = nemytskii(f, u);
            for (std::size_t i = 0; i < g.size(); ++i)
                g[i] = (1.0 - flow.s) * g[i] + flow.s * flow.alpha_samples[i] * u[i];
            return g;
        }
        case flow_family::homotopy_infinity: {
            Field g = nemytskii(f, u);
            for (std::size_t i = 0; i < g.size(); ++i)
                g[i] = (1.0 - flow.s) * g[i] + flow.s * flow.omega_samples[i] * u[i];
            return g;
        }
        case flow_family::resonant: {
            // G(u,s) = P F(Pu + sQu) + s Q F(Pu + sQu) = s w + (1-s) P w
            Field pu = flow.split->apply_p(u);
            Field v = flow.s * u;
            axpy(1.0 - flow.s, pu, v);
            Field w = nemytskii(f, v);
            Field pw = flow.split->apply_p(w);
            Field g = flow.s * w;
            axpy(1.0 - flow.s, pw, g);
            return g;
        }
    }
    return Field::zero(u.grid);
}

namespace detail {

inline TridiagLU imex_factorization(const DiscreteOperator& op, double dt) {
    std::vector<double> d(op.dim());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 1.0 + dt * op.diag[i];
    return TridiagLU::symmetric(d, dt * op.offdiag);
}

inline double implicit_dt_guard(const DiscreteOperator& op) {
    // Gershgorin: eigenvalues of A are >= min_i(diag_i) - 2/h^2; when that
    // bound is negative, (I + dt A) stays positive definite for dt below its
    // reciprocal magnitude.
    double lo = std::numeric_limits<double>::infinity();
    const double two_inv_h2 = -2.0 * op.offdiag;
    for (double d : op.diag) lo = std::min(lo, d - two_inv_h2);
    if (lo >= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (-lo);
}

} // namespace detail

/// Single IMEX step.
inline Field step(const FlowSpec& flow, const Field& u, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (dt >= detail::implicit_dt_guard(flow.op))
        throw std::invalid_argument("step: dt exceeds the implicit-step singularity guard");
    Field g = rhs(flow, u);
    std::vector<double> b = interior(u);
    const std::vector<double> gi = interior(g);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += dt * gi[i];
    TridiagLU lu = detail::imex_factorization(flow.op, dt);
    if (lu.singular()) throw numerical_error("step: singular implicit system");
    lu.solve_in_place(b);
    return from_interior(u.grid, b);
}

struct EvolvePolicy {
    double dt = 1e-2;
    int record_stride = 10;       // in steps
    double h1_ceiling = 1e6;      // blow-up guard
    std::vector<int> tail_track;  // cut-off indices n whose mass is recorded
    std::shared_ptr<const ProjectionSplit> split; // for P/Q-norm diagnostics
    const PotentialSpec* potential = nullptr;     // for energy records
    bool record_energy = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<double> energies;
    std::vector<double> dissipation;   // || (u_k - u_{k-1}) / dt ||_{L2}^2 at records
    std::vector<double> h1_norms;
    std::vector<double> l2_norms;
    std::map<int, std::vector<double>> tail_mass;
    std::vector<double> p_norms; // ||P u||_{L2}
    std::vector<double> q_norms; // ||Q u||_{H1}
    double dt = 0.0;
    std::size_t steps = 0;

    std::size_t records() const { return times.size(); }
    const Field& endpoint() const { return fields.back(); }
};

/// Energy E(u) = 1/2 int |grad u|^2 + (V - lambda) u^2 dx - int Primitive(x, u) dx.
/// The primitive enters with a minus sign: along the flow dE/dt = -||u'||^2.
inline double energy(const Field& u, const PotentialSpec& V, double lambda,
                     const NonlinearitySpec* f = nullptr) {
    Field g = gradient(u);
    Field dens = Field::zero(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = u.grid->node(i);
        dens[i] = 0.5 * (g[i] * g[i] + (V(x) - lambda) * u[i] * u[i]);
        if (f) dens[i] -= f->primitive(x, u[i]);
    }
    return integrate(dens);
}

inline Trajectory evolve(const FlowSpec& flow, const Field& u0, double T,
                         const EvolvePolicy& policy) {
    flow.validate();
    if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
    if (!(policy.dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    const double guard = detail::implicit_dt_guard(flow.op);
    if (policy.dt >= guard)
        throw std::invalid_argument("evolve: dt exceeds the implicit-step singularity guard");

    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil(T / policy.dt - 1e-12));
    const double dt = T / static_cast<double>(n_steps);

    TridiagLU lu = detail::imex_factorization(flow.op, dt);
    if (lu.singular()) throw numerical_error("evolve: singular implicit system");

    std::vector<std::pair<int, Field>> cutoffs;
    for (int n : policy.tail_track) cutoffs.emplace_back(n, cutoff_weights(flow.op.grid, n));

    Trajectory traj;
    traj.dt = dt;

    Field u = u0;
    double last_step_dissipation = 0.0;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.fields.push_back(u);
        traj.h1_norms.push_back(h1_norm(u));
        traj.l2_norms.push_back(l2_norm(u));
        traj.dissipation.push_back(last_step_dissipation);
        if (policy.record_energy && policy.potential) {
            const NonlinearitySpec* f =
                flow.family == flow_family::plain ? flow.nonlinearity.get() : nullptr;
            traj.energies.push_back(energy(u, *policy.potential, flow.op.lambda, f));
        }
        for (auto& [n, phi] : cutoffs) {
            Field dens = Field::zero(u.grid);
            for (std::size_t i = 0; i < u.size(); ++i) dens[i] = phi[i] * u[i] * u[i];
            traj.tail_mass[n].push_back(integrate(dens));
        }
        if (policy.split) {
            traj.p_norms.push_back(l2_norm(policy.split->apply_p(u)));
            traj.q_norms.push_back(h1_norm(policy.split->apply_q(u)));
        }
    };
    record(0.0);

    for (std::size_t k = 1; k <= n_steps; ++k) {
        Field g = rhs(flow, u);
        std::vector<double> b = interior(u);
        {
            const std::vector<double> gi = interior(g);
            for (std::size_t i = 0; i < b.size(); ++i) b[i] += dt * gi[i];
        }
        lu.solve_in_place(b);
        Field next = from_interior(u.grid, b);

        Field diff = next - u;
        last_step_dissipation = l2_norm_sq(diff) / (dt * dt);
        u = std::move(next);
        traj.steps = k;

        if (!std::isfinite(u[u.size() / 2]))
            throw numerical_error("evolve: non-finite state at t = " + std::to_string(k * dt));
        const bool at_record = (k % static_cast<std::size_t>(policy.record_stride) == 0) ||
                               k == n_steps;
        if (at_record) {
            if (!u.all_finite() || h1_norm(u) > policy.h1_ceiling)
                throw numerical_error(
                    "evolve: H1 blow-up guard tripped at t = " + std::to_string(k * dt) +
                    " (hypothesis violation or bad configuration)");
            record(static_cast<double>(k) * dt);
        }
    }
    return traj;
}

struct DissipationResidual {
    std::vector<double> per_interval; // |(E_{j+1}-E_j)/dt + ||du/dt||^2| between records
    double max_residual = 0.0;
    double max_energy_increase = 0.0; // max over records of E_{j+1} - E_j
};

/// Discrete check of dE/dt = -||u'||^2 between consecutive records, with the
/// difference quotient built from the stored fields.
inline DissipationResidual dissipation_residual(const Trajectory& traj) {
    DissipationResidual out;
    for (std::size_t j = 0; j + 1 < traj.records(); ++j) {
        const double dt = traj.times[j + 1] - traj.times[j];
        Field du = traj.fields[j + 1] - traj.fields[j];
        const double rate = l2_norm_sq(du) / (dt * dt);
        const double dE = (traj.energies[j + 1] - traj.energies[j]) / dt;
        const double r = std::abs(dE + rate);
        out.per_interval.push_back(r);
        out.max_residual = std::max(out.max_residual, r);
        out.max_energy_increase =
            std::max(out.max_energy_increase, traj.energies[j + 1] - traj.energies[j]);
    }
    return out;
}

} // namespace cwaves
