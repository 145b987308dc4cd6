#pragma once

// Constructive tail-estimate constants: for trajectories with H1 bound R the
// mass outside radius n obeys
//   int phi_n |u(t)|^2 <= exp(-2 eps (t - t0)) ||u(t0)||_{L2}^2 + gamma_n
// with the explicit sequences
//   beta_n  = (4 sqrt 2 / n) L_phi + 2 ||phi_n V_0||_{L^p}
//   gamma_n = eps^-1 R^2 (beta_n + ||phi_n a_0||_{L^p}) + R ||phi_n b||_{L2}
// valid from the first n0 with phi_n (V_inf - a_inf - lambda) >= eps phi_n.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cwaves/grid.hpp"
#include "cwaves/nonlinear.hpp"
#include "cwaves/potential.hpp"
#include "cwaves/semiflow.hpp"

namespace cwaves {

struct TailBoundCertificate {
    double R = 0.0;        // H1 bound of the trajectories covered
    double epsilon = 0.0;  // decay rate (default: half the spectral gap)
    int n0 = 1;            // first admissible cut-off index
    int n_max = 1;
    std::vector<double> beta;   // indexed by n - 1, n = 1..n_max
    std::vector<double> gamma;

    double beta_at(int n) const { return beta.at(static_cast<std::size_t>(n - 1)); }
    double gamma_at(int n) const { return gamma.at(static_cast<std::size_t>(n - 1)); }
};

struct TailInputs {
    const PotentialSpec* V = nullptr;
    const NonlinearitySpec::SignBound* a = nullptr; // may be null: a == 0
    scalar_fn b;                                    // may be empty: b == 0
    double R = 1.0;
    double lambda = 0.0;
};

/// Builds the certificate. Fails when rho(V_inf - a_inf) <= lambda (no gap)
/// or when the requested epsilon admits no cut-off index on the grid.
inline TailBoundCertificate tail_constants(const TailInputs& in, const grid_ptr& grid,
                                           const CutoffProfile& profile = {},
                                           std::optional<double> epsilon_override = std::nullopt) {
    scalar_fn a_inf = in.a && in.a->a_inf ? in.a->a_inf : scalar_fn([](double) { return 0.0; });
    const double rho = asymptotic_bottom_shifted(*in.V, a_inf, grid).value;
    const double gap = rho - in.lambda;
    if (!(gap > 0.0))
        throw numerical_error("tail_constants: spectral gap rho(V_inf - a_inf) - lambda <= 0");
    const double eps = epsilon_override.value_or(0.5 * gap);
    if (!(eps > 0.0)) throw std::invalid_argument("tail_constants: epsilon must be positive");

    TailBoundCertificate cert;
    cert.R = in.R;
    cert.epsilon = eps;
    cert.n_max = max_cutoff_index(*grid);

    // first n with phi_n (V_inf - a_inf - lambda) >= eps phi_n on the grid
    int n0 = -1;
    for (int n = 1; n <= cert.n_max; ++n) {
        Field phi = cutoff_weights(grid, n, profile);
        bool ok = true;
        bool support_nonempty = false;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            if (phi[i] <= 0.0) continue;
            support_nonempty = true;
            const double x = grid->node(i);
            if (in.V->v_inf(x) - a_inf(x) - in.lambda < eps) {
                ok = false;
                break;
            }
        }
        if (ok && support_nonempty) {
            n0 = n;
            break;
        }
    }
    if (n0 < 0)
        throw numerical_error(
            "tail_constants: no admissible cut-off index: epsilon exceeds the available gap");
    cert.n0 = n0;

    const double L_phi = CutoffProfile::derivative_bound;
    for (int n = 1; n <= cert.n_max; ++n) {
        Field phi = cutoff_weights(grid, n, profile);
        Field phi_v0 = Field::sample(grid, [&](double x) { return in.V->v_0(x); });
        for (std::size_t i = 0; i < phi.size(); ++i) phi_v0[i] *= phi[i];
        const double beta_n =
            (4.0 * std::sqrt(2.0) / n) * L_phi + 2.0 * lp_norm(phi_v0, in.V->p);

        double a0_norms = 0.0;
        if (in.a) {
            for (const auto& comp : in.a->a_0) {
                Field phi_a = Field::sample(grid, comp.value);
                for (std::size_t i = 0; i < phi.size(); ++i) phi_a[i] *= phi[i];
                a0_norms += lp_norm(phi_a, comp.p);
            }
        }
        double b_norm = 0.0;
        if (in.b) {
            Field phi_b = Field::sample(grid, in.b);
            for (std::size_t i = 0; i < phi.size(); ++i) phi_b[i] *= phi[i];
            b_norm = l2_norm(phi_b);
        }
        const double gamma_n =
            (1.0 / eps) * in.R * in.R * (beta_n + a0_norms) + in.R * b_norm;
        cert.beta.push_back(beta_n);
        cert.gamma.push_back(gamma_n);
    }
    return cert;
}

struct TailVerdictRow {
    double t = 0.0;
    int n = 0;
    double lhs = 0.0; // int phi_n |u(t)|^2
    double rhs = 0.0; // exp(-2 eps (t - t0)) ||u(t0)||^2 + gamma_n
    bool ok = true;
};

struct TailVerdict {
    bool ok = true;
    std::vector<TailVerdictRow> rows;
    std::optional<TailVerdictRow> first_violation;
};

/// Checks the displayed inequality for every recorded time and every tracked
/// cut-off index >= n0. The trajectory must respect the certified H1 bound.
inline TailVerdict tail_verify(const Trajectory& traj, const TailBoundCertificate& cert) {
    for (double h1 : traj.h1_norms)
        if (h1 > cert.R * (1.0 + 1e-12))
            throw numerical_error("tail_verify: trajectory exceeds the certified H1 bound R");

    TailVerdict verdict;
    const double t0 = traj.times.front();
    const double mass0 = traj.l2_norms.front() * traj.l2_norms.front();
    for (const auto& [n, masses] : traj.tail_mass) {
        if (n < cert.n0 || n > cert.n_max) continue;
        for (std::size_t j = 0; j < masses.size(); ++j) {
            TailVerdictRow row;
            row.t = traj.times[j];
            row.n = n;
            row.lhs = masses[j];
            row.rhs = std::exp(-2.0 * cert.epsilon * (row.t - t0)) * mass0 + cert.gamma_at(n);
            row.ok = row.lhs <= row.rhs * (1.0 + 1e-12);
            if (!row.ok) {
                verdict.ok = false;
                if (!verdict.first_violation) verdict.first_violation = row;
            }
            verdict.rows.push_back(row);
        }
    }
    return verdict;
}

} // namespace cwaves
