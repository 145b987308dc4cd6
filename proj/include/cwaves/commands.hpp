#pragma once

// Command implementations behind the CLI: spectrum, evolve, find-wave, check
// and sweep. Each writes its data files plus a manifest into the output
// directory. Identical config and seed reproduce the data files bit for bit.

#include <atomic>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "cwaves/config.hpp"
#include "cwaves/io.hpp"
#include "cwaves/manifest.hpp"
#include "cwaves/semiflow.hpp"
#include "cwaves/spectral.hpp"
#include "cwaves/tail.hpp"
#include "cwaves/verdicts.hpp"

namespace cwaves {

namespace detail {

inline std::filesystem::path prepare_out_dir(const RunConfig& cfg, const std::string& override_dir) {
    std::filesystem::path dir = override_dir.empty() ? cfg.output_dir : override_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

inline void fit_window_defaults(const RunConfig& cfg, double& lo, double& hi) {
    lo = cfg.fit_lo > 0.0 ? cfg.fit_lo : 0.25 * cfg.L;
    hi = cfg.fit_hi > 0.0 ? cfg.fit_hi : 0.60 * cfg.L;
}

inline nlohmann::json equilibrium_json(const Equilibrium& eq, const std::string& label,
                                       const std::string& file) {
    nlohmann::json j;
    j["label"] = label;
    j["file"] = file;
    j["residual"] = eq.residual;
    j["energy"] = eq.energy;
    j["l2_norm"] = l2_norm(eq.u);
    j["h1_norm"] = h1_norm(eq.u);
    j["converged"] = eq.converged;
    j["degenerate"] = eq.degenerate;
    if (eq.morse_index) j["morse_index"] = *eq.morse_index;
    if (!eq.message.empty()) j["message"] = eq.message;
    return j;
}

inline void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    CsvWriter csv(path);
    std::vector<std::string> header{"t", "H1_norm", "L2_norm", "E", "dissipation"};
    std::vector<int> tracked;
    for (const auto& [n, _] : traj.tail_mass) tracked.push_back(n);
    for (int n : tracked) header.push_back("tail_" + std::to_string(n));
    header.push_back("P_norm");
    header.push_back("Q_norm");
    csv.row(header);
    for (std::size_t j = 0; j < traj.records(); ++j) {
        std::vector<std::string> row;
        row.push_back(fmt17(traj.times[j]));
        row.push_back(fmt17(traj.h1_norms[j]));
        row.push_back(fmt17(traj.l2_norms[j]));
        row.push_back(traj.energies.empty() ? "" : fmt17(traj.energies[j]));
        row.push_back(fmt17(traj.dissipation[j]));
        for (int n : tracked) row.push_back(fmt17(traj.tail_mass.at(n)[j]));
        row.push_back(traj.p_norms.empty() ? "" : fmt17(traj.p_norms[j]));
        row.push_back(traj.q_norms.empty() ? "" : fmt17(traj.q_norms[j]));
        csv.row(row);
    }
}

inline nlohmann::json verdict_json(const ExistenceVerdict& v) {
    nlohmann::json j;
    j["scenario"] = to_string(v.scenario);
    j["lambda_used"] = v.lambda_used;
    j["hypotheses_met"] = v.hypotheses_met;
    j["prediction_positive"] = v.prediction_positive;
    j["conclusion"] = v.conclusion;
    j["seed"] = v.seed;
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : v.checklist) {
        nlohmann::json e;
        e["name"] = it.name;
        e["pass"] = it.pass;
        e["margin"] = it.margin;
        if (!it.detail.empty()) e["detail"] = it.detail;
        items.push_back(e);
    }
    j["hypotheses"] = items;
    if (!v.resonance_condition.empty()) j["resonance_condition"] = v.resonance_condition;
    nlohmann::json exps;
    if (v.d_minus_alpha) exps["d_minus_alpha"] = *v.d_minus_alpha;
    if (v.d_minus_omega) exps["d_minus_omega"] = *v.d_minus_omega;
    if (v.d_minus) exps["d_minus"] = *v.d_minus;
    if (v.dim_x0) exps["dim_x0"] = *v.dim_x0;
    if (v.k_inf) exps["k_inf"] = *v.k_inf;
    j["exponents"] = exps;
    if (v.corollary_clause) j["corollary_clause"] = *v.corollary_clause;
    if (v.alpha_bar) j["alpha_bar"] = *v.alpha_bar;
    nlohmann::json geo;
    if (v.alpha_geo) geo["alpha_geo"] = *v.alpha_geo;
    if (v.r0) geo["R0"] = *v.r0;
    if (v.r_inf) geo["R_inf"] = *v.r_inf;
    if (v.K_measured) geo["K"] = *v.K_measured;
    if (v.rho_plus) geo["rho_plus"] = *v.rho_plus;
    if (v.rho_minus) geo["rho_minus"] = *v.rho_minus;
    if (v.m_norm) geo["m_l2_norm"] = *v.m_norm;
    if (!geo.empty()) j["geometry"] = geo;
    return j;
}

} // namespace detail

/// Eigenvalues, eigenfield snapshots, the asymptotic-bottom estimate, the
/// Morse-count table over the sweep grid, and decay-rate fits.
inline void cmd_spectrum(const RunConfig& cfg, const std::string& out_override = "",
                         const std::filesystem::path& config_path = {}) {
    auto dir = detail::prepare_out_dir(cfg, out_override);
    RunManifest manifest(dir, cfg.config_hash());
    if (!config_path.empty()) manifest.add_input("config", config_path);

    auto grid = cfg.make_grid();
    auto V = cfg.make_potential();
    auto op = assemble(grid, V, cfg.lambda);
    auto sd = eigen_lowest(op, static_cast<std::size_t>(cfg.eigen_k),
                           cfg.tau_ker > 0 ? cfg.tau_ker : -1.0);
    auto bottom = asymptotic_bottom(V, grid);

    {
        CsvWriter csv(dir / "eigenvalues.csv");
        csv.row({"index", "mu", "classification", "residual"});
        for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i)
            csv.row({fmt_int(static_cast<long long>(i)), fmt17(sd.eigenvalues[i]),
                     to_string(sd.classes[i]), fmt17(sd.residuals[i])});
        manifest.add_output(dir / "eigenvalues.csv");
    }
    for (std::size_t i = 0; i < sd.eigenfields.size(); ++i) {
        auto path = dir / ("eigenfield_" + std::to_string(i) + ".cwf");
        write_snapshot(path, sd.eigenfields[i]);
        manifest.add_output(path);
    }
    {
        // Morse counts of -Laplace + V over the lambda grid
        auto op0 = assemble(grid, V, 0.0);
        auto sd0 = eigen_lowest(op0, static_cast<std::size_t>(cfg.eigen_k),
                                cfg.tau_ker > 0 ? cfg.tau_ker : -1.0);
        CsvWriter csv(dir / "dminus.csv");
        csv.row({"lambda", "d_minus", "boundary"});
        for (double lv : cfg.sweep_lambdas) {
            if (lv >= sd0.ess_bottom) {
                csv.row({fmt17(lv), "", "above_essential_bottom"});
                continue;
            }
            auto mc = morse_count(sd0, lv);
            csv.row({fmt17(lv), fmt_int(static_cast<long long>(mc.count)),
                     mc.boundary ? "true" : "false"});
        }
        manifest.add_output(dir / "dminus.csv");
    }
    {
        double lo, hi;
        detail::fit_window_defaults(cfg, lo, hi);
        CsvWriter csv(dir / "decay_fits.csv");
        csv.row({"index", "delta", "amplitude", "fit_residual", "ok"});
        for (std::size_t i = 0; i < sd.eigenfields.size(); ++i) {
            if (sd.eigenvalues[i] >= sd.ess_bottom) continue;
            auto fit = decay_rate(sd.eigenfields[i], lo, hi);
            csv.row({fmt_int(static_cast<long long>(i)), fmt17(fit.delta),
                     fmt17(fit.amplitude), fmt17(fit.residual), fit.ok ? "true" : "false"});
        }
        manifest.add_output(dir / "decay_fits.csv");
    }
    {
        auto smoothing = measure_smoothing_constant(sd, 24, cfg.seed);
        nlohmann::json j;
        j["lambda"] = cfg.lambda;
        j["rho_estimate"] = bottom.value;
        if (V.rho_declared) {
            j["rho_declared"] = *V.rho_declared;
            j["rho_declared_mismatch"] = bottom.declared_mismatch;
        }
        j["essential_bottom_shifted"] = sd.ess_bottom;
        j["tau_ker"] = sd.tau_ker;
        j["rho_plus"] = sd.rho_plus;
        j["rho_minus"] = sd.rho_minus;
        j["K_smoothing"] = smoothing.K;
        j["K_probes"] = smoothing.probes;
        std::ofstream out(dir / "spectrum.json", std::ios::binary);
        out << j.dump(2) << "\n";
        manifest.add_output(dir / "spectrum.json");
    }
    manifest.write();
}

/// Plain-flow trajectory with diagnostics and the final state snapshot.
inline void cmd_evolve(const RunConfig& cfg, const std::string& out_override = "",
                       const std::filesystem::path& config_path = {}) {
    auto dir = detail::prepare_out_dir(cfg, out_override);
    RunManifest manifest(dir, cfg.config_hash());
    if (!config_path.empty()) manifest.add_input("config", config_path);

    auto grid = cfg.make_grid();
    auto V = cfg.make_potential();
    auto op = assemble(grid, V, cfg.lambda);
    auto f = std::make_shared<NonlinearitySpec>(cfg.make_nonlinearity());
    auto flow = make_plain_flow(op, f);

    expr u0e(cfg.u0_expr);
    Field u0 = Field::sample(grid, [&](double x) { return u0e(x); });
    u0[0] = u0[u0.size() - 1] = 0.0;

    EvolvePolicy pol;
    pol.dt = cfg.dt;
    pol.record_stride = static_cast<int>(cfg.record_stride);
    pol.h1_ceiling = cfg.h1_ceiling;
    for (long long n : cfg.tail_track) pol.tail_track.push_back(static_cast<int>(n));
    pol.potential = &V;
    auto sd = eigen_lowest(op, static_cast<std::size_t>(cfg.eigen_k),
                           cfg.tau_ker > 0 ? cfg.tau_ker : -1.0);
    auto split = std::make_shared<ProjectionSplit>(projections(sd));
    pol.split = split;

    auto traj = evolve(flow, u0, cfg.T, pol);
    detail::write_trajectory_csv(dir / "trajectory.csv", traj);
    manifest.add_output(dir / "trajectory.csv");
    write_snapshot(dir / "final_state.cwf", traj.endpoint());
    manifest.add_output(dir / "final_state.cwf");
    manifest.write();
}

/// Flow-then-Newton standing-wave computation from the configured seed.
inline void cmd_find_wave(const RunConfig& cfg, const std::string& out_override = "",
                          const std::filesystem::path& config_path = {}) {
    auto dir = detail::prepare_out_dir(cfg, out_override);
    RunManifest manifest(dir, cfg.config_hash());
    if (!config_path.empty()) manifest.add_input("config", config_path);

    auto grid = cfg.make_grid();
    auto V = cfg.make_potential();
    auto op = assemble(grid, V, cfg.lambda);
    auto f = std::make_shared<NonlinearitySpec>(cfg.make_nonlinearity());
    auto flow = make_plain_flow(op, f);

    expr u0e(cfg.u0_expr);
    Field seed = Field::sample(grid, [&](double x) { return u0e(x); });
    seed[0] = seed[seed.size() - 1] = 0.0;

    EquilibriumPolicy pol;
    pol.dt = cfg.dt;
    pol.t_max = cfg.t_max;
    pol.switch_tol = cfg.switch_tol;
    pol.newton_tol = cfg.newton_tol;
    pol.h1_ceiling = cfg.h1_ceiling;
    auto eq = find_equilibrium(flow, seed, pol);
    if (!eq.converged) throw numerical_error("find-wave: " + eq.message);
    eq.energy = energy(eq.u, V, cfg.lambda, f.get());

    write_snapshot(dir / "wave.cwf", eq.u);
    manifest.add_output(dir / "wave.cwf");
    nlohmann::json j = detail::equilibrium_json(eq, "wave", "wave.cwf");
    std::ofstream out(dir / "equilibrium.json", std::ios::binary);
    out << j.dump(2) << "\n";
    out.close();
    manifest.add_output(dir / "equilibrium.json");
    manifest.write();
}

/// Scenario hypothesis check; returns false when the hypotheses are not met.
inline bool cmd_check(const RunConfig& cfg, const std::string& out_override = "",
                      const std::filesystem::path& config_path = {}) {
    auto dir = detail::prepare_out_dir(cfg, out_override);
    RunManifest manifest(dir, cfg.config_hash());
    if (!config_path.empty()) manifest.add_input("config", config_path);

    auto grid = cfg.make_grid();
    auto V = cfg.make_potential();
    auto f = cfg.make_nonlinearity();
    const scenario_kind kind = cfg.scenario_tag();
    auto opts = cfg.check_options();

    ExistenceVerdict v = kind == scenario_kind::nonresonant
                             ? check_nonresonant(V, f, cfg.lambda, grid, opts)
                             : check_resonant(V, f, cfg.lambda, grid, kind, opts);

    nlohmann::json j = detail::verdict_json(v);
    nlohmann::json eqs = nlohmann::json::array();
    for (std::size_t i = 0; i < v.equilibria.size(); ++i) {
        const std::string file = "wave_" + std::to_string(i) + ".cwf";
        write_snapshot(dir / file, v.equilibria[i].u);
        manifest.add_output(dir / file);
        eqs.push_back(detail::equilibrium_json(v.equilibria[i], v.equilibrium_labels[i], file));
    }
    j["equilibria"] = eqs;
    nlohmann::json orbits = nlohmann::json::array();
    for (std::size_t i = 0; i < v.orbits.size(); ++i) {
        const auto& orb = v.orbits[i];
        const std::string file = "orbit_" + std::to_string(i) + ".csv";
        detail::write_trajectory_csv(dir / file, orb.trajectory);
        manifest.add_output(dir / file);
        nlohmann::json oj;
        oj["file"] = file;
        oj["found"] = orb.found;
        oj["from"] = orb.from;
        oj["to"] = orb.to;
        oj["energy_start"] = orb.energy_start;
        oj["energy_end"] = orb.energy_end;
        oj["endpoint_distance"] = orb.endpoint_distance;
        if (!orb.message.empty()) oj["message"] = orb.message;
        orbits.push_back(oj);
    }
    j["orbits"] = orbits;
    std::ofstream out(dir / "verdict.json", std::ios::binary);
    out << j.dump(2) << "\n";
    out.close();
    manifest.add_output(dir / "verdict.json");
    manifest.write();
    return v.hypotheses_met;
}

/// One verdict row per lambda, fanned out over a worker pool.
inline void cmd_sweep(const RunConfig& cfg, int workers = 1, const std::string& out_override = "",
                      const std::filesystem::path& config_path = {}) {
    auto dir = detail::prepare_out_dir(cfg, out_override);
    RunManifest manifest(dir, cfg.config_hash());
    if (!config_path.empty()) manifest.add_input("config", config_path);

    auto grid = cfg.make_grid();
    auto V = cfg.make_potential();
    auto sd0 = eigen_lowest(assemble(grid, V, 0.0), static_cast<std::size_t>(cfg.eigen_k),
                            cfg.tau_ker > 0 ? cfg.tau_ker : -1.0);

    struct Row {
        double lambda = 0.0;
        std::string d_minus, boundary, hypotheses, prediction, k_inf, n_eq, n_nonzero, note;
    };
    std::vector<Row> rows(cfg.sweep_lambdas.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            const double lv = cfg.sweep_lambdas[i];
            Row& row = rows[i];
            row.lambda = lv;
            try {
                if (lv < sd0.ess_bottom) {
                    auto mc = morse_count(sd0, lv);
                    row.d_minus = fmt_int(static_cast<long long>(mc.count));
                    row.boundary = mc.boundary ? "true" : "false";
                } else {
                    row.note = "above_essential_bottom";
                    row.hypotheses = "false";
                    continue;
                }
                RunConfig local = cfg;
                local.lambda = lv;
                auto opts = local.check_options();
                opts.snap_lambda = false; // sweep probes the grid as given
                auto f = local.make_nonlinearity();
                const scenario_kind kind = local.scenario_tag();
                ExistenceVerdict v =
                    kind == scenario_kind::nonresonant
                        ? check_nonresonant(V, f, lv, grid, opts)
                        : check_resonant(V, f, lv, grid, kind, opts);
                row.hypotheses = v.hypotheses_met ? "true" : "false";
                row.prediction = v.prediction_positive ? "true" : "false";
                if (v.k_inf) row.k_inf = fmt_int(static_cast<long long>(*v.k_inf));
                std::size_t nonzero = 0;
                for (std::size_t q = 0; q < v.equilibria.size(); ++q)
                    if (v.equilibrium_labels[q] != "zero") ++nonzero;
                row.n_eq = fmt_int(static_cast<long long>(v.equilibria.size()));
                row.n_nonzero = fmt_int(static_cast<long long>(nonzero));
            } catch (const std::exception& e) {
                row.note = e.what();
                row.hypotheses = "false";
            }
        }
    };
    const int n_workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    CsvWriter csv(dir / "sweep.csv");
    csv.row({"lambda", "d_minus", "boundary", "hypotheses_met", "prediction", "k_inf",
             "n_equilibria", "n_nonzero", "note"});
    for (const auto& r : rows)
        csv.row({fmt17(r.lambda), r.d_minus, r.boundary, r.hypotheses, r.prediction, r.k_inf,
                 r.n_eq, r.n_nonzero, r.note});
    manifest.add_output(dir / "sweep.csv");
    manifest.write();
}

} // namespace cwaves
