// conley-waves: spectra, semiflows and standing-wave existence checks for
// 1D Schrodinger operators with decaying potentials.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure,
//             4 hypotheses not met (check only).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cwaves/commands.hpp"
#include "cwaves/config.hpp"
#include "cwaves/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int workers = 1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--workers", args.workers, "worker threads for sweep")->default_val(1);
    cmd->add_option("--seed", args.seed, "override the configured RNG seed");
}

cwaves::RunConfig load(const CommonArgs& args) {
    cwaves::RunConfig cfg = cwaves::RunConfig::parse_file(args.config_path);
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conley-waves: standing waves of 1D nonlinear Schrodinger problems"};
    app.set_version_flag("--version", cwaves::version_string);
    app.require_subcommand(1);

    CommonArgs args;
    auto* c_spectrum = app.add_subcommand("spectrum", "low spectrum, Morse counts, decay fits");
    auto* c_evolve = app.add_subcommand("evolve", "integrate the parabolic flow");
    auto* c_find = app.add_subcommand("find-wave", "compute a standing wave");
    auto* c_check = app.add_subcommand("check", "run the scenario hypothesis check");
    auto* c_sweep = app.add_subcommand("sweep", "verdict table over a lambda grid");
    for (auto* c : {c_spectrum, c_evolve, c_find, c_check, c_sweep}) add_common(c, args);

    CLI11_PARSE(app, argc, argv);

    try {
        const cwaves::RunConfig cfg = load(args);
        if (c_spectrum->parsed()) {
            cwaves::cmd_spectrum(cfg, args.out_dir, args.config_path);
        } else if (c_evolve->parsed()) {
            cwaves::cmd_evolve(cfg, args.out_dir, args.config_path);
        } else if (c_find->parsed()) {
            cwaves::cmd_find_wave(cfg, args.out_dir, args.config_path);
        } else if (c_check->parsed()) {
            if (!cwaves::cmd_check(cfg, args.out_dir, args.config_path)) {
                std::fprintf(stderr, "{\"error\":\"hypotheses not met\",\"kind\":\"verdict\"}\n");
                return 4;
            }
        } else if (c_sweep->parsed()) {
            cwaves::cmd_sweep(cfg, args.workers, args.out_dir, args.config_path);
        }
    } catch (const cwaves::config_error& e) {
        std::fprintf(stderr, "{\"error\":\"%s\",\"kind\":\"config\"}\n", e.what());
        return 2;
    } catch (const cwaves::numerical_error& e) {
        std::fprintf(stderr, "{\"error\":\"%s\",\"kind\":\"numerical\"}\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"%s\",\"kind\":\"internal\"}\n", e.what());
        return 3;
    }
    return 0;
}
