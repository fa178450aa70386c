// Command-line front end: run | relax | verify | analyze.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtf/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Q-tensor nematodynamics simulator and verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir;
    uint64_t seed = 0;
    bool seed_set = false, out_set = false, snaps_set = false;
    int snapshots = 0;

    auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--out", out_dir, "override the output directory")
            ->each([&](const std::string&) { out_set = true; });
        sub->add_option("--snapshots", snapshots, "override the snapshot count")
            ->each([&](const std::string&) { snaps_set = true; });
    };

    CLI::App* run = app.add_subcommand("run", "coupled flow + Q-tensor run");
    add_overrides(run);
    CLI::App* relax = app.add_subcommand("relax", "pure gradient-flow relaxation");
    add_overrides(relax);

    CLI::App* verify = app.add_subcommand("verify", "cross-module identity suites");
    uint64_t verify_seed = 20260810;
    verify->add_option("--seed", verify_seed, "suite seed");

    CLI::App* analyze = app.add_subcommand("analyze", "equilibrium certificates");
    analyze->add_option("dir", run_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return qtf::cli::cmd_verify(verify_seed);
        if (analyze->parsed()) return qtf::cli::cmd_analyze(run_dir);

        qtf::RunConfig cfg = qtf::parse_config_file(config_path);
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out = out_dir;
        if (snaps_set) cfg.snapshots = snapshots;
        return run->parsed() ? qtf::cli::cmd_run(cfg) : qtf::cli::cmd_relax(cfg);
    } catch (const qtf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
