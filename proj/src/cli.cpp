#include "qtf/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "qtf/io.hpp"
#include "qtf/operators.hpp"
#include "qtf/verify.hpp"

namespace qtf {
namespace cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json config_to_json(const RunConfig& c) {
    json j;
    j["nx"] = c.nx;
    j["ny"] = c.ny;
    j["nz"] = c.nz;
    j["h"] = c.h;
    j["bc"] = c.bc;
    j["a"] = c.a;
    j["b"] = c.b;
    j["c"] = c.c;
    j["epsilon"] = c.epsilon;
    j["nu"] = c.nu;
    j["gamma"] = c.gamma;
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["stretching"] = c.stretching;
    j["bulk"] = c.bulk;
    j["splitting"] = c.splitting;
    j["projection_tol"] = c.projection_tol;
    j["project_q"] = c.project_q;
    j["q_init"] = c.q_init;
    j["q_amplitude"] = c.q_amplitude;
    j["q_uniaxial_s"] = c.q_uniaxial_s;
    j["q_uniaxial_axis"] = c.q_uniaxial_axis;
    j["seed"] = c.seed;
    j["snapshots"] = c.snapshots;
    j["out"] = c.out;
    j["threshold_u_norm"] = c.threshold_u_norm;
    j["threshold_residual"] = c.threshold_residual;
    j["threshold_cauchy"] = c.threshold_cauchy;
    j["threshold_energy_gap_rel"] = c.threshold_energy_gap_rel;
    return j;
}

RunConfig config_from_json(const json& j) {
    // Round-trip through the flat text format so the same parser and
    // validation apply.
    std::string text;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string v;
        if (it->is_string())
            v = it->get<std::string>();
        else if (it->is_boolean())
            v = it->get<bool>() ? "true" : "false";
        else if (it->is_number_unsigned())
            v = std::to_string(it->get<uint64_t>());
        else if (it->is_number_integer())
            v = std::to_string(it->get<int64_t>());
        else
            v = fmt_g17(it->get<double>());
        text += it.key() + " = " + v + "\n";
    }
    return parse_config_text(text);
}

struct RunArtifacts {
    RunResult result;
    std::vector<SnapshotManifestRow> manifest;
    double u_norm = 0.0;
    double div_norm = 0.0;
    double critical_residual = 0.0;
};

RunArtifacts execute(const RunConfig& cfg, bool flow_enabled) {
    SimState init = config_initial_state(cfg);
    StepperConfig sc = config_stepper(cfg);
    const long steps = std::max<long>(1, planned_steps(init.t, cfg.t_end, cfg.dt));

    RunArtifacts art;
    RunHooks hooks;
    hooks.snapshot_every = std::max<long>(1, steps / cfg.snapshots);
    hooks.on_snapshot = [&](const SimState& s) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%08ld.qtf", s.step);
        write_snapshot((fs::path(cfg.out) / name).string(), s, flow_enabled);
        art.manifest.push_back({s.step, s.t, name});
    };

    art.result = run(std::move(init), sc, cfg.t_end, hooks, flow_enabled);
    const SimState& fin = art.result.state;
    if (art.manifest.empty()) hooks.on_snapshot(fin);  // t_end == 0 degenerate run
    art.u_norm = norm_l2(fin.u);
    art.div_norm = divergence_norm(fin.u);
    art.critical_residual = critical_point_residual(fin.q, sc.params, sc.bulk);
    return art;
}

void write_report(const RunConfig& cfg, const RunArtifacts& art, const char* mode) {
    const SimState& fin = art.result.state;
    const PotentialParams p = config_params(cfg);
    EnergyBreakdown e = total_energy(&fin.u, fin.q, p);
    json j;
    j["mode"] = mode;
    j["config"] = config_to_json(cfg);
    j["mu"] = p.mu;
    j["steps"] = art.result.ledger.rows.size();
    j["stability"] = art.result.aborted_instability ? "aborted_instability" : "stable";
    j["diagnostic"] = art.result.diagnostic;
    json f;
    f["t"] = fin.t;
    f["u_norm"] = art.u_norm;
    f["div_norm"] = art.div_norm;
    f["critical_residual"] = art.critical_residual;
    f["q_max_abs_trace"] = max_abs_trace(fin.q);
    f["q_max_asymmetry"] = max_asymmetry(fin.q);
    f["kinetic"] = e.kinetic;
    f["elastic"] = e.elastic;
    f["bulk"] = e.bulk;
    f["total"] = e.total;
    j["final"] = f;
    std::ofstream os(fs::path(cfg.out) / "report.json");
    if (!os) throw std::runtime_error("cannot write report.json");
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("cannot write report.json");
}

int run_command(const RunConfig& cfg, bool flow_enabled) {
    if (cfg.snapshots < 1) {  // command-line overrides bypass the parser
        std::cerr << "error: snapshots must be >= 1\n";
        return 1;
    }
    try {
        fs::create_directories(cfg.out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    RunArtifacts art;
    try {
        art = execute(cfg, flow_enabled);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    try {
        write_ledger_csv((fs::path(cfg.out) / "energy.csv").string(), art.result.ledger);
        write_snapshot_manifest((fs::path(cfg.out) / "snapshots.csv").string(),
                                art.manifest);
        write_report(cfg, art, flow_enabled ? "run" : "relax");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    if (art.result.aborted_instability) {
        std::cerr << "instability: " << art.result.diagnostic << "\n";
        return 2;
    }
    std::cout << "wrote " << cfg.out << "/energy.csv ("
              << art.result.ledger.rows.size() << " rows), "
              << art.manifest.size() << " snapshots\n";
    if (!flow_enabled) {
        std::cout << "final critical-point residual " << fmt_g17(art.critical_residual)
                  << " (threshold " << fmt_g17(cfg.threshold_residual) << ")\n";
        if (!(art.critical_residual <= cfg.threshold_residual)) return 4;
    }
    return 0;
}

}  // namespace

int cmd_run(const RunConfig& cfg) { return run_command(cfg, true); }

int cmd_relax(const RunConfig& cfg) { return run_command(cfg, false); }

int cmd_verify(uint64_t seed) {
    std::vector<SuiteResult> results = run_all_suites(seed);
    size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    bool all = true;
    for (const auto& r : results) {
        std::printf("%-*s  %s  %s\n", static_cast<int>(width), r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.metric.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all suites passed" : "some suites FAILED");
    return all ? 0 : 1;
}

int cmd_analyze(const std::string& run_dir) {
    const fs::path dir(run_dir);
    for (const char* name : {"energy.csv", "snapshots.csv", "report.json"}) {
        if (!fs::exists(dir / name)) {
            std::cerr << "error: missing artifact " << (dir / name).string() << "\n";
            return 1;
        }
    }
    EnergyLedger ledger;
    RunConfig cfg;
    json report;
    std::vector<Snapshot> snaps;
    double u_norm = 0.0;
    try {
        ledger = read_ledger_csv((dir / "energy.csv").string());
        std::ifstream is(dir / "report.json");
        is >> report;
        cfg = config_from_json(report.at("config"));
        u_norm = report.at("final").at("u_norm").get<double>();
        const Domain dom = cfg.bc == "periodic" ? Domain::periodic : Domain::box;
        for (const auto& row : read_snapshot_manifest((dir / "snapshots.csv").string())) {
            SnapshotFile f = read_snapshot((dir / row.file).string());
            snaps.push_back({row.t, snapshot_q(f, dom)});
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    EquilibriumReport rep;
    try {
        rep = omega_limit_check(ledger, snaps, u_norm, config_params(cfg),
                                cfg.bulk == "f_pz" ? BulkVariant::f_pz : BulkVariant::f,
                                config_thresholds(cfg));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        json j;
        j["config"] = config_to_json(cfg);
        json thr;
        thr["u_norm"] = rep.thresholds.u_norm;
        thr["critical_residual"] = rep.thresholds.critical_residual;
        thr["cauchy"] = rep.thresholds.cauchy;
        thr["energy_gap_rel"] = rep.thresholds.energy_gap_rel;
        j["thresholds"] = thr;
        json m;
        m["e_infinity"] = rep.e_infinity;
        m["u_norm_final"] = rep.u_norm_final;
        m["critical_residual"] = rep.critical_residual;
        m["cauchy_sup"] = rep.cauchy_sup;
        m["energy_gap"] = rep.energy_gap;
        j["measured"] = m;
        json v;
        v["u_norm"] = rep.u_ok;
        v["critical_residual"] = rep.residual_ok;
        v["cauchy"] = rep.cauchy_ok;
        v["energy_gap"] = rep.gap_ok;
        j["criteria"] = v;
        json fit;
        fit["valid"] = rep.fit.valid;
        fit["error"] = rep.fit.error;
        fit["class"] = rep.fit.valid ? (rep.fit.exponential ? "exponential" : "power")
                                     : "none";
        fit["theta"] = rep.fit.theta;
        fit["beta"] = rep.fit.beta;
        fit["r_squared"] = rep.fit.r2;
        j["decay_fit"] = fit;
        j["converged"] = rep.converged;
        std::ofstream os(dir / "equilibrium.json");
        if (!os) throw std::runtime_error("cannot write equilibrium.json");
        os << j.dump(2) << "\n";

        std::ofstream ds(dir / "decay.csv");
        if (!ds) throw std::runtime_error("cannot write decay.csv");
        ds << "t,excess\n";
        for (const LedgerRow& r : ledger.rows)
            ds << fmt_g17(r.t) << "," << fmt_g17(r.total - rep.e_infinity) << "\n";
        if (!ds) throw std::runtime_error("cannot write decay.csv");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    std::cout << "converged: " << (rep.converged ? "true" : "false") << "\n";
    return rep.converged ? 0 : 5;
}

}  // namespace cli
}  // namespace qtf
