#include "qtf/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qtf/rng.hpp"

namespace qtf {

namespace {

std::string trim(const std::string& s) {
    size_t lo = s.find_first_not_of(" \t\r");
    if (lo == std::string::npos) return "";
    size_t hi = s.find_last_not_of(" \t\r");
    return s.substr(lo, hi - lo + 1);
}

struct KeyTable {
    std::map<std::string, std::function<void(RunConfig&, const std::string&)>> set;

    template <class T>
    void add(const std::string& key, T RunConfig::*member) {
        set[key] = [member, key](RunConfig& c, const std::string& v) {
            std::istringstream is(v);
            T tmp;
            is >> tmp;
            if (is.fail() || !(is >> std::ws).eof())
                throw ConfigError("config: bad value for key '" + key + "': " + v);
            c.*member = tmp;
        };
    }
    void add_str(const std::string& key, std::string RunConfig::*member) {
        set[key] = [member](RunConfig& c, const std::string& v) { c.*member = v; };
    }
    void add_bool(const std::string& key, bool RunConfig::*member) {
        set[key] = [member, key](RunConfig& c, const std::string& v) {
            if (v == "true" || v == "1")
                c.*member = true;
            else if (v == "false" || v == "0")
                c.*member = false;
            else
                throw ConfigError("config: bad boolean for key '" + key + "': " + v);
        };
    }
};

const KeyTable& key_table() {
    static const KeyTable table = [] {
        KeyTable t;
        t.add("nx", &RunConfig::nx);
        t.add("ny", &RunConfig::ny);
        t.add("nz", &RunConfig::nz);
        t.add("h", &RunConfig::h);
        t.add_str("bc", &RunConfig::bc);
        t.add("a", &RunConfig::a);
        t.add("b", &RunConfig::b);
        t.add("c", &RunConfig::c);
        t.add("epsilon", &RunConfig::epsilon);
        t.add("nu", &RunConfig::nu);
        t.add("gamma", &RunConfig::gamma);
        t.add("dt", &RunConfig::dt);
        t.add("t_end", &RunConfig::t_end);
        t.add_str("stretching", &RunConfig::stretching);
        t.add_str("bulk", &RunConfig::bulk);
        t.add_str("splitting", &RunConfig::splitting);
        t.add("projection_tol", &RunConfig::projection_tol);
        t.add_bool("project_q", &RunConfig::project_q);
        t.add_str("q_init", &RunConfig::q_init);
        t.add("q_amplitude", &RunConfig::q_amplitude);
        t.add("q_uniaxial_s", &RunConfig::q_uniaxial_s);
        t.add_str("q_uniaxial_axis", &RunConfig::q_uniaxial_axis);
        t.add("seed", &RunConfig::seed);
        t.add("snapshots", &RunConfig::snapshots);
        t.add_str("out", &RunConfig::out);
        t.add("threshold_u_norm", &RunConfig::threshold_u_norm);
        t.add("threshold_residual", &RunConfig::threshold_residual);
        t.add("threshold_cauchy", &RunConfig::threshold_cauchy);
        t.add("threshold_energy_gap_rel", &RunConfig::threshold_energy_gap_rel);
        return t;
    }();
    return table;
}

void validate(const RunConfig& cfg) {
    if (cfg.bc != "box" && cfg.bc != "periodic")
        throw ConfigError("config: bc must be box or periodic");
    if (cfg.stretching != "full" && cfg.stretching != "antisym")
        throw ConfigError("config: stretching must be full or antisym");
    if (cfg.bulk != "f" && cfg.bulk != "f_pz")
        throw ConfigError("config: bulk must be f or f_pz");
    if (cfg.splitting != "semi_implicit" && cfg.splitting != "convex_split")
        throw ConfigError("config: splitting must be semi_implicit or convex_split");
    if (cfg.q_init != "random" && cfg.q_init != "zero" && cfg.q_init != "uniaxial")
        throw ConfigError("config: q_init must be random, zero or uniaxial");
    if (cfg.q_uniaxial_axis != "x" && cfg.q_uniaxial_axis != "y" &&
        cfg.q_uniaxial_axis != "z")
        throw ConfigError("config: q_uniaxial_axis must be x, y or z");
    if (!(cfg.dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (cfg.t_end < 0.0) throw ConfigError("config: t_end must be nonnegative");
    if (cfg.snapshots < 1) throw ConfigError("config: snapshots must be >= 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    const KeyTable& table = key_table();
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto it = table.set.find(key);
        if (it == table.set.end())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        it->second(cfg, val);
    }
    validate(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

Grid config_grid(const RunConfig& cfg) {
    const int dim = cfg.nz > 0 ? 3 : 2;
    return Grid::make(dim, {cfg.nx, cfg.ny, cfg.nz > 0 ? cfg.nz : 1}, cfg.h,
                      cfg.bc == "periodic" ? Domain::periodic : Domain::box);
}

PotentialParams config_params(const RunConfig& cfg) {
    return make_params(cfg.a, cfg.b, cfg.c, cfg.epsilon, cfg.nu, cfg.gamma);
}

StepperConfig config_stepper(const RunConfig& cfg) {
    StepperConfig sc;
    sc.dt = cfg.dt;
    sc.params = config_params(cfg);
    sc.stretching =
        cfg.stretching == "antisym" ? StretchVariant::antisym : StretchVariant::full;
    sc.bulk = cfg.bulk == "f_pz" ? BulkVariant::f_pz : BulkVariant::f;
    sc.splitting = cfg.splitting == "convex_split" ? Splitting::convex_split
                                                   : Splitting::semi_implicit;
    sc.projection_tol = cfg.projection_tol;
    sc.project_q = cfg.project_q;
    return sc;
}

Thresholds config_thresholds(const RunConfig& cfg) {
    Thresholds t;
    t.u_norm = cfg.threshold_u_norm;
    t.critical_residual = cfg.threshold_residual;
    t.cauchy = cfg.threshold_cauchy;
    t.energy_gap_rel = cfg.threshold_energy_gap_rel;
    return t;
}

SimState config_initial_state(const RunConfig& cfg) {
    Grid g = config_grid(cfg);
    SimState s = SimState::zeros(g);
    if (cfg.q_init == "zero") return s;
    if (cfg.q_init == "uniaxial") {
        Vec3 n{0.0, 0.0, 0.0};
        n[cfg.q_uniaxial_axis == "x" ? 0 : cfg.q_uniaxial_axis == "y" ? 1 : 2] = 1.0;
        const Mat3 q0 = uniaxial(cfg.q_uniaxial_s, n);
        for (long c = 0; c < g.cells(); ++c) s.q.set(c, q0);
        return s;
    }
    SplitMix64 rng(cfg.seed);
    double maxn = 0.0;
    for (long c = 0; c < g.cells(); ++c) {
        Mat3 m;
        for (int e = 0; e < 9; ++e) m.m[static_cast<size_t>(e)] = rng.uniform() - 0.5;
        m = sym_part(m);
        const double tr = trace(m) / 3.0;
        m(0, 0) -= tr;
        m(1, 1) -= tr;
        m(2, 2) -= tr;
        s.q.set(c, m);
        maxn = std::max(maxn, fnorm(m));
    }
    if (maxn > 0.0) {
        const double scale = cfg.q_amplitude / maxn;
        for (double& v : s.q.v) v *= scale;
    }
    return s;
}

}  // namespace qtf
