#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "helpers.hpp"
#include "qtf/config.hpp"
#include "qtf/io.hpp"

using namespace qtf;
namespace fs = std::filesystem;

namespace {
fs::path tmpdir() {
    fs::path p = fs::temp_directory_path() / "qtf_io_test";
    fs::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("splitmix64 reference vectors") {
    // frozen from the published test vectors of the algorithm
    SplitMix64 a(0);
    CHECK(a.next() == 0xE220A8397B1DCDAFULL);
    CHECK(a.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(a.next() == 0x06C45D188009454FULL);
    SplitMix64 b(1234567);
    CHECK(b.next() == 0x599ED017FB08FC85ULL);
    CHECK(b.next() == 0x2C73F08458540FA5ULL);
    SplitMix64 c(42);
    CHECK(c.uniform() == doctest::Approx(0.7415648787718233).epsilon(1e-15));
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("config parsing: defaults, comments, errors") {
    RunConfig d = parse_config_text("");
    CHECK(d.nx == 32);
    CHECK(d.dt == doctest::Approx(1e-3));
    CHECK(d.bc == "box");

    RunConfig c = parse_config_text(
        "# smoke\n"
        "nx = 48\nny= 40\n  h =0.02  # spacing\n"
        "a = -1.25\nsplitting = convex_split\nseed = 99\n"
        "project_q = true\n");
    CHECK(c.nx == 48);
    CHECK(c.ny == 40);
    CHECK(c.h == doctest::Approx(0.02));
    CHECK(c.a == doctest::Approx(-1.25));
    CHECK(c.splitting == "convex_split");
    CHECK(c.seed == 99);
    CHECK(c.project_q);

    CHECK_THROWS_AS(parse_config_text("unknown_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nx 32\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("nx = twelve\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("bc = sphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dt = -0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("project_q = maybe\n"), ConfigError);
}

TEST_CASE("initial state: pinned generator, symmetric traceless, scaled") {
    RunConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.h = 0.0625;
    cfg.seed = 7;
    cfg.q_amplitude = 0.8;
    SimState s = config_initial_state(cfg);
    CHECK(norm_l2(s.u) == 0.0);
    CHECK(max_abs_trace(s.q) <= 1e-14);
    CHECK(max_asymmetry(s.q) == 0.0);
    CHECK(max_fnorm(s.q) == doctest::Approx(0.8).epsilon(1e-12));

    SimState s2 = config_initial_state(cfg);
    CHECK(s.q.v == s2.q.v);  // bitwise reproducible

    cfg.seed = 8;
    SimState s3 = config_initial_state(cfg);
    CHECK(s.q.v != s3.q.v);

    cfg.q_init = "uniaxial";
    cfg.q_uniaxial_s = 1.2;
    cfg.q_uniaxial_axis = "x";
    SimState s4 = config_initial_state(cfg);
    CHECK(fnorm(s4.q.at(0) - uniaxial(1.2, Vec3{1, 0, 0})) < 1e-15);

    cfg.q_init = "zero";
    CHECK(norm_l2(config_initial_state(cfg).q) == 0.0);
}

TEST_CASE("snapshot round trip is bit exact") {
    Grid g = Grid::make(2, {8, 6, 1}, 0.125, Domain::box);
    SplitMix64 rng(3);
    SimState s = SimState::zeros(g);
    s.q = test::random_tensor(g, rng, 1.0, true);
    s.u = test::random_velocity(g, rng, 0.5);
    s.p = test::random_scalar(g, rng);
    s.step = 17;

    const fs::path path = tmpdir() / "snap.qtf";
    write_snapshot(path.string(), s, true);
    SnapshotFile f = read_snapshot(path.string());
    CHECK(f.dim == 2);
    CHECK(f.dims[0] == 8);
    CHECK(f.dims[1] == 6);
    CHECK(f.h == 0.125);
    CHECK(f.fields == std::vector<std::string>{"Q", "u", "p"});
    CHECK(f.blocks.at("Q") == s.q.v);  // bitwise
    CHECK(f.blocks.at("p") == s.p.v);
    CHECK(f.blocks.at("u").size() == static_cast<size_t>(2 * g.cells()));

    TensorField q = snapshot_q(f, Domain::box);
    CHECK(q.v == s.q.v);
    CHECK(q.g == g);

    // Q-only snapshot (relaxation artifact)
    write_snapshot(path.string(), s, false);
    SnapshotFile f2 = read_snapshot(path.string());
    CHECK(f2.fields == std::vector<std::string>{"Q"});

    CHECK_THROWS(read_snapshot((tmpdir() / "missing.qtf").string()));
}

TEST_CASE("ledger csv round trip") {
    EnergyLedger ledger;
    SplitMix64 rng(4);
    for (int k = 1; k <= 25; ++k) {
        LedgerRow r;
        r.t = k * 1e-3;
        r.kinetic = rng.uniform();
        r.elastic = rng.uniform();
        r.bulk = rng.uniform();
        r.total = r.kinetic + r.elastic + r.bulk;
        r.dissipation = rng.uniform();
        r.law_residual = rng.uniform(-1, 1) * 1e-7;
        r.monotone = (k % 3) != 0;
        ledger.rows.push_back(r);
    }
    const fs::path path = tmpdir() / "energy.csv";
    write_ledger_csv(path.string(), ledger);
    EnergyLedger back = read_ledger_csv(path.string());
    REQUIRE(back.rows.size() == ledger.rows.size());
    for (size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].t == ledger.rows[i].t);  // %.17g round-trips exactly
        CHECK(back.rows[i].total == ledger.rows[i].total);
        CHECK(back.rows[i].law_residual == ledger.rows[i].law_residual);
        CHECK(back.rows[i].monotone == ledger.rows[i].monotone);
    }
}

TEST_CASE("snapshot manifest round trip") {
    std::vector<SnapshotManifestRow> rows{
        {10, 0.01, "snap_00000010.qtf"}, {20, 0.02, "snap_00000020.qtf"}};
    const fs::path path = tmpdir() / "snapshots.csv";
    write_snapshot_manifest(path.string(), rows);
    auto back = read_snapshot_manifest(path.string());
    REQUIRE(back.size() == 2);
    CHECK(back[1].step == 20);
    CHECK(back[1].t == 0.02);
    CHECK(back[1].file == "snap_00000020.qtf");
}

TEST_CASE("cell csv export layout") {
    Grid g = Grid::make(2, {4, 5, 1}, 0.25, Domain::box);
    ScalarField f(g);
    for (long c = 0; c < g.cells(); ++c) f.at(c) = static_cast<double>(c);
    const fs::path path = tmpdir() / "field.csv";
    write_csv(path.string(), f, "p");

    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "i,j,x,y,p");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == g.cells());

    TensorField q(g);
    write_csv((tmpdir() / "q.csv").string(), q, "Q");
    std::ifstream qs(tmpdir() / "q.csv");
    std::getline(qs, line);
    CHECK(line == "i,j,x,y,Q00,Q01,Q02,Q10,Q11,Q12,Q20,Q21,Q22");
}
