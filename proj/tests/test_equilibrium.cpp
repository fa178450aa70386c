#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qtf/config.hpp"
#include "qtf/equilibrium.hpp"
#include "qtf/operators.hpp"

using namespace qtf;

namespace {

// 1D Newton for the nontrivial root of a s + (2c/3) s^3 = 0 shifted to
// the positive branch: s* = sqrt(-3a/(2c)) for a < 0.
double uniaxial_root_newton(double a, double c) {
    double s = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double f = a * s + (2.0 * c / 3.0) * s * s * s;
        const double df = a + 2.0 * c * s * s;
        s -= f / df;
    }
    return s;
}

EnergyLedger synthetic_ledger(double e_inf, const std::function<double(double)>& excess,
                              double t_end = 20.0, double dt = 0.01) {
    EnergyLedger ledger;
    for (double t = dt; t <= t_end + 1e-12; t += dt) {
        LedgerRow r;
        r.t = t;
        r.total = e_inf + excess(t);
        ledger.rows.push_back(r);
    }
    return ledger;
}

}  // namespace

TEST_CASE("critical point residual: zero field and constant roots") {
    Grid g = Grid::make(2, {12, 12, 1}, 1.0 / 12, Domain::box);
    PotentialParams p = make_params(-1.0, 0.0, 1.0, 0.1, 1, 1);
    TensorField q(g);
    CHECK(critical_point_residual(q, p) == 0.0);

    const double s_star = uniaxial_root_newton(p.a, p.c);
    CHECK(s_star == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    const Mat3 q0 = uniaxial(s_star, Vec3{0, 0, 1});
    for (long c = 0; c < g.cells(); ++c) q.set(c, q0);
    CHECK(critical_point_residual(q, p) <= 1e-12);

    // non-critical constant has a strictly positive residual
    for (long c = 0; c < g.cells(); ++c) q.set(c, uniaxial(0.5, Vec3{0, 0, 1}));
    CHECK(critical_point_residual(q, p) > 1e-3);
}

TEST_CASE("cauchy certificate") {
    Grid g = Grid::make(2, {8, 8, 1}, 0.125, Domain::box);
    SplitMix64 rng(31);
    TensorField qa = test::random_tensor(g, rng, 1.0, true);
    TensorField qb = test::random_tensor(g, rng, 1.0, true);

    std::vector<Snapshot> same{{0.0, qa}, {1.0, qa}, {2.0, qa}};
    CHECK(cauchy_certificate(same) == 0.0);

    std::vector<Snapshot> alt{{0.0, qa}, {1.0, qb}, {2.0, qa}, {3.0, qb}};
    TensorField d = qa;
    for (size_t i = 0; i < d.v.size(); ++i) d.v[i] -= qb.v[i];
    CHECK(cauchy_certificate(alt) == doctest::Approx(norm_l2(d)));
    CHECK(cauchy_certificate(alt) > 0.1);

    CHECK_THROWS_AS(cauchy_certificate({{0.0, qa}}), std::invalid_argument);

    // The Helmholtz-weighted increment never exceeds the plain one.
    CHECK(cauchy_certificate(alt, IncrementNorm::hminus1) <= cauchy_certificate(alt));
}

TEST_CASE("fit_e_infinity uses the tail median") {
    EnergyLedger ledger = synthetic_ledger(3.0, [](double t) { return std::exp(-t); });
    const double e = fit_e_infinity(ledger);
    CHECK(e == doctest::Approx(3.0).epsilon(1e-6));
    double lo = 1e300, hi = -1e300;
    const size_t tail = ledger.rows.size() / 10;
    for (size_t i = ledger.rows.size() - tail; i < ledger.rows.size(); ++i) {
        lo = std::min(lo, ledger.rows[i].total);
        hi = std::max(hi, ledger.rows[i].total);
    }
    CHECK(e >= lo);
    CHECK(e <= hi);
}

TEST_CASE("lojasiewicz fit classifies synthetic decays") {
    // exponential: log-excess affine in t
    EnergyLedger expo = synthetic_ledger(1.0, [](double t) { return std::exp(-t); });
    DecayFit f1 = lojasiewicz_fit(expo, 1.0);
    CHECK(f1.valid);
    CHECK(f1.exponential);
    CHECK(f1.theta == 0.5);
    CHECK(f1.r2 >= 0.999);

    // power law (1+t)^-1: beta = 1, theta = 1/3
    EnergyLedger pow = synthetic_ledger(2.0, [](double t) { return 1.0 / (1.0 + t); });
    DecayFit f2 = lojasiewicz_fit(pow, 2.0);
    CHECK(f2.valid);
    CHECK(!f2.exponential);
    CHECK(f2.theta == doctest::Approx(1.0 / 3.0).epsilon(0.05));

    // constant ledger: the window touches e_infinity
    EnergyLedger flat = synthetic_ledger(5.0, [](double) { return 0.0; });
    DecayFit f3 = lojasiewicz_fit(flat, 5.0);
    CHECK(!f3.valid);
    CHECK(!f3.error.empty());
}

TEST_CASE("omega limit check on a relaxation run") {
    // a > 0, b = 0: unique global minimizer Q = 0, E_inf = mu |Omega| = 0
    RunConfig cfg;
    cfg.nx = cfg.ny = 12;
    cfg.h = 1.0 / 12;
    cfg.a = 1.0;
    cfg.b = 0.0;
    cfg.c = 1.0;
    cfg.dt = 0.01;
    cfg.seed = 2;
    SimState s0 = config_initial_state(cfg);
    StepperConfig sc = config_stepper(cfg);

    std::vector<Snapshot> snaps;
    RunHooks hooks;
    hooks.snapshot_every = 100;
    hooks.on_snapshot = [&](const SimState& st) { snaps.push_back({st.t, st.q}); };
    RunResult r = run(std::move(s0), sc, 25.0, hooks, false);
    CHECK(!r.aborted_instability);
    CHECK(r.ledger.rows.back().dissipation <= 1e-12);

    EquilibriumReport rep =
        omega_limit_check(r.ledger, snaps, norm_l2(r.state.u), sc.params, sc.bulk);
    CHECK(rep.converged);
    CHECK(rep.u_ok);
    CHECK(rep.residual_ok);
    CHECK(rep.cauchy_ok);
    CHECK(rep.gap_ok);
    CHECK(rep.e_infinity == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(norm_l2(r.state.q) <= 1e-6);

    // a too-short run reports the failing criteria instead
    SimState s1 = config_initial_state(cfg);
    std::vector<Snapshot> snaps2;
    RunHooks hooks2;
    hooks2.snapshot_every = 2;
    hooks2.on_snapshot = [&](const SimState& st) { snaps2.push_back({st.t, st.q}); };
    RunResult r2 = run(std::move(s1), sc, 0.6, hooks2, false);
    EquilibriumReport rep2 =
        omega_limit_check(r2.ledger, snaps2, norm_l2(r2.state.u), sc.params, sc.bulk);
    CHECK(!rep2.converged);
    CHECK(!rep2.residual_ok);

    // insufficient tail snapshots
    CHECK_THROWS_AS(omega_limit_check(r.ledger, {snaps.front(), snaps.back()}, 0.0,
                                      sc.params, sc.bulk),
                    std::invalid_argument);
}

TEST_CASE("dissipation floor bounds the final velocity norm (Poincare)") {
    // nu ||grad u||^2 <= D and ||u|| <= (L/pi) ||grad u|| for no-slip
    // boxes, so the u threshold is consistent with the dissipation floor.
    RunConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.h = 0.0625;
    cfg.dt = 2e-3;
    cfg.seed = 12;
    cfg.splitting = "convex_split";
    SimState s0 = config_initial_state(cfg);
    StepperConfig sc = config_stepper(cfg);
    RunResult r = run(std::move(s0), sc, 3.0);
    REQUIRE(!r.aborted_instability);
    const double d_floor = r.ledger.rows.back().dissipation;
    const double L = cfg.nx * cfg.h;
    const double bound = std::sqrt(d_floor / sc.params.nu) * (L / M_PI);
    CHECK(norm_l2(r.state.u) <= bound * (1.0 + 1e-9) + 1e-30);
}

TEST_CASE("constant-in-time input gives a zero cauchy certificate") {
    Grid g = Grid::make(2, {8, 8, 1}, 0.125, Domain::box);
    PotentialParams p = make_params(-1, 0, 1, 0.1, 1, 1);
    TensorField q(g);
    for (long c = 0; c < g.cells(); ++c)
        q.set(c, uniaxial(std::sqrt(1.5), Vec3{0, 0, 1}));
    EnergyLedger ledger;
    for (int k = 1; k <= 100; ++k) {
        LedgerRow r;
        r.t = 0.01 * k;
        r.total = total_energy(nullptr, q, p).total;
        ledger.rows.push_back(r);
    }
    std::vector<Snapshot> snaps;
    for (double t : {0.92, 0.95, 0.98, 1.0}) snaps.push_back({t, q});
    EquilibriumReport rep = omega_limit_check(ledger, snaps, 0.0, p, BulkVariant::f);
    CHECK(rep.cauchy_sup == 0.0);
    CHECK(rep.converged);
    CHECK(!rep.fit.valid);  // flat history: nothing strictly above E_inf
}
