#include "qtf/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "qtf/operators.hpp"
#include "qtf/parallel.hpp"
#include "qtf/solvers.hpp"

namespace qtf {

namespace {

// Lipschitz-type bound for the bulk force on |Q| <= R, covering both
// variants; the convex-split shift must dominate it on the range the
// trajectory can visit.
double bulk_lipschitz(const PotentialParams& p, double r) {
    return std::fabs(p.a) + 4.0 * std::fabs(p.b) * r + 3.0 * p.c * r * r;
}

double stabilization_lambda(const SimState& s, const StepperConfig& cfg,
                            const EnergyBreakdown& prev) {
    if (cfg.lambda_stab >= 0.0) return cfg.lambda_stab;
    // A-priori radius: F_mu >= (c/8)|Q|^4 pointwise bounds |Q| through the
    // (nonincreasing) total energy.
    const double apriori =
        std::pow(8.0 * std::max(prev.total, 0.0) /
                     (cfg.params.c * s.q.g.cell_volume()),
                 0.25);
    const double r = std::max(max_fnorm(s.q), apriori);
    return bulk_lipschitz(cfg.params, r);
}

Mat3 project_sym_traceless(const Mat3& q) {
    Mat3 s = sym_part(q);
    const double t = trace(s) / 3.0;
    s(0, 0) -= t;
    s(1, 1) -= t;
    s(2, 2) -= t;
    return s;
}

}  // namespace

VectorField elastic_force(const TensorField& h, const TensorField& q,
                          StretchVariant variant) {
    VectorField f = advect_adjoint_force(h, q);
    // sigma adjoint to the chosen stretching: S_full pairs with HQ - QH,
    // S_antisym with the antisymmetric part of HQ^t - Q^tH.
    TensorField sig(q.g, q.bc);
    const long cells = q.g.cells();
    parallel_for(cells, [&](long c) {
        const Mat3 hc = h.at(c);
        const Mat3 qc = q.at(c);
        Mat3 s;
        if (variant == StretchVariant::full) {
            s = sigma_stress(hc, qc);
        } else {
            const Mat3 qt = transpose(qc);
            s = antisym_part(matmul(hc, qt) - matmul(qt, hc));
        }
        sig.set(c, s);
    });
    VectorField fs = velocity_gradient_adjoint(q.g, sig);
    for (int a = 0; a < q.g.dim; ++a)
        for (long i = 0; i < f.faces(a); ++i) f.fat(a, i) -= fs.fat(a, i);
    return f;
}

TensorField step_q(const SimState& s, const StepperConfig& cfg) {
    const Grid& g = s.q.g;
    const PotentialParams& p = cfg.params;
    const double dt = cfg.dt;

    double lambda = 0.0;
    if (cfg.splitting == Splitting::convex_split) {
        EnergyBreakdown e = total_energy(&s.u, s.q, p);
        lambda = stabilization_lambda(s, cfg, e);
    }

    TensorField transport = advect(s.u, s.q);
    TensorField grad_u = velocity_gradient(s.u);

    // ((1 + gamma lambda dt) I - gamma eps dt Lap) Q^{n+1}
    //   = (1 + gamma lambda dt) Q^n - dt (transport - S) - gamma dt f(Q^n)
    const double alpha = 1.0 + p.gamma * lambda * dt;
    const double kappa = p.gamma * p.epsilon * dt;
    std::vector<double> rhs(s.q.v.size());
    const long cells = g.cells();
    if (cfg.bulk == BulkVariant::f_pz &&
        max_asymmetry(s.q) > 1e-10 * (1.0 + max_fnorm(s.q)))
        throw std::invalid_argument("step_q: f_pz requires symmetric Q");
    parallel_for(cells, [&](long c) {
        const Mat3 qc = s.q.at(c);
        Mat3 r = alpha * qc - dt * transport.at(c) +
                 dt * stretching_S(grad_u.at(c), qc, cfg.stretching) -
                 (p.gamma * dt) * bulk_force(qc, p, cfg.bulk);
        for (int m = 0; m < 9; ++m) rhs[static_cast<size_t>(c * 9 + m)] = r.m[static_cast<size_t>(m)];
    });

    TensorField qn1 = s.q;  // warm start
    SolveStats st = cg_cells(g, s.q.bc, alpha, kappa, rhs, qn1.v, 9,
                             cfg.solver_tol, 0, false);
    if (!st.converged)
        throw std::runtime_error("step_q: linear solve did not converge");

    if (cfg.project_q)
        for (long c = 0; c < cells; ++c) qn1.set(c, project_sym_traceless(qn1.at(c)));
    return qn1;
}

std::pair<VectorField, ScalarField> step_flow(const SimState& s,
                                              const VectorField& force,
                                              const StepperConfig& cfg) {
    const Grid& g = s.u.g;
    const double dt = cfg.dt;
    VectorField conv = convection(s.u);

    VectorField rhs(g);
    for (int a = 0; a < g.dim; ++a)
        for (long i = 0; i < rhs.faces(a); ++i)
            rhs.fat(a, i) = s.u.fat(a, i) + dt * (force.fat(a, i) - conv.fat(a, i));
    // pinned wall rows keep rhs = 0
    if (!g.periodic())
        for (int a = 0; a < g.dim; ++a) {
            const auto& e = s.u.ext[static_cast<size_t>(a)];
            for (int i = 0; i < e[0]; ++i)
                for (int j = 0; j < e[1]; ++j)
                    for (int k = 0; k < e[2]; ++k) {
                        const int own = a == 0 ? i : a == 1 ? j : k;
                        if (own == 0 || own == g.n[static_cast<size_t>(a)])
                            rhs.fat(a, rhs.findex(a, i, j, k)) = 0.0;
                    }
        }

    VectorField ustar = s.u;  // warm start
    SolveStats st = solve_velocity_helmholtz(1.0, cfg.params.nu * dt, rhs, ustar,
                                             cfg.solver_tol, 0);
    if (!st.converged)
        throw std::runtime_error("step_flow: viscous solve did not converge");

    ScalarField div = divergence(ustar);
    const double div_before = norm_l2(div);
    // With no-slip walls the provisional divergence integrates to zero
    // exactly by telescoping; a mean beyond the rounding of the flux
    // sums (which scales with |u|/h) flags a bug.
    const double mean = field_mean(div);
    if (std::fabs(mean) * std::sqrt(g.volume()) >
        1e-8 * div_before + 1e-12 * (1.0 + norm_l2(ustar) / g.h[0]))
        throw std::runtime_error(
            "step_flow: provisional divergence is incompatible with the walls");
    ScalarField prhs(g);
    for (size_t i = 0; i < prhs.v.size(); ++i) prhs.v[i] = (div.v[i] - mean) / dt;

    ScalarField pres = s.p;  // warm start
    const double ptol = std::min(1e-12, 1e-2 * cfg.projection_tol);
    SolveStats pst = poisson_solve_into(prhs, pres, ptol, 0);
    if (!pst.converged)
        throw std::runtime_error("step_flow: pressure solve did not converge");

    VectorField gp = gradient_faces(pres);
    VectorField unew = ustar;
    for (int a = 0; a < g.dim; ++a)
        for (long i = 0; i < unew.faces(a); ++i)
            unew.fat(a, i) -= dt * gp.fat(a, i);

    const double div_after = divergence_norm(unew);
    if (div_after > cfg.projection_tol * std::max(1.0, div_before))
        throw std::runtime_error("step_flow: projection failed to reach tolerance");
    return {std::move(unew), std::move(pres)};
}

SimState coupled_step(const SimState& s, const StepperConfig& cfg,
                      const EnergyBreakdown* prev, LedgerRow* row,
                      bool flow_enabled) {
    EnergyBreakdown e0 = prev ? *prev : total_energy(&s.u, s.q, cfg.params);

    SimState next = s;
    if (flow_enabled) {
        TensorField h = molecular_field(s.q, cfg.params, cfg.bulk);
        VectorField f = elastic_force(h, s.q, cfg.stretching);
        auto [u1, p1] = step_flow(s, f, cfg);
        next.u = std::move(u1);
        next.p = std::move(p1);
    }
    next.q = step_q(next, cfg);  // transport with the updated velocity
    next.t = s.t + cfg.dt;
    next.step = s.step + 1;

    if (row) {
        EnergyBreakdown e1 = total_energy(&next.u, next.q, cfg.params);
        TensorField h1 = molecular_field(next.q, cfg.params, cfg.bulk);
        e1.dissipation = dissipation(flow_enabled ? &next.u : nullptr, h1, cfg.params);
        row->t = next.t;
        row->kinetic = e1.kinetic;
        row->elastic = e1.elastic;
        row->bulk = e1.bulk;
        row->total = e1.total;
        row->dissipation = e1.dissipation;
        row->law_residual = (e1.total - e0.total) / cfg.dt + e1.dissipation;
        row->monotone = e1.total <= e0.total;
    }
    return next;
}

void project_velocity(VectorField& u, ScalarField& p_work, double tol) {
    ScalarField div = divergence(u);
    if (norm_l2(div) == 0.0) return;
    const double mean = field_mean(div);
    for (double& v : div.v) v -= mean;
    SolveStats st = poisson_solve_into(div, p_work, std::min(1e-12, tol), 0);
    if (!st.converged) throw std::runtime_error("project_velocity: no convergence");
    VectorField gp = gradient_faces(p_work);
    for (int a = 0; a < u.g.dim; ++a)
        for (long i = 0; i < u.faces(a); ++i) u.fat(a, i) -= gp.fat(a, i);
}

long planned_steps(double t0, double t_end, double dt) {
    if (t_end <= t0) return 0;
    return static_cast<long>(std::ceil((t_end - t0) / dt - 1e-9));
}

RunResult run(SimState initial, const StepperConfig& cfg, double t_end,
              const RunHooks& hooks, bool flow_enabled) {
    RunResult out;
    long steps = planned_steps(initial.t, t_end, cfg.dt);
    if (steps == 0 && t_end > initial.t) steps = 1;

    if (flow_enabled && divergence_norm(initial.u) >
                            cfg.projection_tol * std::max(1.0, norm_l2(initial.u))) {
        ScalarField pw(initial.u.g);
        project_velocity(initial.u, pw, cfg.projection_tol);
    }

    EnergyBreakdown prev = total_energy(&initial.u, initial.q, cfg.params);
    SimState state = std::move(initial);
    const double t0 = state.t;
    out.ledger.rows.reserve(static_cast<size_t>(steps));

    std::vector<double> window;  // recent totals for the instability detector
    window.push_back(prev.total);

    for (long k = 1; k <= steps; ++k) {
        StepperConfig scfg = cfg;
        if (k == steps) {
            const double dt_last = t_end - (t0 + (k - 1) * cfg.dt);
            if (dt_last > 0.0 && dt_last < cfg.dt) scfg.dt = dt_last;
        }
        LedgerRow row;
        state = coupled_step(state, scfg, &prev, &row, flow_enabled);
        if (k == steps) state.t = t_end;
        out.ledger.rows.push_back(row);
        prev.kinetic = row.kinetic;
        prev.elastic = row.elastic;
        prev.bulk = row.bulk;
        prev.total = row.total;

        if (!std::isfinite(row.total)) {
            out.aborted_instability = true;
            out.diagnostic = "non-finite energy at step " + std::to_string(k) +
                             "; dt = " + std::to_string(cfg.dt) + " is too large";
            break;
        }
        if (row.total > 100.0 * (window.back() + 1.0)) {
            out.aborted_instability = true;
            out.diagnostic = "total energy exploded at step " + std::to_string(k) +
                             "; dt = " + std::to_string(cfg.dt) + " is too large";
            break;
        }
        window.push_back(row.total);
        if (window.size() > 11) window.erase(window.begin());
        if (window.size() == 11 &&
            window.back() > 1.01 * window.front() + 1e-12 * (1.0 + window.front())) {
            out.aborted_instability = true;
            out.diagnostic = "total energy grew >1% over 10 steps at step " +
                             std::to_string(k) + "; dt = " + std::to_string(cfg.dt) +
                             " is too large";
            break;
        }

        if (hooks.on_snapshot &&
            ((hooks.snapshot_every > 0 && k % hooks.snapshot_every == 0) || k == steps))
            hooks.on_snapshot(state);
    }
    out.state = std::move(state);
    return out;
}

}  // namespace qtf
