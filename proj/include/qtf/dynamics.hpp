#ifndef QTF_DYNAMICS_HPP
#define QTF_DYNAMICS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qtf/energy.hpp"
#include "qtf/grid.hpp"
#include "qtf/qtensor.hpp"

namespace qtf {

enum class Splitting { semi_implicit, convex_split };

struct StepperConfig {
    double dt = 1e-3;
    PotentialParams params;
    StretchVariant stretching = StretchVariant::full;
    BulkVariant bulk = BulkVariant::f;
    Splitting splitting = Splitting::semi_implicit;
    double projection_tol = 1e-10;
    bool project_q = false;       // optional per-step symmetric-traceless projection
    double lambda_stab = -1.0;    // convex_split shift; < 0 derives it from the state
    double solver_tol = 1e-12;    // relative CG tolerance for Q and viscous solves
};

struct SimState {
    VectorField u;
    ScalarField p;
    TensorField q;
    double t = 0.0;
    long step = 0;

    static SimState zeros(const Grid& g) {
        SimState s;
        s.u = VectorField(g);
        s.p = ScalarField(g);
        s.q = TensorField(g);
        return s;
    }
};

struct LedgerRow {
    double t = 0.0;
    double kinetic = 0.0, elastic = 0.0, bulk = 0.0, total = 0.0;
    double dissipation = 0.0;
    double law_residual = 0.0;  // (E^{n+1}-E^n)/dt + D^{n+1}
    bool monotone = true;
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;
};

struct RunHooks {
    long snapshot_every = 0;  // in steps; 0 disables cadence snapshots
    std::function<void(const SimState&)> on_snapshot;
};

struct RunResult {
    SimState state;
    EnergyLedger ledger;
    bool aborted_instability = false;
    std::string diagnostic;
};

// Face force with <u, F> = <H, advect(u,Q)> - <H, S(grad u, Q)> exactly
// for every admissible u: the distortion stress in rewritten form (its
// gradient part absorbed into the pressure) plus the adjoint of the
// stretching coupling. This discrete adjoint pairing is what cancels
// the coupling work terms in the energy ledger.
VectorField elastic_force(const TensorField& h, const TensorField& q,
                          StretchVariant variant);

// Advances Q one step with transport and stretching explicit (using the
// velocity held by the state), the Laplacian implicit, and the bulk
// force explicit (semi_implicit) or shifted by the convex-splitting
// stabilization (convex_split). One jointly-preconditioned CG solve.
TensorField step_q(const SimState& s, const StepperConfig& cfg);

// Chorin projection step: explicit skew-form convection, implicit
// viscosity, elastic force; the pressure solve reuses the previous
// pressure as the initial guess. Postcondition: the discrete divergence
// shrinks below projection_tol relative to the provisional divergence.
std::pair<VectorField, ScalarField> step_flow(const SimState& s,
                                              const VectorField& force,
                                              const StepperConfig& cfg);

// One coupled Gauss-Seidel step (flow with Q^n, then Q with u^{n+1});
// appends one ledger row when a ledger is given. prev is the energy of
// the incoming state (computed when null).
SimState coupled_step(const SimState& s, const StepperConfig& cfg,
                      const EnergyBreakdown* prev = nullptr,
                      LedgerRow* row = nullptr, bool flow_enabled = true);

// ceil((t_end - t0)/dt) steps, the last one shortened to land on t_end.
// Aborts with a dt-too-large diagnostic if the total energy grows by
// more than 1% over 10 consecutive steps or turns non-finite.
RunResult run(SimState initial, const StepperConfig& cfg, double t_end,
              const RunHooks& hooks = {}, bool flow_enabled = true);

// Projects u onto the discretely divergence-free subspace.
void project_velocity(VectorField& u, ScalarField& p_work, double tol);

long planned_steps(double t0, double t_end, double dt);

}  // namespace qtf

#endif
