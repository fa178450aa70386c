#ifndef QTF_EQUILIBRIUM_HPP
#define QTF_EQUILIBRIUM_HPP

#include <string>
#include <vector>

#include "qtf/dynamics.hpp"
#include "qtf/grid.hpp"

namespace qtf {

struct Thresholds {
    double u_norm = 1e-8;
    double critical_residual = 1e-6;
    double cauchy = 1e-8;
    double energy_gap_rel = 1e-10;  // |E_mu(Q_final) - E_inf| <= rel (1+|E_inf|)
};

struct Snapshot {
    double t = 0.0;
    TensorField q;
};

enum class IncrementNorm { l2, hminus1 };

struct DecayFit {
    bool valid = false;
    std::string error;        // set when the window touches E_inf
    bool exponential = false; // log-excess affine in t with R^2 >= 0.99
    double theta = 0.0;       // in (0, 1/2]; 1/2 for the exponential class
    double beta = 0.0;        // power-law exponent, theta = beta/(1+2 beta)
    double r2 = 0.0;          // goodness of the selected fit
};

struct EquilibriumReport {
    double e_infinity = 0.0;
    double u_norm_final = 0.0;
    double critical_residual = 0.0;
    double cauchy_sup = 0.0;
    double energy_gap = 0.0;
    DecayFit fit;
    bool u_ok = false, residual_ok = false, cauchy_ok = false, gap_ok = false;
    bool converged = false;
    Thresholds thresholds;
};

// ||-eps Lap Q + f(Q)||_L2 with the solver's own discrete operators;
// zero exactly on the critical set.
double critical_point_residual(const TensorField& q, const PotentialParams& p,
                               BulkVariant bulk = BulkVariant::f);

// Max over consecutive pairs of ||Q(t_{i+1}) - Q(t_i)||; the discrete
// stand-in for the trajectory Cauchy property. hminus1 measures the
// increments in the (I - Lap)^{-1/2} norm instead (one Helmholtz solve
// per pair). Throws for fewer than 2 snapshots.
double cauchy_certificate(const std::vector<Snapshot>& snaps,
                          IncrementNorm mode = IncrementNorm::l2);

// Tail-median estimate of the limit energy.
double fit_e_infinity(const EnergyLedger& ledger);

// Classifies the decay of total - e_infinity: affine log-excess in t
// (R^2 >= 0.99) reports the exponential class, otherwise a power fit
// (E - E_inf) ~ (1 + t - t0)^(-beta) with theta = beta/(1+2 beta).
DecayFit lojasiewicz_fit(const EnergyLedger& ledger, double e_infinity);

// Combines the criteria on the tail (final tenth of the ledger time
// range, needing >= 3 snapshots there). u_norm_final is the L2 norm of
// the final velocity.
EquilibriumReport omega_limit_check(const EnergyLedger& ledger,
                                    const std::vector<Snapshot>& snaps,
                                    double u_norm_final,
                                    const PotentialParams& p, BulkVariant bulk,
                                    const Thresholds& thr = {});

}  // namespace qtf

#endif
