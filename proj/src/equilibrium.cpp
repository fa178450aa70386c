#include "qtf/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtf/energy.hpp"
#include "qtf/solvers.hpp"

namespace qtf {

double critical_point_residual(const TensorField& q, const PotentialParams& p,
                               BulkVariant bulk) {
    return norm_l2(molecular_field(q, p, bulk));
}

namespace {

double increment_norm(const TensorField& a, const TensorField& b, IncrementNorm mode) {
    require_same_grid(a.g, b.g, "cauchy_certificate");
    TensorField d(a.g, a.bc);
    for (size_t i = 0; i < d.v.size(); ++i) d.v[i] = b.v[i] - a.v[i];
    if (mode == IncrementNorm::l2) return norm_l2(d);
    // (I - Lap)^{-1} Helmholtz realizes an H^{-1}-equivalent norm without
    // the zero-mean restriction of the pure inverse Laplacian.
    TensorField psi(a.g, a.bc);
    SolveStats st = cg_cells(a.g, a.bc, 1.0, 1.0, d.v, psi.v, 9, 1e-12, 0, false);
    if (!st.converged)
        throw std::runtime_error("cauchy_certificate: Helmholtz solve failed");
    return std::sqrt(std::max(0.0, dot(d, psi)));
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    if (sxx == 0.0 || syy == 0.0) {
        f.r2 = syy == 0.0 ? 1.0 : 0.0;  // constant data fits exactly
        f.intercept = my;
        return f;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace

double cauchy_certificate(const std::vector<Snapshot>& snaps, IncrementNorm mode) {
    if (snaps.size() < 2)
        throw std::invalid_argument("cauchy_certificate: need at least 2 snapshots");
    double sup = 0.0;
    for (size_t i = 0; i + 1 < snaps.size(); ++i)
        sup = std::max(sup, increment_norm(snaps[i].q, snaps[i + 1].q, mode));
    return sup;
}

double fit_e_infinity(const EnergyLedger& ledger) {
    if (ledger.rows.empty())
        throw std::invalid_argument("fit_e_infinity: empty ledger");
    const size_t n = ledger.rows.size();
    const size_t tail = std::max<size_t>(1, n / 10);
    std::vector<double> vals;
    vals.reserve(tail);
    for (size_t i = n - tail; i < n; ++i) vals.push_back(ledger.rows[i].total);
    std::sort(vals.begin(), vals.end());
    const size_t m = vals.size();
    return m % 2 == 1 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

DecayFit lojasiewicz_fit(const EnergyLedger& ledger, double e_infinity) {
    DecayFit fit;
    const double floor = 1e-14 * (1.0 + std::fabs(e_infinity));
    std::vector<double> t, logx;
    for (const LedgerRow& r : ledger.rows) {
        const double x = r.total - e_infinity;
        if (x > floor) {
            t.push_back(r.t);
            logx.push_back(std::log(x));
        }
    }
    if (t.size() < 8) {
        fit.error = "window touches e_infinity (too few rows strictly above the limit)";
        return fit;
    }

    LineFit expo = least_squares(t, logx);
    if (expo.r2 >= 0.99) {
        fit.valid = true;
        fit.exponential = true;
        fit.theta = 0.5;
        fit.r2 = expo.r2;
        return fit;
    }
    // power law (E - E_inf) ~ (1 + t - t0)^(-beta); decay-time origin at
    // the window start
    const double t0 = t.front();
    std::vector<double> logt(t.size());
    for (size_t i = 0; i < t.size(); ++i) logt[i] = std::log(1.0 + t[i] - t0);
    LineFit pow = least_squares(logt, logx);
    fit.beta = -pow.slope;
    fit.r2 = pow.r2;
    if (fit.beta <= 0.0) {
        fit.error = "no decay detected (nonnegative power-law slope)";
        return fit;
    }
    fit.valid = true;
    fit.theta = fit.beta / (1.0 + 2.0 * fit.beta);
    return fit;
}

EquilibriumReport omega_limit_check(const EnergyLedger& ledger,
                                    const std::vector<Snapshot>& snaps,
                                    double u_norm_final,
                                    const PotentialParams& p, BulkVariant bulk,
                                    const Thresholds& thr) {
    if (ledger.rows.empty())
        throw std::invalid_argument("omega_limit_check: empty ledger");
    const double t_first = ledger.rows.front().t;
    const double t_last = ledger.rows.back().t;
    const double tail_start = t_last - (t_last - t_first) / 10.0;
    std::vector<Snapshot> tail;
    for (const Snapshot& s : snaps)
        if (s.t >= tail_start - 1e-12) tail.push_back(s);
    if (tail.size() < 3)
        throw std::invalid_argument(
            "omega_limit_check: need >= 3 snapshots in the final decade");

    EquilibriumReport rep;
    rep.thresholds = thr;
    rep.e_infinity = fit_e_infinity(ledger);
    rep.u_norm_final = u_norm_final;
    rep.critical_residual = critical_point_residual(tail.back().q, p, bulk);
    rep.cauchy_sup = cauchy_certificate(tail, IncrementNorm::l2);
    const double e_mu = total_energy(nullptr, tail.back().q, p).total;
    rep.energy_gap = std::fabs(e_mu - rep.e_infinity);
    rep.fit = lojasiewicz_fit(ledger, rep.e_infinity);

    rep.u_ok = rep.u_norm_final <= thr.u_norm;
    rep.residual_ok = rep.critical_residual <= thr.critical_residual;
    rep.cauchy_ok = rep.cauchy_sup <= thr.cauchy;
    rep.gap_ok = rep.energy_gap <= thr.energy_gap_rel * (1.0 + std::fabs(rep.e_infinity));
    rep.converged = rep.u_ok && rep.residual_ok && rep.cauchy_ok && rep.gap_ok;
    return rep;
}

}  // namespace qtf
