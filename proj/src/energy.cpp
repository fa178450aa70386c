#include "qtf/energy.hpp"

#include <stdexcept>

#include "qtf/operators.hpp"
#include "qtf/parallel.hpp"

namespace qtf {

namespace {
inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }
}

double elastic_energy(const TensorField& q, double epsilon) {
    const Grid& g = q.g;
    // Each face contribution is attributed to its right cell, then the
    // per-cell partials are tree-summed (deterministic, low roundoff).
    std::vector<double> percell(static_cast<size_t>(g.cells()), 0.0);
    for (int a = 0; a < g.dim; ++a) {
        const double invh = 1.0 / g.h[static_cast<size_t>(a)];
        const int n = g.n[static_cast<size_t>(a)];
        const int f_lo = g.periodic() ? 0 : 1;  // Neumann wall faces contribute zero
        int cmax[3] = {g.n[0], g.n[1], g.n[2]};
        cmax[a] = 1;
        for (int i = 0; i < cmax[0]; ++i)
            for (int j = 0; j < cmax[1]; ++j)
                for (int k = 0; k < cmax[2]; ++k)
                    for (int f = f_lo; f <= n - 1; ++f) {
                        int cr[3] = {i, j, k};
                        cr[a] = f;
                        int cl[3] = {cr[0], cr[1], cr[2]};
                        cl[a] = g.periodic() ? wrap(f - 1, n) : f - 1;
                        const long right = g.cell_index(cr[0], cr[1], cr[2]);
                        const double* qr = &q.v[static_cast<size_t>(right) * 9];
                        const double* ql = &q.v[static_cast<size_t>(g.cell_index(cl[0], cl[1], cl[2])) * 9];
                        double s = 0.0;
                        for (int m = 0; m < 9; ++m) {
                            const double d = (qr[m] - ql[m]) * invh;
                            s += d * d;
                        }
                        percell[static_cast<size_t>(right)] += s;
                    }
    }
    const double sum = tree_sum(g.cells(), [&](long c) { return percell[static_cast<size_t>(c)]; });
    return 0.5 * epsilon * sum * g.cell_volume();
}

EnergyBreakdown total_energy(const VectorField* u, const TensorField& q,
                             const PotentialParams& p) {
    if (u) require_same_grid(u->g, q.g, "total_energy");
    EnergyBreakdown e;
    if (u) e.kinetic = 0.5 * dot(*u, *u);
    e.elastic = elastic_energy(q, p.epsilon);
    const long cells = q.g.cells();
    e.bulk = q.g.cell_volume() *
             tree_sum(cells, [&](long c) { return potential_F(q.at(c), p) + p.mu; });
    e.total = e.kinetic + e.elastic + e.bulk;
    return e;
}

TensorField molecular_field(const TensorField& q, const PotentialParams& p,
                            BulkVariant bulk) {
    if (q.bc == Bc::noslip) throw std::invalid_argument("molecular_field: bad bc");
    if (bulk == BulkVariant::f_pz && max_asymmetry(q) > 1e-10 * (1.0 + max_fnorm(q)))
        throw std::invalid_argument("molecular_field: f_pz requires symmetric Q");
    TensorField h(q.g, q.bc);
    apply_laplacian_cells(q.g, q.bc, q.v.data(), h.v.data(), 9);
    const long cells = q.g.cells();
    parallel_for(cells, [&](long c) {
        Mat3 v = bulk_force(q.at(c), p, bulk) - p.epsilon * h.at(c);
        h.set(c, v);
    });
    return h;
}

double dissipation(const VectorField* u, const TensorField& h,
                   const PotentialParams& p) {
    double d = p.gamma * dot(h, h);
    if (u) d += p.nu * velocity_grad_sq(*u);
    return d;
}

}  // namespace qtf
