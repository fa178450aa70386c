#include "qtf/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "qtf/parallel.hpp"

namespace qtf {

namespace {

inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

// Ghost-resolved cell neighbor for a +-1 shift. mirrored=true marks a
// Neumann mirror ghost (value equals the boundary cell).
inline long cell_neighbor(const Grid& g, Bc bc, int i, int j, int k, int axis,
                          int dir, bool& mirrored) {
    int c[3] = {i, j, k};
    c[axis] += dir;
    mirrored = false;
    const int n = g.n[static_cast<size_t>(axis)];
    if (c[axis] < 0 || c[axis] >= n) {
        if (bc == Bc::periodic) {
            c[axis] = wrap(c[axis], n);
        } else {
            c[axis] -= dir;
            mirrored = true;
        }
    }
    return g.cell_index(c[0], c[1], c[2]);
}

struct FaceRef {
    long idx = 0;
    double sign = 0.0;  // 0: no dof (hard zero)
    int own = -1;       // resolved own-axis coordinate
};

// Resolve raw face coordinates of component a, applying periodic wrap or
// the odd-mirror tangential ghost (u = 0 on the wall plane).
inline FaceRef face_ref(const VectorField& u, int a, int i, int j, int k) {
    int c[3] = {i, j, k};
    double sign = 1.0;
    const auto& e = u.ext[static_cast<size_t>(a)];
    const bool per = u.g.periodic();
    for (int d = 0; d < u.g.dim; ++d) {
        const int ed = e[static_cast<size_t>(d)];
        if (c[d] >= 0 && c[d] < ed) continue;
        if (per) {
            c[d] = wrap(c[d], ed);
            continue;
        }
        if (d == a) return {};  // beyond the wall face: no dof there
        sign = -sign;
        c[d] = c[d] < 0 ? 0 : ed - 1;
    }
    return {u.findex(a, c[0], c[1], c[2]), sign, c[a]};
}

inline double face_fetch(const VectorField& u, int a, int i, int j, int k) {
    FaceRef r = face_ref(u, a, i, j, k);
    return r.sign == 0.0 ? 0.0 : r.sign * u.fat(a, r.idx);
}

inline bool face_pinned(const VectorField& u, int a, int own) {
    return !u.g.periodic() && (own == 0 || own == u.g.n[static_cast<size_t>(a)]);
}

inline void face_scatter(VectorField& out, int a, int i, int j, int k, double w) {
    FaceRef r = face_ref(out, a, i, j, k);
    if (r.sign == 0.0 || face_pinned(out, a, r.own)) return;
    out.fat(a, r.idx) += r.sign * w;
}

inline void check_cell_bc(const ScalarField& f, const char* who) {
    if (f.bc == Bc::noslip) throw std::invalid_argument(std::string(who) + ": bad bc");
}
inline void check_cell_bc(const TensorField& f, const char* who) {
    if (f.bc == Bc::noslip) throw std::invalid_argument(std::string(who) + ": bad bc");
}

template <class Field>
Field gradient_centered_impl(const Field& f, int axis, int ncomp) {
    check_cell_bc(f, "gradient_centered");
    Field out(f.g, f.bc);
    if (axis >= f.g.dim) return out;  // flat direction of a 2D slab
    const Grid& g = f.g;
    const double inv2h = 0.5 / g.h[static_cast<size_t>(axis)];
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                bool m0, m1;
                const long hi = cell_neighbor(g, f.bc, i, j, k, axis, +1, m0);
                const long lo = cell_neighbor(g, f.bc, i, j, k, axis, -1, m1);
                const long c = g.cell_index(i, j, k);
                for (int q = 0; q < ncomp; ++q)
                    out.v[static_cast<size_t>(c * ncomp + q)] =
                        inv2h * (f.v[static_cast<size_t>(hi * ncomp + q)] -
                                 f.v[static_cast<size_t>(lo * ncomp + q)]);
            }
    return out;
}

}  // namespace

ScalarField gradient_centered(const ScalarField& f, int axis) {
    return gradient_centered_impl(f, axis, 1);
}
TensorField gradient_centered(const TensorField& f, int axis) {
    return gradient_centered_impl(f, axis, 9);
}

VectorField gradient_faces(const ScalarField& f) {
    check_cell_bc(f, "gradient_faces");
    const Grid& g = f.g;
    VectorField out(g);
    for (int a = 0; a < g.dim; ++a) {
        const double invh = 1.0 / g.h[static_cast<size_t>(a)];
        const int n = g.n[static_cast<size_t>(a)];
        const int lo_own = g.periodic() ? 0 : 1;
        const int hi_own = g.periodic() ? n - 1 : n - 1;  // box wall faces stay 0
        int cmax[3] = {g.n[0], g.n[1], g.n[2]};
        cmax[a] = 1;  // own-axis handled by the face loop below
        for (int i = 0; i < cmax[0]; ++i)
            for (int j = 0; j < cmax[1]; ++j)
                for (int k = 0; k < cmax[2]; ++k)
                    for (int f_own = lo_own; f_own <= hi_own; ++f_own) {
                        int cr[3] = {i, j, k};
                        cr[a] = f_own;
                        int cl[3] = {cr[0], cr[1], cr[2]};
                        cl[a] = g.periodic() ? wrap(f_own - 1, n) : f_own - 1;
                        const long right = g.cell_index(cr[0], cr[1], cr[2]);
                        const long left = g.cell_index(cl[0], cl[1], cl[2]);
                        out.fat(a, out.findex(a, cr[0], cr[1], cr[2])) =
                            invh * (f.at(right) - f.at(left));
                    }
    }
    return out;
}

ScalarField divergence(const VectorField& v) {
    const Grid& g = v.g;
    ScalarField out(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                double d = 0.0;
                const int c[3] = {i, j, k};
                for (int a = 0; a < g.dim; ++a) {
                    int hi[3] = {i, j, k};
                    hi[a] = g.periodic() ? wrap(c[a] + 1, g.n[static_cast<size_t>(a)])
                                         : c[a] + 1;
                    d += (v.fat(a, v.findex(a, hi[0], hi[1], hi[2])) -
                          v.fat(a, v.findex(a, i, j, k))) /
                         g.h[static_cast<size_t>(a)];
                }
                out.at(g.cell_index(i, j, k)) = d;
            }
    return out;
}

void apply_laplacian_cells(const Grid& g, Bc bc, const double* in, double* out,
                           int ncomp) {
    const long nj = g.n[1], nk = g.n[2];
    parallel_for(g.n[0], [&](long li) {
        const int i = static_cast<int>(li);
        for (int j = 0; j < nj; ++j)
            for (int k = 0; k < nk; ++k) {
                const long c = g.cell_index(i, j, k);
                double* o = out + c * ncomp;
                const double* me = in + c * ncomp;
                for (int q = 0; q < ncomp; ++q) o[q] = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const double invh2 =
                        1.0 / (g.h[static_cast<size_t>(a)] * g.h[static_cast<size_t>(a)]);
                    for (int dir = -1; dir <= 1; dir += 2) {
                        bool mirrored;
                        const long nb = cell_neighbor(g, bc, i, j, k, a, dir, mirrored);
                        if (mirrored) continue;  // mirror ghost: zero difference
                        const double* nv = in + nb * ncomp;
                        for (int q = 0; q < ncomp; ++q)
                            o[q] += invh2 * (nv[q] - me[q]);
                    }
                }
            }
    });
}

ScalarField laplacian(const ScalarField& f) {
    check_cell_bc(f, "laplacian");
    ScalarField out(f.g, f.bc);
    apply_laplacian_cells(f.g, f.bc, f.v.data(), out.v.data(), 1);
    return out;
}

TensorField laplacian(const TensorField& f) {
    check_cell_bc(f, "laplacian");
    TensorField out(f.g, f.bc);
    apply_laplacian_cells(f.g, f.bc, f.v.data(), out.v.data(), 9);
    return out;
}

TensorField advect(const VectorField& u, const TensorField& q) {
    require_same_grid(u.g, q.g, "advect");
    const Grid& g = q.g;
    TensorField out(g, q.bc);
    for (int a = 0; a < g.dim; ++a) {
        const double invh = 1.0 / g.h[static_cast<size_t>(a)];
        const int n = g.n[static_cast<size_t>(a)];
        const int f_lo = g.periodic() ? 0 : 1;
        const int f_hi = g.periodic() ? n - 1 : n - 1;
        int cmax[3] = {g.n[0], g.n[1], g.n[2]};
        cmax[a] = 1;
        for (int i = 0; i < cmax[0]; ++i)
            for (int j = 0; j < cmax[1]; ++j)
                for (int k = 0; k < cmax[2]; ++k)
                    for (int f_own = f_lo; f_own <= f_hi; ++f_own) {
                        int cr[3] = {i, j, k};
                        cr[a] = f_own;
                        int cl[3] = {cr[0], cr[1], cr[2]};
                        cl[a] = g.periodic() ? wrap(f_own - 1, n) : f_own - 1;
                        const long right = g.cell_index(cr[0], cr[1], cr[2]);
                        const long left = g.cell_index(cl[0], cl[1], cl[2]);
                        const double uf = u.fat(a, u.findex(a, cr[0], cr[1], cr[2]));
                        const double* ql = &q.v[static_cast<size_t>(left) * 9];
                        const double* qr = &q.v[static_cast<size_t>(right) * 9];
                        double* ol = &out.v[static_cast<size_t>(left) * 9];
                        double* orr = &out.v[static_cast<size_t>(right) * 9];
                        for (int m = 0; m < 9; ++m) {
                            const double flux = uf * 0.5 * (ql[m] + qr[m]) * invh;
                            ol[m] += flux;   // hi face of the left cell
                            orr[m] -= flux;  // lo face of the right cell
                        }
                    }
    }
    return out;
}

VectorField advect_adjoint_force(const TensorField& h, const TensorField& q) {
    require_same_grid(h.g, q.g, "advect_adjoint_force");
    const Grid& g = q.g;
    VectorField out(g);
    for (int a = 0; a < g.dim; ++a) {
        const double invh = 1.0 / g.h[static_cast<size_t>(a)];
        const int n = g.n[static_cast<size_t>(a)];
        const int f_lo = g.periodic() ? 0 : 1;
        const int f_hi = n - 1;
        int cmax[3] = {g.n[0], g.n[1], g.n[2]};
        cmax[a] = 1;
        for (int i = 0; i < cmax[0]; ++i)
            for (int j = 0; j < cmax[1]; ++j)
                for (int k = 0; k < cmax[2]; ++k)
                    for (int f_own = f_lo; f_own <= f_hi; ++f_own) {
                        int cr[3] = {i, j, k};
                        cr[a] = f_own;
                        int cl[3] = {cr[0], cr[1], cr[2]};
                        cl[a] = g.periodic() ? wrap(f_own - 1, n) : f_own - 1;
                        const long right = g.cell_index(cr[0], cr[1], cr[2]);
                        const long left = g.cell_index(cl[0], cl[1], cl[2]);
                        const double* ql = &q.v[static_cast<size_t>(left) * 9];
                        const double* qr = &q.v[static_cast<size_t>(right) * 9];
                        const double* hl = &h.v[static_cast<size_t>(left) * 9];
                        const double* hr = &h.v[static_cast<size_t>(right) * 9];
                        double s = 0.0;
                        for (int m = 0; m < 9; ++m)
                            s += 0.5 * (ql[m] + qr[m]) * (hl[m] - hr[m]);
                        out.fat(a, out.findex(a, cr[0], cr[1], cr[2])) = s * invh;
                    }
    }
    return out;
}

TensorField velocity_gradient(const VectorField& u) {
    const Grid& g = u.g;
    TensorField out(g, cell_bc(g));
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                Mat3 m;
                const int c[3] = {i, j, k};
                for (int a = 0; a < g.dim; ++a) {
                    const int na = g.n[static_cast<size_t>(a)];
                    int flo[3] = {i, j, k};
                    int fhi[3] = {i, j, k};
                    fhi[a] = g.periodic() ? wrap(c[a] + 1, na) : c[a] + 1;
                    const double ulo = u.fat(a, u.findex(a, flo[0], flo[1], flo[2]));
                    const double uhi = u.fat(a, u.findex(a, fhi[0], fhi[1], fhi[2]));
                    m(a, a) = (uhi - ulo) / g.h[static_cast<size_t>(a)];
                    for (int b = 0; b < g.dim; ++b) {
                        if (b == a) continue;
                        const double inv2h = 0.5 / g.h[static_cast<size_t>(b)];
                        double dsum = 0.0;
                        for (const int* f : {flo, fhi}) {
                            int p[3] = {f[0], f[1], f[2]};
                            p[b] += 1;
                            int q2[3] = {f[0], f[1], f[2]};
                            q2[b] -= 1;
                            dsum += inv2h * (face_fetch(u, a, p[0], p[1], p[2]) -
                                             face_fetch(u, a, q2[0], q2[1], q2[2]));
                        }
                        m(a, b) = 0.5 * dsum;
                    }
                }
                out.set(g.cell_index(i, j, k), m);
            }
    return out;
}

VectorField velocity_gradient_adjoint(const Grid& g, const TensorField& s) {
    require_same_grid(g, s.g, "velocity_gradient_adjoint");
    VectorField out(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const Mat3 m = s.at(g.cell_index(i, j, k));
                const int c[3] = {i, j, k};
                for (int a = 0; a < g.dim; ++a) {
                    const int na = g.n[static_cast<size_t>(a)];
                    int flo[3] = {i, j, k};
                    int fhi[3] = {i, j, k};
                    fhi[a] = g.periodic() ? wrap(c[a] + 1, na) : c[a] + 1;
                    const double invh = 1.0 / g.h[static_cast<size_t>(a)];
                    face_scatter(out, a, fhi[0], fhi[1], fhi[2], m(a, a) * invh);
                    face_scatter(out, a, flo[0], flo[1], flo[2], -m(a, a) * invh);
                    for (int b = 0; b < g.dim; ++b) {
                        if (b == a) continue;
                        const double w = m(a, b) * 0.25 / g.h[static_cast<size_t>(b)];
                        for (const int* f : {flo, fhi}) {
                            int p[3] = {f[0], f[1], f[2]};
                            p[b] += 1;
                            int q2[3] = {f[0], f[1], f[2]};
                            q2[b] -= 1;
                            face_scatter(out, a, p[0], p[1], p[2], w);
                            face_scatter(out, a, q2[0], q2[1], q2[2], -w);
                        }
                    }
                }
            }
    return out;
}

VectorField convection(const VectorField& u) {
    const Grid& g = u.g;
    VectorField out(g);
    for (int a = 0; a < g.dim; ++a) {
        const int na = g.n[static_cast<size_t>(a)];
        const auto& e = u.ext[static_cast<size_t>(a)];
        const int own_lo = g.periodic() ? 0 : 1;
        const int own_hi = na - 1;
        int fmax[3] = {e[0], e[1], e[2]};
        fmax[a] = 1;
        for (int i = 0; i < fmax[0]; ++i)
            for (int j = 0; j < fmax[1]; ++j)
                for (int k = 0; k < fmax[2]; ++k)
                    for (int own = own_lo; own <= own_hi; ++own) {
                        int f[3] = {i, j, k};
                        f[a] = own;
                        double conv = 0.0;
                        // own-axis: fluxes (mean u_a)^2 at the two cells
                        {
                            const double invh = 1.0 / g.h[static_cast<size_t>(a)];
                            int hi2[3] = {f[0], f[1], f[2]};
                            hi2[a] = g.periodic() ? wrap(own + 1, na) : own + 1;
                            int lo2[3] = {f[0], f[1], f[2]};
                            lo2[a] = g.periodic() ? wrap(own - 1, na) : own - 1;
                            const double uc = face_fetch(u, a, f[0], f[1], f[2]);
                            const double up = face_fetch(u, a, hi2[0], hi2[1], hi2[2]);
                            const double um = face_fetch(u, a, lo2[0], lo2[1], lo2[2]);
                            const double phi_hi = 0.25 * (uc + up) * (uc + up);
                            const double phi_lo = 0.25 * (um + uc) * (um + uc);
                            conv += (phi_hi - phi_lo) * invh;
                        }
                        // tangential axes: fluxes at the edge points
                        for (int b = 0; b < g.dim; ++b) {
                            if (b == a) continue;
                            const double invh = 1.0 / g.h[static_cast<size_t>(b)];
                            double phi[2];
                            for (int side = 0; side < 2; ++side) {
                                const int shift = side == 0 ? 0 : 1;  // edge at f_b+shift
                                int p[3] = {f[0], f[1], f[2]};
                                p[b] += 2 * shift - 1;  // neighbor a-face across the edge
                                const double ua_edge =
                                    0.5 * (face_fetch(u, a, f[0], f[1], f[2]) +
                                           face_fetch(u, a, p[0], p[1], p[2]));
                                // advecting u_b straddling the edge: b-face index
                                // f_b+shift, a-cell indices own-1 and own
                                int q1[3] = {f[0], f[1], f[2]};
                                q1[b] += shift;
                                q1[a] = g.periodic() ? wrap(own - 1, na) : own - 1;
                                int q2[3] = {f[0], f[1], f[2]};
                                q2[b] += shift;
                                q2[a] = own;
                                // a-index of a b-face is a cell index; box walls give
                                // own-1 = -1 only at pinned faces, excluded above
                                const double ub_edge =
                                    0.5 * (face_fetch(u, b, q1[0], q1[1], q1[2]) +
                                           face_fetch(u, b, q2[0], q2[1], q2[2]));
                                phi[side] = ua_edge * ub_edge;
                            }
                            conv += (phi[1] - phi[0]) * invh;
                        }
                        out.fat(a, out.findex(a, f[0], f[1], f[2])) = conv;
                    }
    }
    return out;
}

void apply_velocity_helmholtz(const VectorField& u, double alpha, double kappa,
                              VectorField& out) {
    require_same_grid(u.g, out.g, "apply_velocity_helmholtz");
    const Grid& g = u.g;
    for (int a = 0; a < g.dim; ++a) {
        const auto& e = u.ext[static_cast<size_t>(a)];
        parallel_for(e[0], [&](long li) {
            const int i = static_cast<int>(li);
            for (int j = 0; j < e[1]; ++j)
                for (int k = 0; k < e[2]; ++k) {
                    const int f[3] = {i, j, k};
                    const long idx = u.findex(a, i, j, k);
                    if (face_pinned(u, a, f[a])) {
                        out.fat(a, idx) = u.fat(a, idx);  // identity row
                        continue;
                    }
                    const double me = u.fat(a, idx);
                    double lap = 0.0;
                    for (int d = 0; d < g.dim; ++d) {
                        const double invh2 =
                            1.0 / (g.h[static_cast<size_t>(d)] * g.h[static_cast<size_t>(d)]);
                        for (int dir = -1; dir <= 1; dir += 2) {
                            int p[3] = {i, j, k};
                            p[d] += dir;
                            lap += invh2 * (face_fetch(u, a, p[0], p[1], p[2]) - me);
                        }
                    }
                    out.fat(a, idx) = alpha * me - kappa * lap;
                }
        });
    }
}

double velocity_grad_sq(const VectorField& u) {
    VectorField w(u.g);
    apply_velocity_helmholtz(u, 0.0, 1.0, w);  // w = -Lap u
    return dot(w, u);
}

double divergence_norm(const VectorField& u) { return norm_l2(divergence(u)); }

std::vector<double> cell_average(const VectorField& u) {
    const Grid& g = u.g;
    std::vector<double> out(static_cast<size_t>(g.cells()) * static_cast<size_t>(g.dim), 0.0);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const long c = g.cell_index(i, j, k);
                const int cc[3] = {i, j, k};
                for (int a = 0; a < g.dim; ++a) {
                    int hi[3] = {i, j, k};
                    hi[a] = g.periodic() ? wrap(cc[a] + 1, g.n[static_cast<size_t>(a)])
                                         : cc[a] + 1;
                    out[static_cast<size_t>(c) * static_cast<size_t>(g.dim) + static_cast<size_t>(a)] =
                        0.5 * (u.fat(a, u.findex(a, i, j, k)) +
                               u.fat(a, u.findex(a, hi[0], hi[1], hi[2])));
                }
            }
    return out;
}

}  // namespace qtf
