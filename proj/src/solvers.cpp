#include "qtf/solvers.hpp"

#include <cmath>
#include <stdexcept>

#include "qtf/operators.hpp"
#include "qtf/parallel.hpp"

#ifdef QTF_HAVE_FFTW3
#include <fftw3.h>
#endif

namespace qtf {

namespace {

double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    const double* x = a.data();
    const double* y = b.data();
    return tree_sum(static_cast<long>(a.size()), [&](long i) { return x[i] * y[i]; });
}

void deflate_means(std::vector<double>& r, long cells, int ncomp) {
    for (int q = 0; q < ncomp; ++q) {
        double m = tree_sum(cells, [&](long c) { return r[static_cast<size_t>(c * ncomp + q)]; }) /
                   static_cast<double>(cells);
        for (long c = 0; c < cells; ++c) r[static_cast<size_t>(c * ncomp + q)] -= m;
    }
}

// Diagonal of alpha I - kappa Lap (independent of the component).
std::vector<double> cell_diagonal(const Grid& g, Bc bc, double alpha, double kappa) {
    std::vector<double> d(static_cast<size_t>(g.cells()), alpha);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const int c[3] = {i, j, k};
                double s = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    const double invh2 =
                        1.0 / (g.h[static_cast<size_t>(a)] * g.h[static_cast<size_t>(a)]);
                    int nb = 2;
                    if (bc != Bc::periodic) {
                        if (c[a] == 0) --nb;
                        if (c[a] == g.n[static_cast<size_t>(a)] - 1) --nb;
                    }
                    s += nb * invh2;
                }
                d[static_cast<size_t>(g.cell_index(i, j, k))] = alpha + kappa * s;
            }
    return d;
}

}  // namespace

SolveStats cg_cells(const Grid& g, Bc bc, double alpha, double kappa,
                    const std::vector<double>& b, std::vector<double>& x,
                    int ncomp, double tol, long maxit, bool deflate) {
    const long cells = g.cells();
    const size_t nn = static_cast<size_t>(cells) * static_cast<size_t>(ncomp);
    if (b.size() != nn) throw std::invalid_argument("cg_cells: rhs size mismatch");
    x.resize(nn, 0.0);
    if (maxit <= 0) maxit = 10 * cells;

    const double bnorm = std::sqrt(vec_dot(b, b));
    SolveStats st;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        st.converged = true;
        return st;
    }

    const std::vector<double> diag = cell_diagonal(g, bc, alpha, kappa);
    std::vector<double> r(nn), z(nn), p(nn), ap(nn);

    auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
        apply_laplacian_cells(g, bc, in.data(), out.data(), ncomp);
        for (size_t i = 0; i < nn; ++i)
            out[i] = alpha * in[i] - kappa * out[i];
    };
    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (long c = 0; c < cells; ++c) {
            const double inv = 1.0 / diag[static_cast<size_t>(c)];
            for (int q = 0; q < ncomp; ++q)
                out[static_cast<size_t>(c * ncomp + q)] = inv * in[static_cast<size_t>(c * ncomp + q)];
        }
    };

    apply(x, ap);
    for (size_t i = 0; i < nn; ++i) r[i] = b[i] - ap[i];
    if (deflate) deflate_means(r, cells, ncomp);
    precond(r, z);
    p = z;
    double rz = vec_dot(r, z);
    double rnorm = std::sqrt(vec_dot(r, r));

    for (st.iterations = 0; st.iterations < maxit && rnorm > tol * bnorm; ++st.iterations) {
        apply(p, ap);
        const double pap = vec_dot(p, ap);
        if (!(pap > 0.0)) break;  // lost positive definiteness (nullspace drift)
        const double a_k = rz / pap;
        for (size_t i = 0; i < nn; ++i) {
            x[i] += a_k * p[i];
            r[i] -= a_k * ap[i];
        }
        if (deflate) deflate_means(r, cells, ncomp);
        precond(r, z);
        const double rz_new = vec_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < nn; ++i) p[i] = z[i] + beta * p[i];
        rnorm = std::sqrt(vec_dot(r, r));
    }
    if (deflate) deflate_means(x, cells, ncomp);
    st.rel_residual = rnorm / bnorm;
    st.converged = rnorm <= tol * bnorm;
    return st;
}

namespace {

// Tabulated neighbor references of the componentwise face laplacian:
// one resolver sweep up front, tight gathers per CG iteration.
struct VelocityStencil {
    int dim = 2;
    std::array<std::vector<long>, 3> nbr;     // faces * 2*dim entries, -1 = zero
    std::array<std::vector<double>, 3> coef;  // sign / h_d^2
    std::array<std::vector<char>, 3> pinned;

    static VelocityStencil build(const VectorField& shape) {
        const Grid& g = shape.g;
        VelocityStencil s;
        s.dim = g.dim;
        VectorField probe(g);
        for (int a = 0; a < g.dim; ++a) {
            const auto& e = shape.ext[static_cast<size_t>(a)];
            const long nf = shape.faces(a);
            s.nbr[static_cast<size_t>(a)].assign(static_cast<size_t>(nf) * 2 * g.dim, -1);
            s.coef[static_cast<size_t>(a)].assign(static_cast<size_t>(nf) * 2 * g.dim, 0.0);
            s.pinned[static_cast<size_t>(a)].assign(static_cast<size_t>(nf), 0);
            for (int i = 0; i < e[0]; ++i)
                for (int j = 0; j < e[1]; ++j)
                    for (int k = 0; k < e[2]; ++k) {
                        const int f[3] = {i, j, k};
                        const long idx = shape.findex(a, i, j, k);
                        if (!g.periodic() &&
                            (f[a] == 0 || f[a] == g.n[static_cast<size_t>(a)])) {
                            s.pinned[static_cast<size_t>(a)][static_cast<size_t>(idx)] = 1;
                            continue;
                        }
                        int slot = 0;
                        for (int d = 0; d < g.dim; ++d) {
                            const double invh2 = 1.0 / (g.h[static_cast<size_t>(d)] *
                                                        g.h[static_cast<size_t>(d)]);
                            for (int dir = -1; dir <= 1; dir += 2, ++slot) {
                                // same ghost rules as the direct apply:
                                // wrap, odd tangential mirror, hard zero
                                // beyond the wall face
                                double sign = 1.0;
                                bool zero = false;
                                int c[3] = {i, j, k};
                                c[d] += dir;
                                for (int dd = 0; dd < g.dim; ++dd) {
                                    const int lim = e[static_cast<size_t>(dd)];
                                    if (c[dd] >= 0 && c[dd] < lim) continue;
                                    if (g.periodic()) {
                                        c[dd] = c[dd] < 0 ? c[dd] + lim : c[dd] - lim;
                                    } else if (dd == a) {
                                        zero = true;
                                    } else {
                                        sign = -sign;
                                        c[dd] = c[dd] < 0 ? 0 : lim - 1;
                                    }
                                }
                                if (zero) continue;
                                const size_t at = static_cast<size_t>(idx) * 2 * g.dim +
                                                  static_cast<size_t>(slot);
                                s.nbr[static_cast<size_t>(a)][at] = shape.findex(a, c[0], c[1], c[2]);
                                s.coef[static_cast<size_t>(a)][at] = sign * invh2;
                            }
                        }
                    }
        }
        return s;
    }

    void apply(const VectorField& u, double alpha, double kappa,
               VectorField& out) const {
        for (int a = 0; a < dim; ++a) {
            const double* in = u.comp[static_cast<size_t>(a)].data();
            double* o = out.comp[static_cast<size_t>(a)].data();
            const long* nb = nbr[static_cast<size_t>(a)].data();
            const double* cf = coef[static_cast<size_t>(a)].data();
            const char* pin = pinned[static_cast<size_t>(a)].data();
            const long nf = u.faces(a);
            const int deg = 2 * dim;
            double diag_h = 0.0;
            for (int d = 0; d < dim; ++d)
                diag_h += 2.0 / (u.g.h[static_cast<size_t>(d)] * u.g.h[static_cast<size_t>(d)]);
            parallel_for(nf, [&](long f) {
                if (pin[f]) {
                    o[f] = in[f];
                    return;
                }
                double lap = -diag_h * in[f];
                const long base = f * deg;
                for (int m = 0; m < deg; ++m) {
                    const long w = nb[base + m];
                    if (w >= 0) lap += cf[base + m] * in[w];
                }
                o[f] = alpha * in[f] - kappa * lap;
            });
        }
    }
};

}  // namespace

SolveStats solve_velocity_helmholtz(double alpha, double kappa,
                                    const VectorField& b, VectorField& x,
                                    double tol, long maxit) {
    require_same_grid(b.g, x.g, "solve_velocity_helmholtz");
    const Grid& g = b.g;
    if (maxit <= 0) maxit = 10 * g.cells();

    const double bnorm = std::sqrt(dot(b, b));
    SolveStats st;
    if (bnorm == 0.0) {
        x = VectorField(g);
        st.converged = true;
        return st;
    }

    const VelocityStencil stencil = VelocityStencil::build(b);
    VectorField r(g), p(g), ap(g);
    stencil.apply(x, alpha, kappa, ap);
    for (int a = 0; a < g.dim; ++a)
        for (long f = 0; f < b.faces(a); ++f)
            r.fat(a, f) = b.fat(a, f) - ap.fat(a, f);
    p = r;
    double rr = dot(r, r);
    double rnorm = std::sqrt(rr);

    for (st.iterations = 0; st.iterations < maxit && rnorm > tol * bnorm; ++st.iterations) {
        stencil.apply(p, alpha, kappa, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;
        const double a_k = rr / pap;
        for (int a = 0; a < g.dim; ++a)
            for (long f = 0; f < b.faces(a); ++f) {
                x.fat(a, f) += a_k * p.fat(a, f);
                r.fat(a, f) -= a_k * ap.fat(a, f);
            }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int a = 0; a < g.dim; ++a)
            for (long f = 0; f < b.faces(a); ++f)
                p.fat(a, f) = r.fat(a, f) + beta * p.fat(a, f);
        rnorm = std::sqrt(rr);
    }
    st.rel_residual = rnorm / bnorm;
    st.converged = rnorm <= tol * bnorm;
    return st;
}

bool fft_poisson_available() {
#ifdef QTF_HAVE_FFTW3
    return true;
#else
    return false;
#endif
}

#ifdef QTF_HAVE_FFTW3
namespace {

// Lap phi = rhs on a fully periodic grid by dividing out the discrete
// symbol -lambda(k), lambda = sum_a 2(1 - cos(2 pi k_a / n_a)) / h_a^2.
void poisson_fft_periodic(const Grid& g, const std::vector<double>& rhs,
                          std::vector<double>& out) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const long cells = g.cells();
    const int last = g.dim == 3 ? n2 : n1;
    const long nhalf = last / 2 + 1;
    const long ncplx = g.dim == 3 ? static_cast<long>(n0) * n1 * nhalf
                                  : static_cast<long>(n0) * nhalf;

    std::vector<double> work(rhs);
    fftw_complex* spec = fftw_alloc_complex(static_cast<size_t>(ncplx));
    fftw_plan fwd, bwd;
    if (g.dim == 3) {
        fwd = fftw_plan_dft_r2c_3d(n0, n1, n2, work.data(), spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_3d(n0, n1, n2, spec, work.data(), FFTW_ESTIMATE);
    } else {
        fwd = fftw_plan_dft_r2c_2d(n0, n1, work.data(), spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(n0, n1, spec, work.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    auto lam1d = [&](int k, int n, double h) {
        return 2.0 * (1.0 - std::cos(2.0 * M_PI * k / n)) / (h * h);
    };
    long idx = 0;
    for (int k0 = 0; k0 < n0; ++k0) {
        const double l0 = lam1d(k0, n0, g.h[0]);
        if (g.dim == 2) {
            for (int k1 = 0; k1 < nhalf; ++k1, ++idx) {
                const double lam = l0 + lam1d(k1, n1, g.h[1]);
                const double f = lam > 0.0 ? -1.0 / lam : 0.0;
                spec[idx][0] *= f;
                spec[idx][1] *= f;
            }
        } else {
            for (int k1 = 0; k1 < n1; ++k1) {
                const double l1 = l0 + lam1d(k1, n1, g.h[1]);
                for (int k2 = 0; k2 < nhalf; ++k2, ++idx) {
                    const double lam = l1 + lam1d(k2, n2, g.h[2]);
                    const double f = lam > 0.0 ? -1.0 / lam : 0.0;
                    spec[idx][0] *= f;
                    spec[idx][1] *= f;
                }
            }
        }
    }
    fftw_execute(bwd);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(spec);

    out.resize(static_cast<size_t>(cells));
    const double scale = 1.0 / static_cast<double>(cells);
    for (long c = 0; c < cells; ++c) out[static_cast<size_t>(c)] = work[static_cast<size_t>(c)] * scale;
}

// The cell-centered Neumann laplacian is diagonal in the DCT-II basis
// cos(pi k (2i+1) / (2n)) with eigenvalues -(4/h^2) sin^2(pi k / 2n),
// so the box pressure solve is a direct cosine-transform solve.
void poisson_dct_neumann(const Grid& g, const std::vector<double>& rhs,
                         std::vector<double>& out) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const long cells = g.cells();
    std::vector<double> work(rhs);
    std::vector<double> spec(static_cast<size_t>(cells));
    fftw_plan fwd, bwd;
    if (g.dim == 3) {
        fwd = fftw_plan_r2r_3d(n0, n1, n2, work.data(), spec.data(), FFTW_REDFT10,
                               FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
        bwd = fftw_plan_r2r_3d(n0, n1, n2, spec.data(), work.data(), FFTW_REDFT01,
                               FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    } else {
        fwd = fftw_plan_r2r_2d(n0, n1, work.data(), spec.data(), FFTW_REDFT10,
                               FFTW_REDFT10, FFTW_ESTIMATE);
        bwd = fftw_plan_r2r_2d(n0, n1, spec.data(), work.data(), FFTW_REDFT01,
                               FFTW_REDFT01, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    auto lam1d = [&](int k, int n, double h) {
        const double s = std::sin(0.5 * M_PI * k / n);
        return 4.0 * s * s / (h * h);
    };
    long idx = 0;
    for (int k0 = 0; k0 < n0; ++k0) {
        const double l0 = lam1d(k0, n0, g.h[0]);
        for (int k1 = 0; k1 < n1; ++k1) {
            const double l01 = l0 + lam1d(k1, n1, g.h[1]);
            if (g.dim == 2) {
                const double f = l01 > 0.0 ? -1.0 / l01 : 0.0;
                spec[static_cast<size_t>(idx++)] *= f;
            } else {
                for (int k2 = 0; k2 < n2; ++k2, ++idx) {
                    const double lam = l01 + lam1d(k2, n2, g.h[2]);
                    spec[static_cast<size_t>(idx)] *= lam > 0.0 ? -1.0 / lam : 0.0;
                }
            }
        }
    }
    fftw_execute(bwd);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);

    double scale = 1.0;
    for (int a = 0; a < g.dim; ++a) scale *= 2.0 * g.n[static_cast<size_t>(a)];
    scale = 1.0 / scale;
    out.resize(static_cast<size_t>(cells));
    for (long c = 0; c < cells; ++c)
        out[static_cast<size_t>(c)] = work[static_cast<size_t>(c)] * scale;
}

}  // namespace
#endif

SolveStats poisson_solve_into(const ScalarField& rhs, ScalarField& x, double tol,
                              long maxit) {
    if (rhs.bc == Bc::noslip) throw std::invalid_argument("poisson_solve: bad bc");
    require_same_grid(rhs.g, x.g, "poisson_solve");
    const Grid& g = rhs.g;
    const double rnorm = norm_l2(rhs);
    SolveStats st;
    if (rnorm == 0.0) {
        x = ScalarField(g, rhs.bc);
        st.converged = true;
        return st;
    }
    // |integral rhs| <= ||rhs||_L2 sqrt(|Omega|), so this ratio is in [0,1].
    const double mean = field_mean(rhs);
    const double rel_mean = std::fabs(mean) * std::sqrt(g.volume()) / rnorm;
    if (rel_mean > 1e-10)
        throw std::invalid_argument("poisson_solve: rhs has nonzero mean (incompatible)");

    std::vector<double> b(rhs.v);
    for (double& v : b) v -= mean;

#ifdef QTF_HAVE_FFTW3
    if (rhs.bc == Bc::periodic && g.periodic()) {
        poisson_fft_periodic(g, b, x.v);
        st.converged = true;
        st.rel_residual = 0.0;
        return st;
    }
    if (rhs.bc == Bc::neumann && !g.periodic()) {
        poisson_dct_neumann(g, b, x.v);
        // transform scaling leaves the solution mean-free up to rounding;
        // normalize exactly
        double mean = 0.0;
        for (double v : x.v) mean += v;
        mean /= static_cast<double>(g.cells());
        for (double& v : x.v) v -= mean;
        st.converged = true;
        st.rel_residual = 0.0;
        return st;
    }
#endif
    // A = -Lap (PSD, singular): solve A x = -b with mean deflation.
    for (double& v : b) v = -v;
    st = cg_cells(g, rhs.bc, 0.0, 1.0, b, x.v, 1, tol, maxit, true);
    return st;
}

ScalarField poisson_solve(const ScalarField& rhs, double tol, long maxit) {
    ScalarField x(rhs.g, rhs.bc);
    SolveStats st = poisson_solve_into(rhs, x, tol, maxit);
    if (!st.converged)
        throw std::runtime_error("poisson_solve: no convergence after max iterations");
    // Self-certify the residual against the assembled operator.
    ScalarField lap = laplacian(x);
    const double mean = field_mean(rhs);
    double res = 0.0, ref = 0.0;
    for (size_t i = 0; i < lap.v.size(); ++i) {
        const double d = lap.v[i] - (rhs.v[i] - mean);
        res += d * d;
        ref += rhs.v[i] * rhs.v[i];
    }
    if (ref > 0.0 && std::sqrt(res / ref) > 10.0 * tol)
        throw std::runtime_error("poisson_solve: residual check failed");
    return x;
}

}  // namespace qtf
