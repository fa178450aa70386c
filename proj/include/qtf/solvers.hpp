#ifndef QTF_SOLVERS_HPP
#define QTF_SOLVERS_HPP

#include <vector>

#include "qtf/grid.hpp"

namespace qtf {

struct SolveStats {
    long iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

// Jacobi-preconditioned CG for (alpha I - kappa Lap) x = b on cell data
// with ncomp interleaved components solved jointly: the step scalars are
// shared across components, so the iteration commutes with any linear
// recombination of components (symmetry and trace of tensor unknowns
// are preserved to rounding). deflate projects out the per-component
// constant nullspace (alpha = 0 with Neumann/periodic bc).
SolveStats cg_cells(const Grid& g, Bc bc, double alpha, double kappa,
                    const std::vector<double>& b, std::vector<double>& x,
                    int ncomp, double tol, long maxit, bool deflate);

// CG for the componentwise (alpha I - kappa Lap) system on the staggered
// velocity lattices; wall faces are pinned to zero.
SolveStats solve_velocity_helmholtz(double alpha, double kappa,
                                    const VectorField& b, VectorField& x,
                                    double tol, long maxit);

// Solves Lap phi = rhs with the bc carried by rhs (neumann or periodic).
// Requires zero-mean rhs (1e-10 relative); the result is zero-mean.
// Fast transforms diagonalize the compact stencil exactly when FFTW is
// available (real FFT on periodic grids, DCT-II on Neumann boxes); the
// Jacobi-preconditioned CG path covers everything else (max 10 N
// iterations by default). Throws std::invalid_argument for incompatible
// rhs, std::runtime_error on non-convergence.
ScalarField poisson_solve(const ScalarField& rhs, double tol = 1e-10,
                          long maxit = 0);

// Warm-started variant used by the pressure projection; x holds the
// initial guess and the solution.
SolveStats poisson_solve_into(const ScalarField& rhs, ScalarField& x, double tol,
                              long maxit = 0);

bool fft_poisson_available();

}  // namespace qtf

#endif
