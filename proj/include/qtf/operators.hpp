#ifndef QTF_OPERATORS_HPP
#define QTF_OPERATORS_HPP

#include "qtf/grid.hpp"
#include "qtf/qtensor.hpp"

namespace qtf {

// Two discrete gradient flavors coexist:
//  * centered cell-to-cell differences (symbol sin(kh)/h), used for
//    pointwise velocity gradients and dQ diagnostics;
//  * the staggered cell-to-face difference paired with the face-to-cell
//    divergence. That pair is an exact negative adjoint under the h^d
//    inner product, and the compact Laplacian is exactly its composition.

// Centered second-order derivative along one axis; ghost cells mirror
// (Neumann) or wrap (periodic).
ScalarField gradient_centered(const ScalarField& f, int axis);
TensorField gradient_centered(const TensorField& f, int axis);

// Staggered pair. gradient_faces of a Neumann scalar has zero boundary
// faces, matching the no-slip velocity lattice.
VectorField gradient_faces(const ScalarField& f);
ScalarField divergence(const VectorField& v);

// Compact 5/7-point Laplacian on cell data, ncomp interleaved
// components per cell. Equals divergence(gradient_faces(.)) exactly.
void apply_laplacian_cells(const Grid& g, Bc bc, const double* in, double* out,
                           int ncomp);
ScalarField laplacian(const ScalarField& f);
TensorField laplacian(const TensorField& f);

// Transport (u.grad)Q in divergence form with arithmetic face means;
// <advect(u,Q), Q> = <Q^2/2, div u> exactly, so the discrete L2 norm of
// Q is conserved by transport under discretely divergence-free u.
TensorField advect(const VectorField& u, const TensorField& q);

// Face force with <u, advect_adjoint_force(H,Q)> = <H, advect(u,Q)> for
// every admissible u: the distortion-stress contribution in the form
// H : dQ with the gradient part absorbed into the pressure.
VectorField advect_adjoint_force(const TensorField& h, const TensorField& q);

// Full velocity gradient at cell centers, embedded in 3x3 (third
// row/column zero in 2D). Tangential wall ghosts realize u = 0 at the
// wall (odd mirror).
TensorField velocity_gradient(const VectorField& u);

// Exact transpose of velocity_gradient: faces from a cell 3x3 field,
// <velocity_gradient(u), S> = <u, velocity_gradient_adjoint(g, S)>.
VectorField velocity_gradient_adjoint(const Grid& g, const TensorField& s);

// Momentum self-advection in divergence form on the staggered lattices;
// energy-neutral for discretely divergence-free u.
VectorField convection(const VectorField& u);

// out = (alpha I - kappa Lap) u componentwise on the face lattices.
// Pinned wall faces carry identity rows.
void apply_velocity_helmholtz(const VectorField& u, double alpha, double kappa,
                              VectorField& out);

// <-Lap u, u> over all components: the discrete |grad u|^2 matching the
// viscous operator (nonnegative).
double velocity_grad_sq(const VectorField& u);

double divergence_norm(const VectorField& u);

// Per-cell averages of the face velocity, dim entries per cell.
std::vector<double> cell_average(const VectorField& u);

}  // namespace qtf

#endif
