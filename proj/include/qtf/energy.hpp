#ifndef QTF_ENERGY_HPP
#define QTF_ENERGY_HPP

#include "qtf/grid.hpp"
#include "qtf/qtensor.hpp"

namespace qtf {

struct EnergyBreakdown {
    double kinetic = 0.0;      // (1/2)||u||^2
    double elastic = 0.0;      // (eps/2)||grad Q||^2 (staggered gradient)
    double bulk = 0.0;         // integral of F(Q)+mu, nonnegative
    double total = 0.0;
    double dissipation = 0.0;  // nu ||grad u||^2 + gamma ||H||^2, filled by caller
};

// (eps/2) sum over faces of the squared face differences of Q; the same
// discrete gradient whose negative adjoint builds the Laplacian, so the
// variational identity <H, D> = d/dh E_mu(Q + h D) holds exactly.
double elastic_energy(const TensorField& q, double epsilon);

// Midpoint quadrature; u may be null (pure relaxation).
EnergyBreakdown total_energy(const VectorField* u, const TensorField& q,
                             const PotentialParams& p);

// H = -eps Lap Q + f(Q), with the bulk force variant of the model.
TensorField molecular_field(const TensorField& q, const PotentialParams& p,
                            BulkVariant bulk = BulkVariant::f);

// nu ||grad u||^2 + gamma ||H||^2 >= 0; u may be null.
double dissipation(const VectorField* u, const TensorField& h,
                   const PotentialParams& p);

}  // namespace qtf

#endif
