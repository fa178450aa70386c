#ifndef QTF_PARAMS_HPP
#define QTF_PARAMS_HPP

namespace qtf {

// Constants of the quartic bulk potential
//   F(Q) = (a/2)|Q|^2 - (b/3)(Q^2:Q) + (c/4)|Q|^4
// plus the material constants and the coercivity shift mu with
//   F(Q) + mu >= (c/8)|Q|^4.
struct PotentialParams {
    double a = -1.0;
    double b = 0.0;
    double c = 1.0;      // > 0
    double epsilon = 0.1;  // elastic constant, > 0
    double nu = 1.0;       // viscosity, > 0
    double gamma = 1.0;    // relaxation rate, > 0
    double mu = 0.0;       // coercivity shift, >= 0
};

// Smallest shift mu >= 0 with F(Q) + mu >= (c/8)|Q|^4 for every Q.
// Reduces to a scalar quartic through |Q^2:Q| <= |Q|^3:
//   g(r) = (a/2) r^2 - (|b|/3) r^3 + (c/8) r^4,   mu = max(0, -min_{r>=0} g).
// The stationary radii are roots of a - |b| r + (c/2) r^2, solved in
// closed form. Throws std::invalid_argument for c <= 0.
double compute_mu(double a, double b, double c);

// Fills mu and validates the positivity constraints (c, epsilon, nu,
// gamma all > 0); throws std::invalid_argument otherwise.
PotentialParams make_params(double a, double b, double c, double epsilon,
                            double nu, double gamma);

}  // namespace qtf

#endif
