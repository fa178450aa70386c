#ifndef QTF_VERIFY_HPP
#define QTF_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qtf {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string metric;
};

// The cross-module identity suites behind `qtensorflow verify`; the
// acceptance harness drives the same checks at the pinned settings.

// sigma(H,Q):G = S(G,Q):H on 1000 random triples, <= 1e-12 relative.
SuiteResult verify_cancellation(uint64_t seed);

// Adjointness of the staggered pair, laplacian = div o grad, and
// laplacian symmetry for box and periodic grids in 2D and 3D.
SuiteResult verify_summation_by_parts(uint64_t seed);

// <H(Q), D> vs the central difference of E_mu at h = 1e-3, 1e-4 on ten
// random 32^2 field pairs; quadratic reduction (error ratio in [80,120]).
SuiteResult verify_gradient_check(uint64_t seed);

// F(Q) + mu - (c/8)|Q|^4 >= -1e-12 (1+|Q|^4) over 1e5 samples for five
// parameter sets including a < 0 and b != 0.
SuiteResult verify_coercivity(uint64_t seed);

// Spatially homogeneous stepper trajectory vs an RK4 integration of
// dQ/dt = -gamma f(Q) at 1/100 the step, t in [0,10], max error
// <= 5 dt ||f(Q0)||.
SuiteResult verify_ode_oracle();

// law_residual halves (ratio in [1.7, 2.3]) under dt -> dt/2 on a fixed
// smooth state.
SuiteResult verify_residual_order();

std::vector<SuiteResult> run_all_suites(uint64_t seed);

}  // namespace qtf

#endif
