#ifndef QTF_TEST_HELPERS_HPP
#define QTF_TEST_HELPERS_HPP

#include <cmath>
#include <functional>

#include "qtf/grid.hpp"
#include "qtf/qtensor.hpp"
#include "qtf/rng.hpp"

namespace qtf::test {

inline Mat3 random_mat(SplitMix64& rng, double amp = 1.0) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.m[static_cast<size_t>(i)] = rng.uniform(-amp, amp);
    return m;
}

inline Mat3 random_sym_traceless(SplitMix64& rng, double amp = 1.0) {
    Mat3 m = sym_part(random_mat(rng, amp));
    const double t = trace(m) / 3.0;
    m(0, 0) -= t;
    m(1, 1) -= t;
    m(2, 2) -= t;
    return m;
}

inline ScalarField random_scalar(const Grid& g, SplitMix64& rng, double amp = 1.0) {
    ScalarField f(g);
    for (double& v : f.v) v = rng.uniform(-amp, amp);
    return f;
}

inline TensorField random_tensor(const Grid& g, SplitMix64& rng, double amp = 1.0,
                                 bool sym = false) {
    TensorField q(g);
    for (long c = 0; c < g.cells(); ++c)
        q.set(c, sym ? random_sym_traceless(rng, amp) : random_mat(rng, amp));
    return q;
}

// Random velocity respecting the no-slip pinning.
inline VectorField random_velocity(const Grid& g, SplitMix64& rng, double amp = 1.0) {
    VectorField u(g);
    for (int a = 0; a < g.dim; ++a) {
        const auto& e = u.ext[static_cast<size_t>(a)];
        for (int i = 0; i < e[0]; ++i)
            for (int j = 0; j < e[1]; ++j)
                for (int k = 0; k < e[2]; ++k) {
                    const int own = a == 0 ? i : a == 1 ? j : k;
                    const bool wall =
                        !g.periodic() && (own == 0 || own == g.n[static_cast<size_t>(a)]);
                    u.fat(a, u.findex(a, i, j, k)) = wall ? 0.0 : rng.uniform(-amp, amp);
                }
    }
    return u;
}

// Exactly divergence-free 2D velocity from a node stream function
// (psi = 0 on the walls for the box case).
inline VectorField curl_velocity(const Grid& g,
                                 const std::function<double(double, double)>& psi) {
    VectorField u(g);
    const int n0 = g.n[0], n1 = g.n[1];
    const bool per = g.periodic();
    const int i_lo = per ? 0 : 1;
    for (int i = i_lo; i <= (per ? n0 - 1 : n0 - 1); ++i)
        for (int j = 0; j < n1; ++j) {
            const double x = i * g.h[0];
            u.fat(0, u.findex(0, i, j, 0)) =
                (psi(x, (j + 1) * g.h[1]) - psi(x, j * g.h[1])) / g.h[1];
        }
    for (int i = 0; i < n0; ++i)
        for (int j = i_lo; j <= (per ? n1 - 1 : n1 - 1); ++j) {
            const double y = j * g.h[1];
            u.fat(1, u.findex(1, i, j, 0)) =
                -(psi((i + 1) * g.h[0], y) - psi(i * g.h[0], y)) / g.h[0];
        }
    return u;
}

}  // namespace qtf::test

#endif
