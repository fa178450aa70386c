#ifndef QTF_QTENSOR_HPP
#define QTF_QTENSOR_HPP

#include <array>
#include <vector>

#include "qtf/mat3.hpp"
#include "qtf/params.hpp"

namespace qtf {

enum class StretchVariant { full, antisym };
enum class BulkVariant { f, f_pz };

// F(Q) = (a/2)|Q|^2 - (b/3)(Q^2:Q) + (c/4)|Q|^4
double potential_F(const Mat3& q, const PotentialParams& p);

// f(Q) = dF/dQ = a Q - (b/3)(Q^2 + QQ^t + Q^tQ) + c|Q|^2 Q, valid for
// arbitrary (not necessarily symmetric) Q.
Mat3 bulk_force_f(const Mat3& q, const PotentialParams& p);

// Trace-free variant: a Q - b (Q^2 - tr(Q^2)/3 I) + c|Q|^2 Q.
// Requires symmetric Q; throws std::invalid_argument otherwise.
Mat3 bulk_force_f_pz(const Mat3& q, const PotentialParams& p);

Mat3 bulk_force(const Mat3& q, const PotentialParams& p, BulkVariant v);

// Stretching term. full: G Q^t - Q^t G.  antisym: A Q - Q A with
// A = (G - G^t)/2 the genuine antisymmetric part, which keeps the
// commutator trace-free.
Mat3 stretching_S(const Mat3& grad_u, const Mat3& q, StretchVariant v);

// sigma(H,Q) = HQ - QH. Pairs with the stretching term through the
// identity sigma(H,Q):G = S(G,Q):H that drives the energy law.
Mat3 sigma_stress(const Mat3& h, const Mat3& q);

// tau_ij = -epsilon (d_j Q : d_i Q) given the three partials of Q.
Mat3 tau_stress(const std::array<Mat3, 3>& grad_q, double epsilon);

// Q = s (n x n - I/3). Rejects non-unit n (tolerance 1e-12 on |n|-1).
Mat3 uniaxial(double s, const Vec3& n);

// Q = s (n x n - I/3) + r (m x m - I/3). Rejects non-unit n or m.
Mat3 biaxial(double s, double r, const Vec3& n, const Vec3& m);

// Second-moment deviation of a finite orientation sample:
//   sum_k w_k (p_k x p_k) - I/3,  w_k >= 0,  sum w_k = 1 (within 1e-12).
Mat3 second_moment_deviation(const std::vector<Vec3>& directions,
                             const std::vector<double>& weights);

inline double asymmetry(const Mat3& q) {
    Mat3 d = q - transpose(q);
    return fnorm(d);
}

}  // namespace qtf

#endif
