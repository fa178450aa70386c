#include "qtf/qtensor.hpp"

#include <cmath>
#include <stdexcept>

namespace qtf {

double potential_F(const Mat3& q, const PotentialParams& p) {
    const double q2 = contract(q, q);
    const double cubic = contract(matmul(q, q), q);
    return 0.5 * p.a * q2 - (p.b / 3.0) * cubic + 0.25 * p.c * q2 * q2;
}

Mat3 bulk_force_f(const Mat3& q, const PotentialParams& p) {
    const Mat3 qt = transpose(q);
    const Mat3 cubic = matmul(q, q) + matmul(q, qt) + matmul(qt, q);
    const double q2 = contract(q, q);
    return p.a * q + (p.c * q2) * q - (p.b / 3.0) * cubic;
}

Mat3 bulk_force_f_pz(const Mat3& q, const PotentialParams& p) {
    if (asymmetry(q) > 1e-10 * (1.0 + fnorm(q)))
        throw std::invalid_argument("bulk_force_f_pz: Q is not symmetric");
    const Mat3 q2m = matmul(q, q);
    const double q2 = contract(q, q);  // = tr(Q^2) for symmetric Q
    Mat3 devq2 = q2m - (trace(q2m) / 3.0) * Mat3::identity();
    return p.a * q - p.b * devq2 + (p.c * q2) * q;
}

Mat3 bulk_force(const Mat3& q, const PotentialParams& p, BulkVariant v) {
    return v == BulkVariant::f ? bulk_force_f(q, p) : bulk_force_f_pz(q, p);
}

Mat3 stretching_S(const Mat3& grad_u, const Mat3& q, StretchVariant v) {
    if (v == StretchVariant::full) {
        const Mat3 qt = transpose(q);
        return matmul(grad_u, qt) - matmul(qt, grad_u);
    }
    const Mat3 a = antisym_part(grad_u);
    return matmul(a, q) - matmul(q, a);
}

Mat3 sigma_stress(const Mat3& h, const Mat3& q) {
    return matmul(h, q) - matmul(q, h);
}

Mat3 tau_stress(const std::array<Mat3, 3>& grad_q, double epsilon) {
    Mat3 tau;
    for (int i = 0; i < 3; ++i) {
        tau(i, i) = -epsilon * contract(grad_q[static_cast<size_t>(i)],
                                        grad_q[static_cast<size_t>(i)]);
        for (int j = i + 1; j < 3; ++j) {
            double v = -epsilon * contract(grad_q[static_cast<size_t>(j)],
                                           grad_q[static_cast<size_t>(i)]);
            tau(i, j) = v;
            tau(j, i) = v;
        }
    }
    return tau;
}

static void require_unit(const Vec3& n, const char* who) {
    if (std::fabs(norm(n) - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": direction is not a unit vector");
}

Mat3 uniaxial(double s, const Vec3& n) {
    require_unit(n, "uniaxial");
    Mat3 q = outer(n, n);
    const double t = s / 3.0;
    q *= s;
    q(0, 0) -= t;
    q(1, 1) -= t;
    q(2, 2) -= t;
    return q;
}

Mat3 biaxial(double s, double r, const Vec3& n, const Vec3& m) {
    require_unit(n, "biaxial");
    require_unit(m, "biaxial");
    return uniaxial(s, n) + uniaxial(r, m);
}

Mat3 second_moment_deviation(const std::vector<Vec3>& directions,
                             const std::vector<double>& weights) {
    if (directions.size() != weights.size())
        throw std::invalid_argument("second_moment_deviation: size mismatch");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0)
            throw std::invalid_argument("second_moment_deviation: negative weight");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("second_moment_deviation: weights must sum to 1");
    Mat3 m;
    for (size_t k = 0; k < directions.size(); ++k) {
        require_unit(directions[k], "second_moment_deviation");
        m += weights[k] * outer(directions[k], directions[k]);
    }
    m(0, 0) -= 1.0 / 3.0;
    m(1, 1) -= 1.0 / 3.0;
    m(2, 2) -= 1.0 / 3.0;
    return m;
}

}  // namespace qtf
