#ifndef QTF_MAT3_HPP
#define QTF_MAT3_HPP

#include <array>
#include <cmath>

namespace qtf {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Dense 3x3 real matrix, row-major.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[static_cast<size_t>(3 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<size_t>(3 * r + c)]; }

    static Mat3 zero() { return Mat3{}; }
    static Mat3 identity() {
        Mat3 a;
        a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
        return a;
    }
    static Mat3 diag(double x, double y, double z) {
        Mat3 a;
        a(0, 0) = x;
        a(1, 1) = y;
        a(2, 2) = z;
        return a;
    }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    Mat3& operator-=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    Mat3& operator*=(double s) {
        for (int i = 0; i < 9; ++i) m[i] *= s;
        return *this;
    }
};

inline Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
inline Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
inline Mat3 operator*(double s, Mat3 a) { return a *= s; }
inline Mat3 operator*(Mat3 a, double s) { return a *= s; }
inline Mat3 operator-(const Mat3& a) { return -1.0 * a; }

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return c;
}
inline Mat3 operator*(const Mat3& a, const Mat3& b) { return matmul(a, b); }

inline Mat3 transpose(const Mat3& a) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = a(j, i);
    return t;
}

inline double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

// A:B = sum_ij A_ij B_ij, the matrix scalar product.
inline double contract(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int i = 0; i < 9; ++i) s += a.m[i] * b.m[i];
    return s;
}

inline double fnorm(const Mat3& a) { return std::sqrt(contract(a, a)); }

inline Mat3 sym_part(const Mat3& a) {
    Mat3 s;
    for (int i = 0; i < 3; ++i) {
        s(i, i) = a(i, i);
        for (int j = i + 1; j < 3; ++j) {
            double v = 0.5 * (a(i, j) + a(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

// Antisymmetric part; A = -A^t holds exactly (each pair assigned once).
inline Mat3 antisym_part(const Mat3& a) {
    Mat3 w;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double v = 0.5 * (a(i, j) - a(j, i));
            w(i, j) = v;
            w(j, i) = -v;
        }
    return w;
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 o;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) o(i, j) = a[i] * b[j];
    return o;
}

inline double max_abs(const Mat3& a) {
    double v = 0.0;
    for (int i = 0; i < 9; ++i) v = std::max(v, std::fabs(a.m[i]));
    return v;
}

inline bool all_finite(const Mat3& a) {
    for (int i = 0; i < 9; ++i)
        if (!std::isfinite(a.m[i])) return false;
    return true;
}

}  // namespace qtf

#endif
