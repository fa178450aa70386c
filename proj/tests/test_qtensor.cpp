#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qtf/qtensor.hpp"

using namespace qtf;
using test::random_mat;
using test::random_sym_traceless;

namespace {
PotentialParams abc(double a, double b, double c) {
    PotentialParams p;
    p.a = a;
    p.b = b;
    p.c = c;
    return p;
}
const Vec3 e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
}  // namespace

TEST_CASE("contract") {
    CHECK(contract(Mat3::identity(), Mat3::identity()) == doctest::Approx(3.0));
    CHECK(contract(Mat3::diag(1, 2, 3), Mat3::diag(4, 5, 6)) == doctest::Approx(32.0));
    SplitMix64 rng(11);
    for (int i = 0; i < 50; ++i) {
        Mat3 a = random_mat(rng), b = random_mat(rng);
        CHECK(contract(a, b) == doctest::Approx(contract(b, a)));
        CHECK(contract(a, a) >= 0.0);
    }
}

TEST_CASE("potential_F matches hand-computed values") {
    CHECK(potential_F(Mat3::zero(), abc(1, 2, 3)) == 0.0);
    // uniaxial(1, e3) = diag(-1/3,-1/3,2/3), |Q|^2 = 2/3
    CHECK(potential_F(uniaxial(1.0, e3), abc(1, 0, 1)) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(potential_F(Mat3::diag(1, 0, 0), abc(0, 3, 0)) ==
          doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("bulk_force_f basic cases") {
    CHECK(fnorm(bulk_force_f(Mat3::zero(), abc(1, 2, 3))) == 0.0);
    SplitMix64 rng(12);
    Mat3 q = random_mat(rng);
    CHECK(fnorm(bulk_force_f(q, abc(1, 0, 0)) - q) < 1e-15);
    Mat3 f = bulk_force_f(Mat3::diag(1, 0, 0), abc(0, 3, 0));
    CHECK(fnorm(f - Mat3::diag(-3, 0, 0)) < 1e-14);
}

TEST_CASE("bulk_force_f is the gradient of potential_F") {
    SplitMix64 rng(13);
    const PotentialParams p = abc(-0.7, 1.3, 0.9);
    for (int trial = 0; trial < 5; ++trial) {
        Mat3 q = random_mat(rng), d = random_mat(rng);
        const double ref = contract(bulk_force_f(q, p), d);
        double err[2];
        const double hs[2] = {1e-3, 1e-4};
        for (int m = 0; m < 2; ++m) {
            const double fp = potential_F(q + hs[m] * d, p);
            const double fm = potential_F(q - hs[m] * d, p);
            err[m] = std::fabs((fp - fm) / (2 * hs[m]) - ref);
        }
        const double ratio = err[0] / err[1];
        CHECK(ratio > 80.0);
        CHECK(ratio < 120.0);
    }
}

TEST_CASE("cubic growth bound on the bulk force") {
    SplitMix64 rng(14);
    const PotentialParams p = abc(-1.5, 2.0, 1.2);
    const double cmax = std::max({std::fabs(p.a), std::fabs(p.b), p.c});
    for (int i = 0; i < 200; ++i) {
        Mat3 q = random_mat(rng, 2.0);
        const double r = fnorm(q);
        CHECK(fnorm(bulk_force_f(q, p)) <= cmax * (r + r * r + r * r * r) + 1e-12);
    }
}

TEST_CASE("bulk_force_f_pz") {
    const PotentialParams p = abc(1, 1, 1);
    CHECK(fnorm(bulk_force_f_pz(Mat3::zero(), p)) == 0.0);
    // frozen from componentwise evaluation: Q = diag(-1/3,-1/3,2/3),
    // f_pz = diag(-4/9,-4/9,8/9)
    Mat3 f = bulk_force_f_pz(uniaxial(1.0, e3), p);
    CHECK(fnorm(f - Mat3::diag(-4.0 / 9, -4.0 / 9, 8.0 / 9)) < 1e-14);

    SplitMix64 rng(15);
    for (int i = 0; i < 50; ++i) {
        Mat3 q = random_sym_traceless(rng);
        Mat3 out = bulk_force_f_pz(q, abc(0.4, -1.1, 2.0));
        CHECK(std::fabs(trace(out)) <= 1e-13 * (1.0 + fnorm(out)));
        CHECK(asymmetry(out) <= 1e-14 * (1.0 + fnorm(out)));
    }
    CHECK_THROWS_AS(bulk_force_f_pz(random_mat(rng), p), std::invalid_argument);
}

TEST_CASE("stretching term") {
    SplitMix64 rng(16);
    Mat3 g = random_mat(rng);
    CHECK(fnorm(stretching_S(g, Mat3::zero(), StretchVariant::full)) == 0.0);
    Mat3 qs = random_sym_traceless(rng);
    CHECK(fnorm(stretching_S(Mat3::identity(), qs, StretchVariant::full)) < 1e-15);
    for (int i = 0; i < 50; ++i) {
        Mat3 gg = random_mat(rng), qq = random_mat(rng);
        CHECK(std::fabs(trace(stretching_S(gg, qq, StretchVariant::antisym))) <
              1e-13 * (1.0 + fnorm(gg) * fnorm(qq)));
    }
    // antisym part is exactly antisymmetric by construction
    Mat3 a = antisym_part(random_mat(rng));
    CHECK(fnorm(a + transpose(a)) == 0.0);
}

TEST_CASE("sigma stress and the cancellation identity") {
    SplitMix64 rng(17);
    Mat3 h = random_mat(rng);
    CHECK(fnorm(sigma_stress(h, h)) < 1e-15);
    CHECK(fnorm(sigma_stress(Mat3::identity(), random_mat(rng))) < 1e-15);
    for (int i = 0; i < 1000; ++i) {
        Mat3 g = random_mat(rng), hh = random_mat(rng), q = random_mat(rng);
        const double lhs = contract(sigma_stress(hh, q), g);
        const double rhs = contract(stretching_S(g, q, StretchVariant::full), hh);
        CHECK(std::fabs(lhs - rhs) <=
              1e-12 * std::max(1e-30, fnorm(g) * fnorm(hh) * fnorm(q)));
    }
}

TEST_CASE("tau stress") {
    std::array<Mat3, 3> zero{};
    CHECK(fnorm(tau_stress(zero, 2.0)) == 0.0);

    std::array<Mat3, 3> gq{};
    gq[0](0, 0) = 1.0;  // d1 Q = E11
    Mat3 tau = tau_stress(gq, 2.0);
    CHECK(fnorm(tau - Mat3::diag(-2, 0, 0)) < 1e-15);

    SplitMix64 rng(18);
    std::array<Mat3, 3> r{random_mat(rng), random_mat(rng), random_mat(rng)};
    Mat3 t = tau_stress(r, 0.7);
    CHECK(asymmetry(t) == 0.0);
}

TEST_CASE("uniaxial and biaxial constructors") {
    CHECK(fnorm(uniaxial(1.0, e3) - Mat3::diag(-1.0 / 3, -1.0 / 3, 2.0 / 3)) < 1e-15);
    CHECK(fnorm(uniaxial(3.0, e1) - Mat3::diag(2, -1, -1)) < 1e-14);
    CHECK_THROWS_AS(uniaxial(1.0, Vec3{1, 1, 0}), std::invalid_argument);

    SplitMix64 rng(19);
    for (int i = 0; i < 20; ++i) {
        Vec3 n{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double nn = norm(n);
        for (auto& x : n) x /= nn;
        Mat3 q = uniaxial(rng.uniform(-2, 2), n);
        CHECK(std::fabs(trace(q)) <= 1e-14 * (1.0 + fnorm(q)));
        CHECK(asymmetry(q) <= 1e-14 * (1.0 + fnorm(q)));
    }

    CHECK(fnorm(biaxial(0.8, 0.0, e1, e2) - uniaxial(0.8, e1)) < 1e-15);
    CHECK(fnorm(biaxial(1, 1, e1, e2) - Mat3::diag(1.0 / 3, 1.0 / 3, -2.0 / 3)) < 1e-15);
    CHECK_THROWS_AS(biaxial(1, 1, e1, Vec3{0, 2, 0}), std::invalid_argument);
}

TEST_CASE("second moment deviation") {
    std::vector<Vec3> iso{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<double> w6(6, 1.0 / 6.0);
    CHECK(fnorm(second_moment_deviation(iso, w6)) < 1e-15);

    std::vector<Vec3> poles{{0, 0, 1}, {0, 0, -1}};
    std::vector<double> w2{0.5, 0.5};
    CHECK(fnorm(second_moment_deviation(poles, w2) - uniaxial(1.0, e3)) < 1e-15);

    // head-to-tail symmetry: reflecting every direction changes nothing
    SplitMix64 rng(20);
    std::vector<Vec3> dirs, refl;
    std::vector<double> w{0.25, 0.35, 0.4};
    for (int i = 0; i < 3; ++i) {
        Vec3 n{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double nn = norm(n);
        for (auto& x : n) x /= nn;
        dirs.push_back(n);
        refl.push_back(Vec3{-n[0], -n[1], -n[2]});
    }
    CHECK(fnorm(second_moment_deviation(dirs, w) - second_moment_deviation(refl, w)) <
          1e-15);

    CHECK_THROWS_AS(second_moment_deviation(poles, {1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(second_moment_deviation(poles, {0.6, 0.6}), std::invalid_argument);
}
