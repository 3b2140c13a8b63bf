#include <doctest.h>

#include <cmath>
#include <complex>

#include "srdoa/geometry.hpp"
#include "srdoa/manifold.hpp"

using namespace srdoa;

namespace {

// Independent oracle for the Fourier coefficients of the conjugate steering
// response exp(+j z cos(alpha)): coefficient k is j^k J_k(z) e^{-j k phi},
// with J_{-k} = (-1)^k J_k.
std::complex<double> bessel_coefficient(double r, double phi, int k) {
    const double z = 2.0 * kPi * r;
    const int ak = std::abs(k);
    double jk = std::cyl_bessel_j(ak, z);
    if (k < 0 && ak % 2 == 1) jk = -jk;
    const std::complex<double> jpow = std::pow(std::complex<double>(0.0, 1.0), k);
    return jpow * jk * std::exp(std::complex<double>(0.0, -k * phi));
}

}  // namespace

TEST_SUITE("manifold") {
    TEST_CASE("sampled Fourier coefficients match the Bessel expansion") {
        const SensorPosition s{1.3, deg2rad(52.0)};
        const int P = 61;
        const Eigen::VectorXcd c = fs_coefficients(s, P);
        REQUIRE(c.size() == P);
        const int N = (P - 1) / 2;
        for (int k = -12; k <= 12; ++k) {
            const std::complex<double> oracle = bessel_coefficient(s.radius, s.azimuth, k);
            CHECK(std::abs(c(k + N) - oracle) < 1e-12);
        }
    }

    TEST_CASE("coefficient magnitudes are azimuth-invariant") {
        const int P = 61;
        const Eigen::VectorXcd a = fs_coefficients({1.0, 0.0}, P);
        const Eigen::VectorXcd b = fs_coefficients({1.0, deg2rad(123.0)}, P);
        for (int i = 0; i < P; ++i)
            CHECK(std::abs(a(i)) == doctest::Approx(std::abs(b(i))).epsilon(1e-10));
    }

    TEST_CASE("even transform lengths are rejected") {
        CHECK_THROWS(fs_coefficients({1.0, 0.0}, 64));
        CHECK_THROWS(build_manifold(make_uca(4, 1.0), kDefaultGammaDb, 64));
    }

    TEST_CASE("truncated series reconstructs the response to high accuracy") {
        const SensorPosition s{2.0, deg2rad(-80.0)};
        const int P = min_dft_length(2.0);
        const Eigen::VectorXcd c = fs_coefficients(s, P);
        const int N = (P - 1) / 2;
        double worst = 0.0;
        for (int l = 0; l < 997; ++l) {
            const double theta = -kPi + 2.0 * kPi * l / 997.0;
            std::complex<double> acc = 0.0;
            for (int k = -N; k <= N; ++k)
                acc += c(k + N) * std::exp(std::complex<double>(0.0, k * theta));
            const std::complex<double> target =
                std::exp(std::complex<double>(0.0, 2.0 * kPi * s.radius *
                                                       std::cos(theta - s.azimuth)));
            worst = std::max(worst, std::abs(acc - target));
        }
        CHECK(worst < 1e-6);
    }

    TEST_CASE("bandwidth scan grows with radius and feeds the length rule") {
        const int n1 = scan_bandwidth({0.5, 0.0});
        const int n2 = scan_bandwidth({1.0, 0.0});
        const int n3 = scan_bandwidth({2.0, 0.0});
        CHECK(n1 < n2);
        CHECK(n2 < n3);
        CHECK(min_dft_length(0.0) == 1);
        // Default-level rule: next odd integer covering 15.9 r + 27.03.
        CHECK(min_dft_length(2.0) == 59);
        CHECK(min_dft_length(3.0) == 75);
        CHECK(min_dft_length(4.0) == 91);
        CHECK(min_dft_length(5.0) == 107);
    }

    TEST_CASE("a shallower truncation level shortens the transform") {
        const int p_tight = min_dft_length(2.0, -160.0);
        const int p_loose = min_dft_length(2.0, -60.0);
        CHECK(p_loose < p_tight);
        CHECK(p_loose % 2 == 1);
    }

    TEST_CASE("manifold model has the documented shape and consistency") {
        const ArrayGeometry g = make_uca(7, 1.5);
        const ManifoldModel model = build_manifold(g);
        CHECK(model.P == min_dft_length(1.5));
        CHECK(model.N == (model.P - 1) / 2);
        REQUIRE(model.G.rows() == model.P);
        REQUIRE(model.G.cols() == 7);
        for (int m = 0; m < 7; ++m) {
            const Eigen::VectorXcd c = fs_coefficients(g.sensors[m], model.P);
            CHECK((model.G.col(m) - c).cwiseAbs().maxCoeff() < 1e-14);
        }
        CHECK_THROWS(build_manifold(g, kDefaultGammaDb, model.P - 2));
    }

    TEST_CASE("dual polynomial evaluation matches the linear combination") {
        const ArrayGeometry g = make_uca(5, 1.0);
        const ManifoldModel model = build_manifold(g);
        Eigen::VectorXcd c(5);
        c << std::complex<double>(0.3, -0.1), std::complex<double>(-0.2, 0.4),
            std::complex<double>(0.1, 0.1), std::complex<double>(0.05, -0.3),
            std::complex<double>(-0.15, 0.2);
        const Eigen::VectorXcd h = model.G * c;
        for (double deg = -170.0; deg <= 170.0; deg += 23.0) {
            const double theta = deg2rad(deg);
            // b(theta) = sum_m c_m conj(a_m(theta)) = a^H c.
            const Eigen::VectorXcd a = steering_response(g, theta);
            const std::complex<double> direct = a.dot(c);
            CHECK(std::abs(dual_poly_eval(h, theta) - direct) < 1e-7);
        }
    }
}
