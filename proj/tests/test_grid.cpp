#include <doctest.h>

#include <cmath>

#include "hjs/errors.hpp"
#include "hjs/grid.hpp"
#include "support.hpp"

using namespace hjs;

TEST_CASE("make_grid lays out a periodic cell") {
    const Grid g = make_grid(1.0, 8);
    CHECK(g.dx == 0.25);
    REQUIRE(g.q.size() == 8);
    for (std::size_t j = 0; j < 8; ++j) CHECK(g.q[j] == -1.0 + 0.25 * j);
    CHECK(g.dx * g.N == doctest::Approx(2.0));

    CHECK(make_grid(20.0, 1024).dx == 0.0390625);
}

TEST_CASE("make_grid rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(1.0, 7), ConfigError);
    CHECK_THROWS_AS(make_grid(1.0, 4), ConfigError);
    CHECK_THROWS_AS(make_grid(1.0, 1000), ConfigError);
    CHECK_THROWS_AS(make_grid(0.0, 8), ConfigError);
    CHECK_THROWS_AS(make_grid(-1.0, 8), ConfigError);
}

TEST_CASE("wavenumbers are symmetric apart from Nyquist") {
    const Grid g = make_grid(3.0, 64);
    CHECK(g.k[0] == 0.0);
    for (std::size_t j = 1; j < g.N / 2; ++j) CHECK(g.k[j] == -g.k[g.N - j]);
    CHECK(g.k[g.N / 2] == doctest::Approx(-g.k_max()));
}

TEST_CASE("spectral derivative of a sine") {
    const double L = 2.5;
    const Grid g = make_grid(L, 64);
    RealField f(g.N), exact(g.N);
    for (std::size_t j = 0; j < g.N; ++j) {
        f[j] = std::sin(M_PI * g.q[j] / L);
        exact[j] = M_PI / L * std::cos(M_PI * g.q[j] / L);
    }
    CHECK(test::max_abs_diff(derivative(f, g, 1), exact) < 1e-13);
}

TEST_CASE("second derivative of a constant vanishes") {
    const Grid g = make_grid(1.0, 32);
    const RealField f(g.N, 3.7);
    for (double v : derivative(f, g, 2)) CHECK(std::abs(v) < 1e-13);
    for (double v : derivative(f, g, 2, DiffMethod::central)) CHECK(v == 0.0);
}

TEST_CASE("second derivative of a Gaussian") {
    const Grid g = make_grid(10.0, 512);
    RealField f(g.N), exact(g.N);
    for (std::size_t j = 0; j < g.N; ++j) {
        const double q = g.q[j];
        f[j] = std::exp(-q * q);
        exact[j] = (4.0 * q * q - 2.0) * std::exp(-q * q);
    }
    CHECK(test::max_abs_diff(derivative(f, g, 2), exact) < 1e-10);
    // Central differences agree at O(dx^2).
    CHECK(test::max_abs_diff(derivative(f, g, 2, DiffMethod::central), exact) < 5.0 * g.dx * g.dx);
}

TEST_CASE("band-limited fields differentiate to round-off") {
    const double L = 4.0;
    const Grid g = make_grid(L, 128);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        RealField f(g.N, 0.0), df(g.N, 0.0), d2f(g.N, 0.0);
        for (int n = 1; n < static_cast<int>(g.N / 4); ++n) {
            const double a = u(rng), b = u(rng), w = M_PI * n / L;
            for (std::size_t j = 0; j < g.N; ++j) {
                const double x = w * g.q[j];
                f[j] += a * std::cos(x) + b * std::sin(x);
                df[j] += w * (-a * std::sin(x) + b * std::cos(x));
                d2f[j] += -w * w * (a * std::cos(x) + b * std::sin(x));
            }
        }
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t j = 0; j < g.N; ++j) s1 = std::max(s1, std::abs(df[j])), s2 = std::max(s2, std::abs(d2f[j]));
        CHECK(test::max_abs_diff(derivative(f, g, 1), df) / s1 < 1e-10);
        CHECK(test::max_abs_diff(derivative(f, g, 2), d2f) / s2 < 1e-10);
    }
}

TEST_CASE("first derivative applied twice matches the second derivative") {
    const Grid g = make_grid(10.0, 256);
    RealField f(g.N);
    for (std::size_t j = 0; j < g.N; ++j) f[j] = std::exp(-0.5 * g.q[j] * g.q[j]) * std::cos(1.3 * g.q[j]);
    const RealField twice = derivative(derivative(f, g, 1), g, 1);
    const RealField direct = derivative(f, g, 2);
    double scale = 0.0;
    for (double v : direct) scale = std::max(scale, std::abs(v));
    CHECK(test::max_abs_diff(twice, direct) / scale < 1e-9);
}

TEST_CASE("complex derivative equals the derivative of the parts") {
    const Grid g = make_grid(8.0, 256);
    ComplexField z(g.N);
    RealField re(g.N), im(g.N);
    for (std::size_t j = 0; j < g.N; ++j) {
        re[j] = std::exp(-g.q[j] * g.q[j]);
        im[j] = g.q[j] * std::exp(-g.q[j] * g.q[j]);
        z[j] = {re[j], im[j]};
    }
    const ComplexField dz = derivative(z, g, 1);
    const RealField dre = derivative(re, g, 1), dim = derivative(im, g, 1);
    for (std::size_t j = 0; j < g.N; ++j) {
        CHECK(std::abs(dz[j].real() - dre[j]) < 1e-12);
        CHECK(std::abs(dz[j].imag() - dim[j]) < 1e-12);
    }
}

TEST_CASE("paired derivatives agree with single ones") {
    const Grid g = make_grid(10.0, 256);
    const RealField f = test::gaussian(g, 1.0, 0.5);
    RealField h(g.N);
    for (std::size_t j = 0; j < g.N; ++j) h[j] = std::sin(0.3 * g.q[j]) * f[j];
    const PairDerivatives p = spectral_derivatives_pair(f, h, g);
    CHECK(test::max_abs_diff(p.f1, derivative(f, g, 1)) < 1e-13);
    CHECK(test::max_abs_diff(p.f2, derivative(f, g, 2)) < 1e-12);
    CHECK(test::max_abs_diff(p.g1, derivative(h, g, 1)) < 1e-13);
    CHECK(test::max_abs_diff(p.g2, derivative(h, g, 2)) < 1e-12);
}

TEST_CASE("integrate") {
    const Grid g8 = make_grid(1.0, 8);
    CHECK(integrate(RealField(8, 1.0), g8) == doctest::Approx(2.0).epsilon(1e-15));

    const Grid g = make_grid(10.0, 512);
    RealField s(g.N), e(g.N);
    for (std::size_t j = 0; j < g.N; ++j) {
        s[j] = std::sin(M_PI * g.q[j] / g.L);
        e[j] = std::exp(-g.q[j] * g.q[j]);
    }
    CHECK(std::abs(integrate(s, g)) < 1e-13);
    CHECK(std::abs(integrate(e, g) - std::sqrt(M_PI)) < 1e-12);
}

TEST_CASE("integrate is linear and positive") {
    const Grid g = make_grid(5.0, 64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        RealField a(g.N), b(g.N), c(g.N);
        const double alpha = 3.0 * u(rng) - 1.5, beta = 3.0 * u(rng) - 1.5;
        for (std::size_t j = 0; j < g.N; ++j) {
            a[j] = u(rng);
            b[j] = u(rng);
            c[j] = alpha * a[j] + beta * b[j];
        }
        CHECK(integrate(a, g) > 0.0);
        CHECK(integrate(c, g) == doctest::Approx(alpha * integrate(a, g) + beta * integrate(b, g)).epsilon(1e-12));
    }
}

TEST_CASE("fft round trip") {
    const Grid g = make_grid(3.0, 128);
    ComplexField z(g.N);
    for (std::size_t j = 0; j < g.N; ++j) z[j] = {std::cos(0.7 * j), std::sin(0.11 * j * j)};
    CHECK(test::max_abs_diff(fft_inverse(fft_forward(z, g), g), z) < 1e-14);
}

TEST_CASE("length mismatch is a shape error") {
    const Grid g = make_grid(1.0, 16);
    CHECK_THROWS_AS(derivative(RealField(8, 0.0), g, 1), ShapeError);
    CHECK_THROWS_AS(integrate(RealField(15, 0.0), g), ShapeError);
}
