#include <doctest.h>

#include <cstring>
#include <random>

#include "hjs/kernels.hpp"

using namespace hjs;
using kernels::cplx;

namespace {

template <class T>
bool bitwise_equal(const std::vector<T>& a, const std::vector<T>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct Inputs {
    std::vector<cplx> a, b;
    std::vector<double> r[7];
};

Inputs random_inputs(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    Inputs in;
    in.a.resize(n);
    in.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.a[i] = {d(rng), d(rng)};
        in.b[i] = {d(rng), d(rng)};
    }
    for (auto& v : in.r) {
        v.resize(n);
        for (auto& x : v) x = d(rng) * std::exp(3.0 * d(rng));
    }
    return in;
}

}  // namespace

TEST_CASE("active kernels can be forced to scalar") {
    // The choice is made once per process; just check it is one of the two.
    const std::string name = kernels::active().name;
    CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("scalar reduction matches a plain sum closely") {
    std::mt19937_64 rng(3);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1024u}) {
        const Inputs in = random_inputs(n, rng);
        long double ref = 0.0L;
        for (double x : in.r[0]) ref += x;
        const double s = kernels::scalar_table().sum(in.r[0].data(), n);
        CHECK(std::abs(s - static_cast<double>(ref)) <= 1e-12 * (1.0 + std::abs(static_cast<double>(ref)) * n));
    }
}

TEST_CASE("scalar and AVX2 kernels are bitwise identical") {
    const kernels::KernelTable* v = kernels::avx2_table();
    if (v == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
        return;
    }
    const kernels::KernelTable& s = kernels::scalar_table();
    std::mt19937_64 rng(2024);
    // Lengths around the vector width and the unrolled tails.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 33u, 1000u, 1024u, 4099u}) {
        CAPTURE(n);
        const Inputs in = random_inputs(n, rng);

        auto a1 = in.a, a2 = in.a;
        s.cmul_inplace(a1.data(), in.b.data(), n);
        v->cmul_inplace(a2.data(), in.b.data(), n);
        CHECK(bitwise_equal(a1, a2));

        std::vector<double> o1(n), o2(n);
        s.abs2(in.a.data(), o1.data(), n);
        v->abs2(in.a.data(), o2.data(), n);
        CHECK(bitwise_equal(o1, o2));

        CHECK(bitwise_equal(s.sum(in.r[0].data(), n), v->sum(in.r[0].data(), n)));
        CHECK(bitwise_equal(s.weighted_abs2_sum(in.a.data(), in.r[1].data(), n),
                            v->weighted_abs2_sum(in.a.data(), in.r[1].data(), n)));

        auto y1 = in.r[2], y2 = in.r[2];
        s.axpy(y1.data(), 0.37, in.r[3].data(), n);
        v->axpy(y2.data(), 0.37, in.r[3].data(), n);
        CHECK(bitwise_equal(y1, y2));

        std::vector<double> dR1(n), dS1(n), dR2(n), dS2(n);
        s.madelung_rates(in.r[0].data(), in.r[1].data(), in.r[2].data(), in.r[3].data(), in.r[4].data(),
                         in.r[5].data(), 0.7, dR1.data(), dS1.data(), n);
        v->madelung_rates(in.r[0].data(), in.r[1].data(), in.r[2].data(), in.r[3].data(), in.r[4].data(),
                          in.r[5].data(), 0.7, dR2.data(), dS2.data(), n);
        CHECK(bitwise_equal(dR1, dR2));
        CHECK(bitwise_equal(dS1, dS2));
    }
}

TEST_CASE("kernel definitions") {
    const kernels::KernelTable& s = kernels::scalar_table();
    std::vector<cplx> a{{1, 2}, {3, -1}}, b{{0, 1}, {2, 2}};
    s.cmul_inplace(a.data(), b.data(), 2);
    CHECK(a[0] == cplx(-2, 1));
    CHECK(a[1] == cplx(8, 4));
    std::vector<double> out(2);
    s.abs2(b.data(), out.data(), 2);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 8.0);
    const std::vector<double> w{2.0, 0.5};
    CHECK(s.weighted_abs2_sum(b.data(), w.data(), 2) == 6.0);

    const double R = 2.0, Rq = 0.5, Sq = 3.0, Sqq = -1.0, V = 0.25, Q = 0.125;
    double dR = 0.0, dS = 0.0;
    s.madelung_rates(&R, &Rq, &Sq, &Sqq, &V, &Q, 0.5, &dR, &dS, 1);
    CHECK(dR == doctest::Approx(-(Rq * Sq) * 0.5 - R * Sqq * 0.25));
    CHECK(dS == doctest::Approx(-Sq * Sq * 0.25 - V - Q));
}
