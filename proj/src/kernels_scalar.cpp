#include "hjs/kernels.hpp"

namespace hjs::kernels {

namespace {

void cmul_inplace_scalar(cplx* a, const cplx* b, std::size_t n) {
    auto* pa = reinterpret_cast<double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        pa[2 * i] = ar * br - ai * bi;
        pa[2 * i + 1] = ai * br + ar * bi;
    }
}

void abs2_scalar(const cplx* a, double* out, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = pa[2 * i], im = pa[2 * i + 1];
        out[i] = re * re + im * im;
    }
}

// Lane layout mirrors the AVX2 accumulator: lane l collects elements 4j+l.
double sum_scalar(const double* a, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t blocks = n / 4;
    for (std::size_t j = 0; j < blocks; ++j) {
        for (int l = 0; l < 4; ++l) acc[l] += a[4 * j + l];
    }
    double tail = 0.0;
    for (std::size_t i = 4 * blocks; i < n; ++i) tail += a[i];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

// The AVX2 horizontal add leaves elements in lane order {0, 2, 1, 3}; the
// reference reproduces that assignment.
double weighted_abs2_sum_scalar(const cplx* a, const double* w, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    static constexpr int lane_of[4] = {0, 2, 1, 3};
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t blocks = n / 4;
    for (std::size_t j = 0; j < blocks; ++j) {
        for (int e = 0; e < 4; ++e) {
            const std::size_t i = 4 * j + e;
            const double re = pa[2 * i], im = pa[2 * i + 1];
            acc[lane_of[e]] += (re * re + im * im) * w[i];
        }
    }
    double tail = 0.0;
    for (std::size_t i = 4 * blocks; i < n; ++i) {
        const double re = pa[2 * i], im = pa[2 * i + 1];
        tail += (re * re + im * im) * w[i];
    }
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail;
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void madelung_rates_scalar(const double* R, const double* Rq, const double* Sq, const double* Sqq,
                           const double* V, const double* Q, double inv_m, double* dR, double* dS,
                           std::size_t n) {
    const double c1 = -inv_m;
    const double c2 = -0.5 * inv_m;
    for (std::size_t i = 0; i < n; ++i) {
        dR[i] = c1 * (Rq[i] * Sq[i]) + c2 * (R[i] * Sqq[i]);
        dS[i] = (c2 * (Sq[i] * Sq[i]) - V[i]) - Q[i];
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar",          cmul_inplace_scalar, abs2_scalar,
                                   sum_scalar,        weighted_abs2_sum_scalar,
                                   axpy_scalar,       madelung_rates_scalar};
    return table;
}

}  // namespace hjs::kernels
