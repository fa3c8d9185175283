#include "hjs/kernels.hpp"

#include <immintrin.h>

namespace hjs::kernels {

namespace {

void cmul_inplace_avx2(cplx* a, const cplx* b, std::size_t n) {
    auto* pa = reinterpret_cast<double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        const __m256d b_re = _mm256_movedup_pd(vb);          // br br
        const __m256d b_im = _mm256_permute_pd(vb, 0xF);     // bi bi
        const __m256d a_sw = _mm256_permute_pd(va, 0x5);     // ai ar
        const __m256d t1 = _mm256_mul_pd(va, b_re);          // ar*br, ai*br
        const __m256d t2 = _mm256_mul_pd(a_sw, b_im);        // ai*bi, ar*bi
        _mm256_storeu_pd(pa + 2 * i, _mm256_addsub_pd(t1, t2));
    }
    for (; i < n; ++i) {
        const double ar = pa[2 * i], ai = pa[2 * i + 1];
        const double br = pb[2 * i], bi = pb[2 * i + 1];
        pa[2 * i] = ar * br - ai * bi;
        pa[2 * i + 1] = ai * br + ar * bi;
    }
}

// |a|^2 for four consecutive complex values, returned in element order {0,2,1,3}.
inline __m256d abs2_block_interleaved(const double* p) {
    const __m256d lo = _mm256_loadu_pd(p);
    const __m256d hi = _mm256_loadu_pd(p + 4);
    return _mm256_hadd_pd(_mm256_mul_pd(lo, lo), _mm256_mul_pd(hi, hi));
}

void abs2_avx2(const cplx* a, double* out, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = abs2_block_interleaved(pa + 2 * i);
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(s, 0b11011000));
    }
    for (; i < n; ++i) {
        const double re = pa[2 * i], im = pa[2 * i + 1];
        out[i] = re * re + im * im;
    }
}

inline double reduce_lanes(__m256d acc) {
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return reduce_lanes(acc) + tail;
}

double weighted_abs2_sum_avx2(const cplx* a, const double* w, std::size_t n) {
    const auto* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = abs2_block_interleaved(pa + 2 * i);
        const __m256d vw = _mm256_permute4x64_pd(_mm256_loadu_pd(w + i), 0b11011000);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(s, vw));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double re = pa[2 * i], im = pa[2 * i + 1];
        tail += (re * re + im * im) * w[i];
    }
    return reduce_lanes(acc) + tail;
}

void axpy_avx2(double* y, double alpha, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
    }
    for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void madelung_rates_avx2(const double* R, const double* Rq, const double* Sq, const double* Sqq,
                         const double* V, const double* Q, double inv_m, double* dR, double* dS,
                         std::size_t n) {
    const double c1 = -inv_m;
    const double c2 = -0.5 * inv_m;
    const __m256d v1 = _mm256_set1_pd(c1);
    const __m256d v2 = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(R + i);
        const __m256d rq = _mm256_loadu_pd(Rq + i);
        const __m256d sq = _mm256_loadu_pd(Sq + i);
        const __m256d sqq = _mm256_loadu_pd(Sqq + i);
        const __m256d a = _mm256_mul_pd(v1, _mm256_mul_pd(rq, sq));
        const __m256d b = _mm256_mul_pd(v2, _mm256_mul_pd(r, sqq));
        _mm256_storeu_pd(dR + i, _mm256_add_pd(a, b));
        const __m256d k = _mm256_mul_pd(v2, _mm256_mul_pd(sq, sq));
        const __m256d s = _mm256_sub_pd(_mm256_sub_pd(k, _mm256_loadu_pd(V + i)), _mm256_loadu_pd(Q + i));
        _mm256_storeu_pd(dS + i, s);
    }
    for (; i < n; ++i) {
        dR[i] = c1 * (Rq[i] * Sq[i]) + c2 * (R[i] * Sqq[i]);
        dS[i] = (c2 * (Sq[i] * Sq[i]) - V[i]) - Q[i];
    }
}

}  // namespace

const KernelTable& avx2_table_impl() {
    static const KernelTable table{"avx2",   cmul_inplace_avx2, abs2_avx2, sum_avx2, weighted_abs2_sum_avx2,
                                   axpy_avx2, madelung_rates_avx2};
    return table;
}

}  // namespace hjs::kernels
