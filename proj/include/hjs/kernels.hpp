#pragma once

#include <complex>
#include <cstddef>

// Pointwise and reduction loops that dominate the solvers. Every kernel has a
// portable scalar reference; an AVX2 variant is picked at runtime when the CPU
// supports it. Both variants perform the same roundings in the same order, so
// results are bitwise identical (reductions use a fixed 4-lane accumulation
// pattern in both).
namespace hjs::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;
    // a[i] *= b[i]
    void (*cmul_inplace)(cplx* a, const cplx* b, std::size_t n);
    // out[i] = |a[i]|^2
    void (*abs2)(const cplx* a, double* out, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    // sum |a[i]|^2 * w[i]
    double (*weighted_abs2_sum)(const cplx* a, const double* w, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
    // Pointwise (R, S) rates: dR = -(Rq Sq)/m - R Sqq/(2m), dS = -Sq^2/(2m) - V - Q.
    void (*madelung_rates)(const double* R, const double* Rq, const double* Sq, const double* Sqq,
                           const double* V, const double* Q, double inv_m, double* dR, double* dS,
                           std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();
// Chosen once: AVX2 if available, unless HJS_KERNELS=scalar is set.
const KernelTable& active();

inline void cmul_inplace(cplx* a, const cplx* b, std::size_t n) { active().cmul_inplace(a, b, n); }
inline void abs2(const cplx* a, double* out, std::size_t n) { active().abs2(a, out, n); }
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }
inline double weighted_abs2_sum(const cplx* a, const double* w, std::size_t n) {
    return active().weighted_abs2_sum(a, w, n);
}
inline void axpy(double* y, double alpha, const double* x, std::size_t n) { active().axpy(y, alpha, x, n); }

}  // namespace hjs::kernels
