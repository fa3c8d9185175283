#include "hjs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace hjs {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_BACKWARD, flags);
}

FftPlan::~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

std::shared_ptr<const FftPlan> FftPlan::for_size(std::size_t n) {
    // Touch the mutex first so it outlives the cache during static destruction.
    std::mutex& m = planner_mutex();
    static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const FftPlan> plan(new FftPlan(n));
    cache.emplace(n, plan);
    return plan;
}

void FftPlan::forward(const std::complex<double>* in, std::complex<double>* out) const {
    // FFTW's signature is non-const even though out-of-place execution leaves
    // the input untouched.
    auto* pin = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in));
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), pin, reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(const std::complex<double>* in, std::complex<double>* out) const {
    auto* pin = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in));
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), pin, reinterpret_cast<fftw_complex*>(out));
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] *= s;
}

}  // namespace hjs
