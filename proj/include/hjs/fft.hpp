#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace hjs {

// Thin FFTW wrapper. Plans are created once per length (FFTW_ESTIMATE, so the
// chosen algorithm and therefore the output bits do not depend on timing) and
// executed through the new-array interface, which FFTW documents as thread
// safe. Inputs are never modified.
class FftPlan {
public:
    static std::shared_ptr<const FftPlan> for_size(std::size_t n);

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan();

    std::size_t size() const noexcept { return n_; }
    // Unnormalised forward transform, sum_j f_j exp(-2 pi i jk/N).
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    // Inverse including the 1/N factor.
    void inverse(const std::complex<double>* in, std::complex<double>* out) const;

private:
    explicit FftPlan(std::size_t n);
    std::size_t n_;
    void* fwd_;
    void* bwd_;
};

}  // namespace hjs
