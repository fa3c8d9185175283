#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hjs/fft.hpp"

namespace hjs {

using cplx = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<cplx>;

// Periodic grid on [-L, L) with N points. Immutable once built; copies share
// the FFT plan.
struct Grid {
    double L = 0.0;
    std::size_t N = 0;
    double dx = 0.0;
    RealField q;
    // Standard DFT ordering: 0, 1, ..., N/2-1, -N/2, ..., -1 (times pi/L).
    RealField k;
    std::shared_ptr<const FftPlan> fft;

    double k_max() const { return M_PI / dx; }
};

Grid make_grid(double L, std::size_t N);

bool same_grid(const Grid& a, const Grid& b);

enum class DiffMethod { spectral, central };

// Spectral method multiplies mode j by (i k_j)^order. For odd orders the
// Nyquist mode is dropped, so a real field stays real.
RealField derivative(std::span<const double> f, const Grid& grid, int order,
                     DiffMethod method = DiffMethod::spectral);
ComplexField derivative(std::span<const cplx> f, const Grid& grid, int order,
                        DiffMethod method = DiffMethod::spectral);

// First and second spectral derivatives of two real fields from one forward
// and two inverse transforms (packs f + i g).
struct PairDerivatives {
    RealField f1, f2, g1, g2;
};
PairDerivatives spectral_derivatives_pair(std::span<const double> f, std::span<const double> g,
                                          const Grid& grid);

// Multiply the spectra of two real fields by a real even multiplier in place.
void apply_real_multiplier_pair(std::vector<double>& f, std::vector<double>& g,
                                std::span<const double> multiplier, const Grid& grid);

// sum_j f_j dx; the rectangle rule is the trapezoid rule on a periodic grid.
double integrate(std::span<const double> f, const Grid& grid);

ComplexField fft_forward(std::span<const cplx> f, const Grid& grid);
ComplexField fft_inverse(std::span<const cplx> F, const Grid& grid);

void require_length(std::size_t n, const Grid& grid, const char* what);

}  // namespace hjs
