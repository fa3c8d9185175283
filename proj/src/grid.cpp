#include "hjs/grid.hpp"

#include <cmath>
#include <string>

#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"

namespace hjs {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// (i k)^order as a complex multiplier, Nyquist dropped for odd orders.
ComplexField spectral_multiplier(const Grid& g, int order) {
    ComplexField m(g.N);
    const std::size_t nyq = g.N / 2;
    for (std::size_t j = 0; j < g.N; ++j) {
        const double kj = g.k[j];
        if (order == 1) {
            m[j] = (j == nyq) ? cplx(0.0, 0.0) : cplx(0.0, kj);
        } else {
            m[j] = cplx(-kj * kj, 0.0);
        }
    }
    return m;
}

template <class T>
std::vector<T> central(std::span<const T> f, const Grid& g, int order) {
    const std::size_t n = g.N;
    std::vector<T> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const T& fm = f[(j + n - 1) % n];
        const T& fp = f[(j + 1) % n];
        if (order == 1) {
            out[j] = (fp - fm) / (2.0 * g.dx);
        } else {
            out[j] = (fp - 2.0 * f[j] + fm) / (g.dx * g.dx);
        }
    }
    return out;
}

void check_order(int order) {
    if (order != 1 && order != 2) throw ParameterError("derivative order must be 1 or 2");
}

}  // namespace

Grid make_grid(double L, std::size_t N) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid half-width L must be positive and finite");
    if (N < 8 || !is_power_of_two(N)) {
        throw ConfigError("grid size N must be a power of two >= 8 (got " + std::to_string(N) + ")");
    }
    Grid g;
    g.L = L;
    g.N = N;
    g.dx = 2.0 * L / static_cast<double>(N);
    g.q.resize(N);
    g.k.resize(N);
    const double dk = M_PI / L;
    for (std::size_t j = 0; j < N; ++j) {
        g.q[j] = -L + static_cast<double>(j) * g.dx;
        const long m = (j < N / 2) ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(N);
        g.k[j] = dk * static_cast<double>(m);
    }
    g.fft = FftPlan::for_size(N);
    return g;
}

bool same_grid(const Grid& a, const Grid& b) { return a.N == b.N && a.L == b.L; }

void require_length(std::size_t n, const Grid& grid, const char* what) {
    if (n != grid.N) {
        throw ShapeError(std::string(what) + ": field length " + std::to_string(n) + " does not match grid N=" +
                         std::to_string(grid.N));
    }
}

ComplexField fft_forward(std::span<const cplx> f, const Grid& grid) {
    require_length(f.size(), grid, "fft_forward");
    ComplexField out(grid.N);
    grid.fft->forward(f.data(), out.data());
    return out;
}

ComplexField fft_inverse(std::span<const cplx> F, const Grid& grid) {
    require_length(F.size(), grid, "fft_inverse");
    ComplexField out(grid.N);
    grid.fft->inverse(F.data(), out.data());
    return out;
}

ComplexField derivative(std::span<const cplx> f, const Grid& grid, int order, DiffMethod method) {
    require_length(f.size(), grid, "derivative");
    check_order(order);
    if (method == DiffMethod::central) return central<cplx>(f, grid, order);
    ComplexField F = fft_forward(f, grid);
    const ComplexField mult = spectral_multiplier(grid, order);
    kernels::cmul_inplace(F.data(), mult.data(), grid.N);
    return fft_inverse(F, grid);
}

RealField derivative(std::span<const double> f, const Grid& grid, int order, DiffMethod method) {
    require_length(f.size(), grid, "derivative");
    check_order(order);
    if (method == DiffMethod::central) return central<double>(f, grid, order);
    ComplexField c(f.begin(), f.end());
    const ComplexField d = derivative(std::span<const cplx>(c), grid, order, method);
    RealField out(grid.N);
    for (std::size_t j = 0; j < grid.N; ++j) out[j] = d[j].real();
    return out;
}

PairDerivatives spectral_derivatives_pair(std::span<const double> f, std::span<const double> g,
                                          const Grid& grid) {
    require_length(f.size(), grid, "spectral_derivatives_pair");
    require_length(g.size(), grid, "spectral_derivatives_pair");
    const std::size_t n = grid.N;
    ComplexField packed(n);
    for (std::size_t j = 0; j < n; ++j) packed[j] = cplx(f[j], g[j]);
    const ComplexField F = fft_forward(packed, grid);

    PairDerivatives out;
    for (int order = 1; order <= 2; ++order) {
        ComplexField G = F;
        const ComplexField mult = spectral_multiplier(grid, order);
        kernels::cmul_inplace(G.data(), mult.data(), n);
        const ComplexField d = fft_inverse(G, grid);
        RealField re(n), im(n);
        for (std::size_t j = 0; j < n; ++j) {
            re[j] = d[j].real();
            im[j] = d[j].imag();
        }
        if (order == 1) {
            out.f1 = std::move(re);
            out.g1 = std::move(im);
        } else {
            out.f2 = std::move(re);
            out.g2 = std::move(im);
        }
    }
    return out;
}

void apply_real_multiplier_pair(std::vector<double>& f, std::vector<double>& g,
                                std::span<const double> multiplier, const Grid& grid) {
    require_length(f.size(), grid, "apply_real_multiplier_pair");
    require_length(g.size(), grid, "apply_real_multiplier_pair");
    require_length(multiplier.size(), grid, "apply_real_multiplier_pair");
    const std::size_t n = grid.N;
    ComplexField packed(n);
    for (std::size_t j = 0; j < n; ++j) packed[j] = cplx(f[j], g[j]);
    ComplexField F = fft_forward(packed, grid);
    for (std::size_t j = 0; j < n; ++j) F[j] *= multiplier[j];
    const ComplexField back = fft_inverse(F, grid);
    for (std::size_t j = 0; j < n; ++j) {
        f[j] = back[j].real();
        g[j] = back[j].imag();
    }
}

double integrate(std::span<const double> f, const Grid& grid) {
    require_length(f.size(), grid, "integrate");
    return kernels::sum(f.data(), f.size()) * grid.dx;
}

}  // namespace hjs
