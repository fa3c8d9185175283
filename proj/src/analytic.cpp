#include "hjs/analytic.hpp"

#include <cmath>

namespace hjs::analytic {

ComplexField free_gaussian(const Grid& grid, double sigma, double q0, double p0, double kappa, double m, double t) {
    const double s2 = sigma * sigma;
    const cplx spread(1.0, kappa * t / (2.0 * m * s2));
    const cplx pref = std::pow(2.0 * M_PI * s2, -0.25) / std::sqrt(spread);
    const double v = p0 / m;
    ComplexField psi(grid.N);
    for (std::size_t j = 0; j < grid.N; ++j) {
        const double x = grid.q[j] - q0 - v * t;
        const cplx gauss = -x * x / (4.0 * s2 * spread);
        const double phase = p0 * (grid.q[j] - q0 - 0.5 * v * t) / kappa;
        psi[j] = pref * std::exp(gauss + cplx(0.0, phase));
    }
    return psi;
}

double free_gaussian_var_q(double sigma, double kappa, double m, double t) {
    const double tau = kappa * t / (2.0 * m * sigma * sigma);
    return sigma * sigma * (1.0 + tau * tau);
}

double free_gaussian_var_p(double sigma, double kappa) { return kappa * kappa / (4.0 * sigma * sigma); }

double free_gaussian_var_p_hj(double sigma, double kappa, double m, double t) {
    const double tau = kappa * t / (2.0 * m * sigma * sigma);
    return free_gaussian_var_p(sigma, kappa) * tau * tau / (1.0 + tau * tau);
}

RealField harmonic_ground_amplitude(const Grid& grid, double kappa, double m, double omega) {
    RealField R(grid.N);
    double norm = 0.0;
    for (std::size_t j = 0; j < grid.N; ++j) {
        R[j] = std::exp(-m * omega * grid.q[j] * grid.q[j] / (2.0 * kappa));
        norm += R[j] * R[j];
    }
    const double s = 1.0 / std::sqrt(norm * grid.dx);
    for (double& r : R) r *= s;
    return R;
}

}  // namespace hjs::analytic
