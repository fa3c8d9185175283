#pragma once

#include "hjs/state.hpp"

namespace hjs::analytic {

// Free Gaussian with position variance sigma^2 at t = 0, mean momentum p0,
// centred at q0. Exact solution of the free equation for real kappa.
ComplexField free_gaussian(const Grid& grid, double sigma, double q0, double p0, double kappa, double m, double t);

// Position variance, and the HJ and amplitude parts of the momentum variance,
// of that packet.
double free_gaussian_var_q(double sigma, double kappa, double m, double t);
double free_gaussian_var_p(double sigma, double kappa);
double free_gaussian_var_p_hj(double sigma, double kappa, double m, double t);

// Oscillator ground state exp(-m omega q^2 / 2 kappa), normalised.
RealField harmonic_ground_amplitude(const Grid& grid, double kappa, double m, double omega);

}  // namespace hjs::analytic
