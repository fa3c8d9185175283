#pragma once

#include "hjs/state.hpp"
#include "hjs/trajectory.hpp"

namespace hjs {

struct LinearRunConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t sample_every = 100;
    Kappa kappa{};
    double m = 1.0;
    Potential V{};

    void validate() const;
};

// exp(-i kappa k^2 dt / 2m) per mode.
ComplexField kinetic_factor(const Kappa& kappa, double m, double dt, const Grid& grid);

// Strang splitting P_half F^-1[K F[P_half psi]], P_half = exp(-i V dt/(2 kappa)).
class LinearPropagator {
public:
    LinearPropagator(const Grid& grid, const Kappa& kappa, double m, const Potential& V, double dt);

    // In place; `scratch` must have length N and is overwritten.
    void step(ComplexField& psi, ComplexField& scratch) const;
    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    ComplexField half_potential_;
    ComplexField kinetic_;
};

// Single step with config.dt. Throws NumericalBlowup(0) on non-finite output.
WaveField step(const WaveField& psi, const LinearRunConfig& config);

// Samples every sample_every steps, including t = 0 and t_final. The step is
// config.dt shrunk to fit (see make_schedule). Aborts with NumericalBlowup when
// max|psi| exceeds 1e6 times its initial value or turns non-finite.
Trajectory<WaveField> evolve(const WaveField& psi0, const LinearRunConfig& config);

// Evolve to t_final, conjugate, evolve for t_final again and conjugate back;
// returns max|result - psi0| / max|psi0|. For real kappa conjugation reverses
// time and this is round-off; for Im(kappa) != 0 it is not.
double time_reversal_defect(const WaveField& psi0, const LinearRunConfig& config);

}  // namespace hjs
