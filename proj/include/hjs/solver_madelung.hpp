#pragma once

#include <utility>

#include "hjs/state.hpp"
#include "hjs/trajectory.hpp"

namespace hjs {

struct MadelungRunConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t sample_every = 100;
    Kappa kappa{};  // must be real
    double m = 1.0;
    Potential V{};
    bool quantum_term = true;
    // Relative amplitude below which a point is vacuum (regularises Q and
    // bounds the support).
    double node_floor = 1e-4;
    // Exponential filter exp(-strength (|k|/k_max)^order) applied after each
    // step; order 0 disables it.
    double filter_strength = 36.0;
    int filter_order = 8;

    void validate() const;
};

// -(kappa^2/2m) R'' / max(R, node_floor max R), spectral Laplacian.
RealField quantum_potential(const RealField& R, const Kappa& kappa, double m, const Grid& grid, double node_floor);

// Spatial derivatives of S with the vacuum treated explicitly. S is only
// meaningful where R is above the floor; outside that support it is replaced
// by a cubic Hermite bridge across the periodic seam, and the remaining linear
// trend c (S is not periodic, e.g. S = p q) is removed before the spectral
// derivative and added back.
struct ActionDerivatives {
    RealField S_filled;
    double trend = 0.0;
    RealField Sq;
    RealField Sqq;
    RealField Rq;
    RealField Rqq;
};
ActionDerivatives action_derivatives(const RealField& R, const RealField& S, const Grid& grid, double node_floor);

std::pair<RealField, RealField> rhs(const EnsembleState& state, const MadelungRunConfig& config);

// One RK4 step followed by vacuum fill, optional filtering and the R >= 0 clip.
// `clip` receives the largest clipped magnitude relative to max R.
EnsembleState step_rk4(const EnsembleState& state, const MadelungRunConfig& config, double* clip = nullptr);

// Aborts with NodeError if R drops below the floor strictly inside the support,
// NumericalBlowup on non-finite values or max R above 1e6 times its start.
Trajectory<EnsembleState> evolve(const EnsembleState& state0, const MadelungRunConfig& config);

}  // namespace hjs
