#pragma once

#include <string>
#include <vector>

#include "hjs/phase.hpp"
#include "hjs/state.hpp"
#include "hjs/trajectory.hpp"

namespace hjs {

struct MomentSet {
    double mean_q = 0.0;
    double mean_p = 0.0;
    double var_q = 0.0;
    double var_p_op = 0.0;
    double var_p_hj = 0.0;
    double amp_grad = 0.0;
    double uncertainty_product = 0.0;
    double norm = 1.0;

    // |var_p_op - var_p_hj - amp_grad| / var_p_op
    double identity_residual() const;
};

// |psi|^2 exp(-2 theta phi) with phi the unwrapped phase. theta = 0 needs no
// phase and tolerates nodes.
RealField born_density(const WaveField& psi, double theta, const PhaseAnchor& anchor = {},
                       double node_floor = kDefaultNodeFloor);

// int phi*^(1 - i theta) psi^(1 + i theta) dq through the unwrapped polar form.
cplx theta_inner_product(const WaveField& phi, const WaveField& psi, double theta, const PhaseAnchor& anchor_phi = {},
                         const PhaseAnchor& anchor_psi = {});

enum class Observable { q, p, q2, p2 };

// theta = 0: <psi, A psi>. Otherwise the Born-weighted local value
// int H (A psi)/psi dq, which reduces to the former at theta = 0. For real
// kappa the imaginary part is checked against 1e-10 and dropped.
cplx expectation(const WaveField& psi, const Kappa& kappa, Observable obs);

// Operator moments from spectral derivatives; the HJ part uses the phase
// gradient (|kappa|^2/a) Im(psi* psi')/|psi|^2 so no unwrap is needed for
// real kappa.
MomentSet moments(const WaveField& psi, const Kappa& kappa);
MomentSet moments(const EnsembleState& state, const Kappa& kappa);

// dS/dq / m, with the linear trend of S removed before the spectral derivative.
RealField velocity_field(const EnsembleState& state, double m, double node_floor = 1e-4);

// ||(q p - p q) psi - i kappa psi||_inf / ||psi||_inf over the central 80%.
double commutator_defect(const WaveField& psi, const Kappa& kappa);

// |<phi,psi>_theta + <psi,phi>_theta - (same at t=0)| per sample. Anchors sit
// at the initial argmax and follow the phase continuously in time.
std::vector<double> pseudo_unitarity_defect(const Trajectory<WaveField>& traj_phi,
                                            const Trajectory<WaveField>& traj_psi, double theta);

struct InterferenceReport {
    std::vector<double> thetas;           // nonzero values, as supplied
    std::vector<std::size_t> window;      // grid indices of the evaluation window
    std::vector<RealField> M;             // per theta, on the window
    std::vector<RealField> F;             // M / theta
    RealField phase;                      // unwrapped phase on the window
    double linearity_spread = 0.0;        // central 80%, relative to max|F|
    double ratio_deviation = 0.0;         // max |M(2t)/M(t) - 2| over doubling pairs
    double ratio_theta = 0.0;             // theta of the pair that set ratio_deviation
};

InterferenceReport interference_modulation(const WaveField& psi1, const WaveField& psi2,
                                           const std::vector<double>& theta_values);

}  // namespace hjs
