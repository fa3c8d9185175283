#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hjs/phase.hpp"
#include "hjs/state.hpp"
#include "hjs/trajectory.hpp"

namespace hjs {

// psi = R exp(i S / kappa). With kappa = a + ib: |psi| = R exp(S b/|kappa|^2),
// arg psi = S a/|kappa|^2.
WaveField embed(const EnsembleState& state, const Kappa& kappa);

// Inverse of embed. The anchor picks the 2 pi kappa branch of S: S at
// anchor_index is the representative closest to anchor_S. Points outside the
// support (|psi| <= floor max|psi|) are vacuum; S there is held at the edge
// value.
EnsembleState extract(const WaveField& field, const Kappa& kappa, std::optional<std::size_t> anchor_index = {},
                      double anchor_S = 0.0, double node_floor = kDefaultNodeFloor);

// g = c1 S + A(R), f = B(R) exp(c2 S); kappa_candidate = 1/(c1 - i c2).
struct EmbeddingCandidate {
    std::string name;
    std::function<double(double)> A;
    std::function<double(double)> B;
    double c1 = 1.0;
    double c2 = 0.0;

    std::complex<double> kappa_candidate() const;
};

// i B R A' + R B' - B at each sample, derivatives by Richardson-extrapolated
// central differences.
std::vector<cplx> admissibility_coefficient(const EmbeddingCandidate& cand, const std::vector<double>& R_samples);

// The admissible candidate (A constant, B = R) and a fixed set of perturbations.
std::vector<EmbeddingCandidate> standard_candidates();

// ||i kappa dpsi/dt + (kappa^2/2m) psi'' - V psi||_inf / ||psi||_inf at every
// interior sample, time derivative by centred difference.
std::vector<double> linear_residual(const Trajectory<WaveField>& traj, const Potential& V, const Kappa& kappa,
                                    double m);

// Sup-norm residuals of the R and S equations where R > node_floor max R.
std::vector<std::pair<double, double>> madelung_residual(const Trajectory<EnsembleState>& traj, const Potential& V,
                                                         const Kappa& kappa, double m, double node_floor);

}  // namespace hjs
