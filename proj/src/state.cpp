#include "hjs/state.hpp"

#include <cmath>
#include <sstream>

#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"
#include "hjs/phase.hpp"

namespace hjs {

double Kappa::theta() const {
    if (re == 0.0) throw ParameterError("theta = Im(kappa)/Re(kappa) is undefined for Re(kappa) = 0");
    return im / re;
}

std::string Kappa::str() const {
    std::ostringstream os;
    os.precision(17);
    os << re << (im < 0 ? "-" : "+") << std::abs(im) << "i";
    return os.str();
}

void require_nonzero(const Kappa& kappa) {
    if (kappa.re == 0.0 && kappa.im == 0.0) throw ParameterError("|kappa| = 0 is only reachable as a limit");
    if (!std::isfinite(kappa.re) || !std::isfinite(kappa.im)) throw ParameterError("kappa must be finite");
}

EnsembleState::EnsembleState(RealField R_, RealField S_, Grid grid_, bool normalized_)
    : R(std::move(R_)), S(std::move(S_)), grid(std::move(grid_)), normalized(normalized_) {
    require_length(R.size(), grid, "EnsembleState R");
    require_length(S.size(), grid, "EnsembleState S");
    for (std::size_t j = 0; j < R.size(); ++j) {
        if (!(R[j] >= 0.0)) throw DomainError("EnsembleState: R must be nonnegative (index " + std::to_string(j) + ")");
    }
}

WaveField::WaveField(ComplexField psi_, Grid grid_) : psi(std::move(psi_)), grid(std::move(grid_)) {
    require_length(psi.size(), grid, "WaveField psi");
}

Potential Potential::free_particle() { return Potential{}; }

Potential Potential::harmonic(double m, double omega) {
    if (!(m > 0.0) || !(omega >= 0.0)) throw ParameterError("harmonic potential needs m > 0 and omega >= 0");
    Potential V;
    V.kind = Kind::harmonic;
    V.m = m;
    V.omega = omega;
    return V;
}

Potential Potential::quartic(double m, double omega, double lambda) {
    Potential V = harmonic(m, omega);
    if (!std::isfinite(lambda)) throw ParameterError("quartic coupling must be finite");
    V.kind = Kind::quartic;
    V.lambda = lambda;
    return V;
}

Potential Potential::tabulated(RealField values) {
    Potential V;
    V.kind = Kind::tabulated;
    V.values = std::move(values);
    return V;
}

std::string Potential::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::free: os << "free"; break;
        case Kind::harmonic: os << "harmonic(m=" << m << ",omega=" << omega << ")"; break;
        case Kind::quartic: os << "quartic(m=" << m << ",omega=" << omega << ",lambda=" << lambda << ")"; break;
        case Kind::tabulated: os << "tabulated(" << values.size() << ")"; break;
    }
    return os.str();
}

RealField evaluate_potential(const Potential& V, const Grid& grid) {
    RealField out(grid.N, 0.0);
    switch (V.kind) {
        case Potential::Kind::free: break;
        case Potential::Kind::harmonic:
        case Potential::Kind::quartic:
            for (std::size_t j = 0; j < grid.N; ++j) {
                const double q = grid.q[j];
                out[j] = 0.5 * V.m * V.omega * V.omega * q * q;
                if (V.kind == Potential::Kind::quartic) out[j] += V.lambda * q * q * q * q;
            }
            break;
        case Potential::Kind::tabulated:
            require_length(V.values.size(), grid, "tabulated potential");
            out = V.values;
            break;
    }
    return out;
}

EnsembleState normalize(const EnsembleState& state) {
    RealField r2(state.R.size());
    for (std::size_t j = 0; j < r2.size(); ++j) r2[j] = state.R[j] * state.R[j];
    const double norm = integrate(r2, state.grid);
    if (!(norm > 0.0)) throw DegenerateStateError("normalize: R is identically zero");
    const double s = 1.0 / std::sqrt(norm);
    EnsembleState out = state;
    for (double& r : out.R) r *= s;
    out.normalized = true;
    return out;
}

WaveField normalize(const WaveField& field, double theta, const PhaseAnchor& anchor) {
    const std::size_t n = field.psi.size();
    RealField h(n);
    kernels::abs2(field.psi.data(), h.data(), n);
    if (theta != 0.0) {
        const UnwrappedPhase ph = unwrap_phase(field.psi, anchor);
        for (std::size_t j = 0; j < n; ++j) h[j] *= std::exp(-2.0 * theta * ph.phi[j]);
    }
    const double norm = integrate(h, field.grid);
    if (!(norm > 0.0)) throw DegenerateStateError("normalize: psi is identically zero");
    WaveField out = field;
    const double s = 1.0 / std::sqrt(norm);
    for (auto& z : out.psi) z *= s;
    return out;
}

}  // namespace hjs
