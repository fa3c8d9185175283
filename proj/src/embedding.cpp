#include "hjs/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "hjs/errors.hpp"
#include "hjs/solver_madelung.hpp"

namespace hjs {

WaveField embed(const EnsembleState& state, const Kappa& kappa) {
    require_nonzero(kappa);
    const double a = kappa.re, b = kappa.im, k2 = kappa.abs2();
    ComplexField psi(state.R.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double S = state.S[j];
        psi[j] = std::polar(state.R[j] * std::exp(S * b / k2), S * a / k2);
    }
    return WaveField(std::move(psi), state.grid);
}

EnsembleState extract(const WaveField& field, const Kappa& kappa, std::optional<std::size_t> anchor_index,
                      double anchor_S, double node_floor) {
    require_nonzero(kappa);
    if (kappa.re == 0.0) throw ParameterError("extract: Re(kappa) = 0, the phase carries no information on S");
    const double a = kappa.re, b = kappa.im, k2 = kappa.abs2();
    PhaseAnchor anchor;
    anchor.index = anchor_index;
    anchor.reference = anchor_S * a / k2;
    const UnwrappedPhase ph = unwrap_phase(field.psi, anchor, node_floor);
    const std::size_t n = field.psi.size();
    RealField R(n), S(n);
    for (std::size_t j = 0; j < n; ++j) {
        S[j] = k2 * ph.phi[j] / a;
        R[j] = std::abs(field.psi[j]) * std::exp(-S[j] * b / k2);
    }
    return EnsembleState(std::move(R), std::move(S), field.grid);
}

std::complex<double> EmbeddingCandidate::kappa_candidate() const {
    if (c1 == 0.0 && c2 == 0.0) throw ParameterError("candidate needs (c1, c2) != (0, 0)");
    return 1.0 / std::complex<double>(c1, -c2);
}

namespace {

// Step: nearest power of two to 1e-5 R, so R +- h is usually exact. The
// divisor is the realised spacing (x+ - x-), which makes the derivative of the
// identity map exactly 1.
double central_diff(const std::function<double(double)>& f, double x, double h) {
    const double xp = x + h, xm = x - h;
    return (f(xp) - f(xm)) / (xp - xm);
}

double richardson_derivative(const std::function<double(double)>& f, double x) {
    const double h = std::exp2(std::round(std::log2(1e-5 * x)));
    const double d1 = central_diff(f, x, h);
    const double d2 = central_diff(f, x, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

std::vector<cplx> admissibility_coefficient(const EmbeddingCandidate& cand, const std::vector<double>& R_samples) {
    std::vector<cplx> out;
    out.reserve(R_samples.size());
    for (double R : R_samples) {
        if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("admissibility_coefficient: samples must be positive");
        const double Ap = richardson_derivative(cand.A, R);
        const double Bp = richardson_derivative(cand.B, R);
        const double B = cand.B(R);
        out.emplace_back(R * Bp - B, B * R * Ap);
    }
    return out;
}

std::vector<EmbeddingCandidate> standard_candidates() {
    auto constant = [](double) { return 0.75; };
    auto identity = [](double r) { return r; };
    return {
        {"A=const, B=R", constant, identity, 1.0, 0.0},
        {"A=R, B=R", identity, identity, 1.0, 0.0},
        {"A=const, B=R^2", constant, [](double r) { return r * r; }, 1.0, 0.0},
        {"A=ln(R)/2, B=R", [](double r) { return 0.5 * std::log(r); }, identity, 1.0, 0.0},
        {"A=const, B=sqrt(R)", constant, [](double r) { return std::sqrt(r); }, 1.0, 0.0},
        {"A=const, B=R+0.3R^2", constant, [](double r) { return r + 0.3 * r * r; }, 1.0, 0.0},
        {"A=0.2R^2, B=R", [](double r) { return 0.2 * r * r; }, identity, 0.5, 0.25},
        {"A=const, B=exp(R)-1", constant, [](double r) { return std::expm1(r); }, 1.0, -0.5},
    };
}

namespace {

void require_uniform(const std::vector<double>& t) {
    if (t.size() < 3) throw InputError("residual checks need at least 3 time samples");
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            throw InputError("residual checks need uniformly spaced samples");
        }
    }
}

}  // namespace

std::vector<double> linear_residual(const Trajectory<WaveField>& traj, const Potential& V, const Kappa& kappa,
                                    double m) {
    require_nonzero(kappa);
    require_uniform(traj.times);
    if (traj.states.size() != traj.times.size()) throw InputError("trajectory times/states length mismatch");
    const Grid& g = traj.states.front().grid;
    const RealField v = evaluate_potential(V, g);
    const cplx kap = kappa.value();
    const cplx ik = cplx(0.0, 1.0) * kap;
    const cplx c2 = kap * kap / (2.0 * m);
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
        const ComplexField& prev = traj.states[i - 1].psi;
        const ComplexField& cur = traj.states[i].psi;
        const ComplexField& next = traj.states[i + 1].psi;
        const double two_h = traj.times[i + 1] - traj.times[i - 1];
        const ComplexField lap = derivative(std::span<const cplx>(cur), g, 2);
        double worst = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < g.N; ++j) {
            const cplx r = ik * (next[j] - prev[j]) / two_h + c2 * lap[j] - v[j] * cur[j];
            worst = std::max(worst, std::abs(r));
            scale = std::max(scale, std::abs(cur[j]));
        }
        out.push_back(worst / scale);
    }
    return out;
}

std::vector<std::pair<double, double>> madelung_residual(const Trajectory<EnsembleState>& traj, const Potential& V,
                                                         const Kappa& kappa, double m, double node_floor) {
    require_nonzero(kappa);
    if (!kappa.is_real()) throw ParameterError("madelung_residual: kappa must be real");
    require_uniform(traj.times);
    if (traj.states.size() != traj.times.size()) throw InputError("trajectory times/states length mismatch");
    const Grid& g = traj.states.front().grid;
    const RealField v = evaluate_potential(V, g);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
        const EnsembleState& prev = traj.states[i - 1];
        const EnsembleState& cur = traj.states[i];
        const EnsembleState& next = traj.states[i + 1];
        const double two_h = traj.times[i + 1] - traj.times[i - 1];
        const ActionDerivatives d = action_derivatives(cur.R, cur.S, g, node_floor);
        const RealField Q = quantum_potential(cur.R, kappa, m, g, node_floor);
        const double rmax = *std::max_element(cur.R.begin(), cur.R.end());
        double res_R = 0.0, res_S = 0.0;
        for (std::size_t j = 0; j < g.N; ++j) {
            if (!(cur.R[j] > node_floor * rmax)) continue;
            const double dRdt = (next.R[j] - prev.R[j]) / two_h;
            const double dSdt = (next.S[j] - prev.S[j]) / two_h;
            const double rR = dRdt + d.Rq[j] * d.Sq[j] / m + cur.R[j] * d.Sqq[j] / (2.0 * m);
            const double rS = dSdt + d.Sq[j] * d.Sq[j] / (2.0 * m) + v[j] + Q[j];
            res_R = std::max(res_R, std::abs(rR));
            res_S = std::max(res_S, std::abs(rS));
        }
        out.emplace_back(res_R, res_S);
    }
    return out;
}

}  // namespace hjs
