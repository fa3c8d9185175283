#include "hjs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjs/embedding.hpp"
#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"
#include "hjs/solver_madelung.hpp"

namespace hjs {

namespace {

constexpr double kImagTolerance = 1e-10;

double max_abs(const ComplexField& psi) {
    double m = 0.0;
    for (const auto& z : psi) m = std::max(m, std::abs(z));
    return m;
}

// Born weight and local values need the same mask: points carrying a phase.
std::vector<char> support_mask(const ComplexField& psi, double node_floor) {
    const double level = node_floor * max_abs(psi);
    std::vector<char> mask(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) mask[j] = std::abs(psi[j]) > level;
    return mask;
}

cplx inner_from_phases(const ComplexField& phi, const RealField& alpha, const ComplexField& psi,
                       const RealField& beta, double theta, const Grid& g) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < g.N; ++j) {
        const double a = std::abs(phi[j]), b = std::abs(psi[j]);
        if (a == 0.0 || b == 0.0) continue;
        const double mod = a * b * std::exp(-theta * (alpha[j] + beta[j]));
        const double arg = (beta[j] - alpha[j]) + theta * (std::log(b) - std::log(a));
        acc += std::polar(mod, arg);
    }
    return acc * g.dx;
}

void check_real(cplx value, const Kappa& kappa, const char* what) {
    if (kappa.is_real() && std::abs(value.imag()) > kImagTolerance * std::max(1.0, std::abs(value.real()))) {
        throw ConsistencyError(std::string("expectation of ") + what + " has imaginary part " +
                               std::to_string(value.imag()) + " for real kappa");
    }
}

}  // namespace

double MomentSet::identity_residual() const {
    return std::abs(var_p_op - var_p_hj - amp_grad) / std::abs(var_p_op);
}

RealField born_density(const WaveField& psi, double theta, const PhaseAnchor& anchor, double node_floor) {
    if (!std::isfinite(theta)) throw ParameterError("born_density: theta must be finite");
    const std::size_t n = psi.psi.size();
    RealField h(n);
    kernels::abs2(psi.psi.data(), h.data(), n);
    if (theta == 0.0) return h;
    const UnwrappedPhase ph = unwrap_phase(psi.psi, anchor, node_floor);
    for (std::size_t j = 0; j < n; ++j) h[j] *= std::exp(-2.0 * theta * ph.phi[j]);
    return h;
}

cplx theta_inner_product(const WaveField& phi, const WaveField& psi, double theta, const PhaseAnchor& anchor_phi,
                         const PhaseAnchor& anchor_psi) {
    if (!same_grid(phi.grid, psi.grid)) throw ShapeError("theta_inner_product: fields live on different grids");
    if (theta == 0.0) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < psi.psi.size(); ++j) acc += std::conj(phi.psi[j]) * psi.psi[j];
        return acc * psi.grid.dx;
    }
    const UnwrappedPhase a = unwrap_phase(phi.psi, anchor_phi);
    const UnwrappedPhase b = unwrap_phase(psi.psi, anchor_psi);
    return inner_from_phases(phi.psi, a.phi, psi.psi, b.phi, theta, psi.grid);
}

cplx expectation(const WaveField& psi, const Kappa& kappa, Observable obs) {
    require_nonzero(kappa);
    const double theta = kappa.theta();
    const Grid& g = psi.grid;
    const cplx kap = kappa.value();
    ComplexField a_psi(g.N);
    switch (obs) {
        case Observable::q:
            for (std::size_t j = 0; j < g.N; ++j) a_psi[j] = g.q[j] * psi.psi[j];
            break;
        case Observable::q2:
            for (std::size_t j = 0; j < g.N; ++j) a_psi[j] = g.q[j] * g.q[j] * psi.psi[j];
            break;
        case Observable::p: {
            const ComplexField d = derivative(std::span<const cplx>(psi.psi), g, 1);
            for (std::size_t j = 0; j < g.N; ++j) a_psi[j] = cplx(0.0, -1.0) * kap * d[j];
            break;
        }
        case Observable::p2: {
            const ComplexField d = derivative(std::span<const cplx>(psi.psi), g, 2);
            for (std::size_t j = 0; j < g.N; ++j) a_psi[j] = -kap * kap * d[j];
            break;
        }
    }
    cplx acc(0.0, 0.0);
    if (theta == 0.0) {
        for (std::size_t j = 0; j < g.N; ++j) acc += std::conj(psi.psi[j]) * a_psi[j];
    } else {
        const RealField h = born_density(psi, theta);
        const std::vector<char> mask = support_mask(psi.psi, kDefaultNodeFloor);
        for (std::size_t j = 0; j < g.N; ++j) {
            if (mask[j]) acc += h[j] * (a_psi[j] / psi.psi[j]);
        }
    }
    acc *= g.dx;
    static const char* names[] = {"q", "p", "q^2", "p^2"};
    check_real(acc, kappa, names[static_cast<int>(obs)]);
    if (kappa.is_real()) acc.imag(0.0);
    return acc;
}

MomentSet moments(const WaveField& field, const Kappa& kappa) {
    require_nonzero(kappa);
    const double theta = kappa.theta();
    const Grid& g = field.grid;
    const ComplexField& psi = field.psi;
    const std::size_t n = g.N;
    const cplx kap = kappa.value();
    const double a = kappa.re, b = kappa.im, k2 = kappa.abs2();

    const ComplexField d1 = derivative(std::span<const cplx>(psi), g, 1);
    const ComplexField d2 = derivative(std::span<const cplx>(psi), g, 2);
    const std::vector<char> mask = support_mask(psi, kDefaultNodeFloor);
    const RealField h = born_density(field, theta);
    const double norm = integrate(h, g);
    if (!(norm > 0.0)) throw DegenerateStateError("moments: zero Born norm");

    MomentSet out;
    out.norm = norm;
    double sq = 0.0, sq2 = 0.0;
    cplx sp(0.0, 0.0), sp2(0.0, 0.0);
    if (theta == 0.0) {
        RealField q2(n);
        for (std::size_t j = 0; j < n; ++j) q2[j] = g.q[j] * g.q[j];
        sq = kernels::weighted_abs2_sum(psi.data(), g.q.data(), n);
        sq2 = kernels::weighted_abs2_sum(psi.data(), q2.data(), n);
        for (std::size_t j = 0; j < n; ++j) {
            sp += std::conj(psi[j]) * (cplx(0.0, -1.0) * kap * d1[j]);
            sp2 += std::conj(psi[j]) * (-kap * kap * d2[j]);
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            if (!mask[j]) continue;
            sq += h[j] * g.q[j];
            sq2 += h[j] * g.q[j] * g.q[j];
            sp += h[j] * (cplx(0.0, -1.0) * kap * d1[j] / psi[j]);
            sp2 += h[j] * (-kap * kap * d2[j] / psi[j]);
        }
    }
    const double w = g.dx / norm;
    sp *= w;
    sp2 *= w;
    check_real(sp, kappa, "p");
    check_real(sp2, kappa, "p^2");
    out.mean_q = sq * w;
    out.var_q = sq2 * w - out.mean_q * out.mean_q;
    out.mean_p = sp.real();
    out.var_p_op = sp2.real() - out.mean_p * out.mean_p;

    double hj = 0.0, amp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!mask[j]) continue;
        const double r2 = std::norm(psi[j]);
        const cplx c = std::conj(psi[j]) * d1[j];
        const double dS = (k2 / a) * c.imag() / r2;
        const double dlnR = c.real() / r2 - dS * b / k2;
        const double rho = h[j] / norm;
        hj += rho * (dS - out.mean_p) * (dS - out.mean_p);
        amp += rho * dlnR * dlnR;
    }
    out.var_p_hj = hj * g.dx;
    // Re(kappa^2): the real part of the Born-weighted <p^2> carries a^2 - b^2.
    out.amp_grad = (a * a - b * b) * amp * g.dx;
    out.uncertainty_product = std::sqrt(std::max(0.0, out.var_q) * std::max(0.0, out.var_p_op));
    return out;
}

MomentSet moments(const EnsembleState& state, const Kappa& kappa) {
    return moments(embed(state, kappa), kappa);
}

RealField velocity_field(const EnsembleState& state, double m, double node_floor) {
    if (!(m > 0.0)) throw ParameterError("velocity_field: mass must be positive");
    ActionDerivatives d = action_derivatives(state.R, state.S, state.grid, node_floor);
    for (double& v : d.Sq) v /= m;
    return d.Sq;
}

double commutator_defect(const WaveField& field, const Kappa& kappa) {
    require_nonzero(kappa);
    const Grid& g = field.grid;
    const cplx kap = kappa.value();
    const cplx mi_k = cplx(0.0, -1.0) * kap;
    ComplexField qpsi(g.N);
    for (std::size_t j = 0; j < g.N; ++j) qpsi[j] = g.q[j] * field.psi[j];
    const ComplexField dpsi = derivative(std::span<const cplx>(field.psi), g, 1);
    const ComplexField dqpsi = derivative(std::span<const cplx>(qpsi), g, 1);
    const std::size_t lo = g.N / 10, hi = g.N - g.N / 10;
    double worst = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
        const cplx comm = g.q[j] * (mi_k * dpsi[j]) - mi_k * dqpsi[j];
        worst = std::max(worst, std::abs(comm - cplx(0.0, 1.0) * kap * field.psi[j]));
    }
    return worst / max_abs(field.psi);
}

namespace {

// Unwrapped phases of every sample, with the branch at a fixed anchor carried
// continuously from one sample to the next.
std::vector<RealField> track_phases(const Trajectory<WaveField>& traj) {
    std::vector<RealField> out;
    PhaseAnchor anchor;
    anchor.index = argmax_abs(traj.states.front().psi);
    anchor.reference = 0.0;
    for (const WaveField& s : traj.states) {
        UnwrappedPhase ph = unwrap_phase(s.psi, anchor);
        anchor.reference = ph.phi[*anchor.index];
        out.push_back(std::move(ph.phi));
    }
    return out;
}

}  // namespace

std::vector<double> pseudo_unitarity_defect(const Trajectory<WaveField>& traj_phi,
                                            const Trajectory<WaveField>& traj_psi, double theta) {
    if (traj_phi.states.size() != traj_psi.states.size() || traj_phi.times.size() != traj_psi.times.size() ||
        traj_phi.states.size() != traj_phi.times.size() || traj_phi.states.empty()) {
        throw InputError("pseudo_unitarity_defect: trajectories differ in length");
    }
    for (std::size_t i = 0; i < traj_phi.times.size(); ++i) {
        if (traj_phi.times[i] != traj_psi.times[i]) throw InputError("pseudo_unitarity_defect: sample times differ");
        if (!same_grid(traj_phi.states[i].grid, traj_psi.states[i].grid)) {
            throw InputError("pseudo_unitarity_defect: grids differ");
        }
    }
    if (traj_phi.metadata.count("kappa") && traj_psi.metadata.count("kappa") &&
        traj_phi.metadata.at("kappa") != traj_psi.metadata.at("kappa")) {
        throw InputError("pseudo_unitarity_defect: trajectories were run with different kappa");
    }
    const std::size_t ns = traj_phi.states.size();
    std::vector<RealField> pa, pb;
    if (theta != 0.0) {
        pa = track_phases(traj_phi);
        pb = track_phases(traj_psi);
    }
    auto balance = [&](std::size_t i) {
        const WaveField& f = traj_phi.states[i];
        const WaveField& p = traj_psi.states[i];
        if (theta == 0.0) return theta_inner_product(f, p, 0.0) + theta_inner_product(p, f, 0.0);
        return inner_from_phases(f.psi, pa[i], p.psi, pb[i], theta, f.grid) +
               inner_from_phases(p.psi, pb[i], f.psi, pa[i], theta, f.grid);
    };
    const cplx ref = balance(0);
    std::vector<double> out(ns);
    for (std::size_t i = 0; i < ns; ++i) out[i] = std::abs(balance(i) - ref);
    return out;
}

InterferenceReport interference_modulation(const WaveField& psi1, const WaveField& psi2,
                                           const std::vector<double>& theta_values) {
    if (!same_grid(psi1.grid, psi2.grid)) throw ShapeError("interference_modulation: grids differ");
    InterferenceReport rep;
    bool has_zero = false;
    for (double t : theta_values) {
        if (!std::isfinite(t) || std::abs(t) > 1e-2) throw InputError("theta values must satisfy |theta| <= 1e-2");
        if (t == 0.0) {
            has_zero = true;
        } else {
            rep.thetas.push_back(t);
        }
    }
    if (!has_zero || rep.thetas.size() < 2) {
        throw InputError("interference_modulation needs theta = 0 and at least two nonzero values");
    }

    const Grid& g = psi1.grid;
    ComplexField sum(g.N);
    for (std::size_t j = 0; j < g.N; ++j) sum[j] = psi1.psi[j] + psi2.psi[j];
    const UnwrappedPhase ph = unwrap_phase(sum);
    for (std::size_t j = ph.first; j <= ph.last; ++j) rep.window.push_back(j);
    const std::size_t len = rep.window.size();
    for (std::size_t j : rep.window) rep.phase.push_back(ph.phi[j]);

    // H_theta / H_0 - 1 = exp(-2 theta phi) - 1, evaluated without cancellation.
    for (double t : rep.thetas) {
        RealField M(len), F(len);
        for (std::size_t i = 0; i < len; ++i) {
            M[i] = std::expm1(-2.0 * t * rep.phase[i]);
            F[i] = M[i] / t;
        }
        rep.M.push_back(std::move(M));
        rep.F.push_back(std::move(F));
    }

    const std::size_t lo = len / 10, hi = len - len / 10;
    double fmax = 0.0, spread = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        double mean = 0.0;
        for (const auto& F : rep.F) mean += F[i];
        fmax = std::max(fmax, std::abs(mean / static_cast<double>(rep.F.size())));
    }
    for (std::size_t i = lo; i < hi; ++i) {
        double fmin = std::numeric_limits<double>::infinity(), fmx = -fmin;
        for (const auto& F : rep.F) {
            fmin = std::min(fmin, F[i]);
            fmx = std::max(fmx, F[i]);
        }
        spread = std::max(spread, fmx - fmin);
    }
    rep.linearity_spread = fmax > 0.0 ? spread / fmax : 0.0;

    rep.ratio_deviation = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t a = 0; a < rep.thetas.size(); ++a) {
        for (std::size_t b = 0; b < rep.thetas.size(); ++b) {
            if (std::abs(rep.thetas[b] - 2.0 * rep.thetas[a]) > 1e-12 * std::abs(rep.thetas[a])) continue;
            double dev = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                if (rep.M[a][i] == 0.0) continue;
                dev = std::max(dev, std::abs(rep.M[b][i] / rep.M[a][i] - 2.0));
            }
            if (std::isnan(rep.ratio_deviation) || dev > rep.ratio_deviation) {
                rep.ratio_deviation = dev;
                rep.ratio_theta = rep.thetas[a];
            }
        }
    }
    return rep;
}

}  // namespace hjs
