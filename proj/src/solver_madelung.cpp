#include "hjs/solver_madelung.hpp"

#include <algorithm>
#include <cmath>

#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"

namespace hjs {

namespace {

constexpr double kBlowupFactor = 1e6;

double max_of(const RealField& f) { return *std::max_element(f.begin(), f.end()); }

struct Support {
    std::size_t first = 0;
    std::size_t last = 0;
};

Support support_of(const RealField& R, double node_floor) {
    const double level = node_floor * max_of(R);
    Support s{R.size(), 0};
    for (std::size_t j = 0; j < R.size(); ++j) {
        if (R[j] > level) {
            if (s.first == R.size()) s.first = j;
            s.last = j;
        }
    }
    return s;
}

// Fourth-order one-sided slopes at the support edges.
double slope_left_end(const RealField& S, std::size_t i, double dx) {
    const std::size_t n = S.size();
    auto at = [&](std::size_t d) { return S[(i + d) % n]; };
    return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * dx);
}

double slope_right_end(const RealField& S, std::size_t i, double dx) {
    const std::size_t n = S.size();
    auto at = [&](std::size_t d) { return S[(i + n - d) % n]; };
    return (25.0 * at(0) - 48.0 * at(1) + 36.0 * at(2) - 16.0 * at(3) + 3.0 * at(4)) / (12.0 * dx);
}

double hermite(double a, double b, double Sa, double Sb, double sa, double sb, double x) {
    const double h = b - a;
    const double t = (x - a) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * Sa + (t3 - 2 * t2 + t) * h * sa + (-2 * t3 + 3 * t2) * Sb + (t3 - t2) * h * sb;
}

// Overwrites S on the vacuum arc (outside the support, across the periodic
// seam) with a C1 cubic bridge and returns the mean slope J/(2L) that makes
// S - c q periodic.
double fill_vacuum(const RealField& R, RealField& S, const Grid& g, double node_floor) {
    const Support sup = support_of(R, node_floor);
    const std::size_t n = g.N;
    const std::size_t i0 = sup.first, i1 = sup.last;
    const double sl0 = slope_left_end(S, i0, g.dx);
    const double sl1 = slope_right_end(S, i1, g.dx);
    const double a = g.q[i1];
    const double b = g.q[i0] + 2.0 * g.L;
    const double J = S[i1] - S[i0] + (b - a) * 0.5 * (sl0 + sl1);
    for (std::size_t j = i1 + 1; j < n; ++j) S[j] = hermite(a, b, S[i1], S[i0] + J, sl1, sl0, g.q[j]);
    for (std::size_t j = 0; j < i0; ++j) S[j] = hermite(a, b, S[i1], S[i0] + J, sl1, sl0, g.q[j] + 2.0 * g.L) - J;
    return J / (2.0 * g.L);
}

RealField filter_multiplier(const Grid& g, double strength, int order) {
    RealField f(g.N, 1.0);
    if (order <= 0) return f;
    const double kmax = g.k_max();
    for (std::size_t j = 0; j < g.N; ++j) f[j] = std::exp(-strength * std::pow(std::abs(g.k[j]) / kmax, order));
    return f;
}

void check_finite(const RealField& f, const char* what, std::size_t step) {
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!std::isfinite(f[j])) {
            throw NumericalBlowup(step, std::string("non-finite ") + what + " at grid index " + std::to_string(j));
        }
    }
}

}  // namespace

void MadelungRunConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_final >= dt)) throw ConfigError("t_final must be >= dt");
    if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
    if (!(m > 0.0)) throw ConfigError("mass must be positive");
    require_nonzero(kappa);
    if (kappa.im != 0.0) throw ConfigError("the (R,S) solver requires real kappa (im must be exactly 0)");
    if (!(node_floor > 0.0 && node_floor < 1e-3)) throw ConfigError("node_floor must lie in (0, 1e-3)");
    if (filter_order < 0 || !(filter_strength >= 0.0)) throw ConfigError("filter order/strength must be >= 0");
}

RealField quantum_potential(const RealField& R, const Kappa& kappa, double m, const Grid& grid, double node_floor) {
    require_length(R.size(), grid, "quantum_potential");
    const double rmax = max_of(R);
    if (!(rmax > 0.0)) throw DegenerateStateError("quantum_potential: R is identically zero");
    const RealField lap = derivative(std::span<const double>(R), grid, 2);
    const double level = node_floor * rmax;
    const double c = -kappa.re * kappa.re / (2.0 * m);
    RealField Q(R.size());
    for (std::size_t j = 0; j < R.size(); ++j) Q[j] = c * lap[j] / std::max(R[j], level);
    return Q;
}

ActionDerivatives action_derivatives(const RealField& R, const RealField& S, const Grid& grid, double node_floor) {
    require_length(R.size(), grid, "action_derivatives");
    require_length(S.size(), grid, "action_derivatives");
    if (!(max_of(R) > 0.0)) throw DegenerateStateError("R is identically zero");
    ActionDerivatives d;
    d.S_filled = S;
    d.trend = fill_vacuum(R, d.S_filled, grid, node_floor);
    RealField s(grid.N);
    for (std::size_t j = 0; j < grid.N; ++j) s[j] = d.S_filled[j] - d.trend * grid.q[j];
    PairDerivatives p = spectral_derivatives_pair(R, s, grid);
    d.Rq = std::move(p.f1);
    d.Rqq = std::move(p.f2);
    d.Sq = std::move(p.g1);
    for (double& v : d.Sq) v += d.trend;
    d.Sqq = std::move(p.g2);
    return d;
}

namespace {

// Rates from already-differentiated fields; shares the Laplacian of R with Q.
void rates(const RealField& R, const ActionDerivatives& d, const RealField& V, const MadelungRunConfig& cfg,
           const Grid& g, RealField& dR, RealField& dS) {
    const std::size_t n = g.N;
    RealField Q(n, 0.0);
    if (cfg.quantum_term) {
        const double level = cfg.node_floor * max_of(R);
        const double c = -cfg.kappa.re * cfg.kappa.re / (2.0 * cfg.m);
        for (std::size_t j = 0; j < n; ++j) Q[j] = c * d.Rqq[j] / std::max(R[j], level);
    }
    dR.resize(n);
    dS.resize(n);
    kernels::active().madelung_rates(R.data(), d.Rq.data(), d.Sq.data(), d.Sqq.data(), V.data(), Q.data(),
                                     1.0 / cfg.m, dR.data(), dS.data(), n);
}

class MadelungStepper {
public:
    MadelungStepper(const Grid& g, const MadelungRunConfig& cfg, double dt)
        : g_(g), cfg_(cfg), dt_(dt), V_(evaluate_potential(cfg.V, g)),
          filter_(filter_multiplier(g, cfg.filter_strength, cfg.filter_order)) {}

    void eval(const RealField& R, const RealField& S, RealField& dR, RealField& dS) const {
        const ActionDerivatives d = action_derivatives(R, S, g_, cfg_.node_floor);
        rates(R, d, V_, cfg_, g_, dR, dS);
    }

    // Returns the largest clipped negative R relative to max R.
    double advance(RealField& R, RealField& S) const {
        const std::size_t n = g_.N;
        RealField k1R, k1S, k2R, k2S, k3R, k3S, k4R, k4S;
        RealField tR(n), tS(n);
        eval(R, S, k1R, k1S);
        stage(R, S, k1R, k1S, 0.5 * dt_, tR, tS);
        eval(tR, tS, k2R, k2S);
        stage(R, S, k2R, k2S, 0.5 * dt_, tR, tS);
        eval(tR, tS, k3R, k3S);
        stage(R, S, k3R, k3S, dt_, tR, tS);
        eval(tR, tS, k4R, k4S);

        const double w1 = dt_ / 6.0, w2 = dt_ / 3.0;
        kernels::axpy(R.data(), w1, k1R.data(), n);
        kernels::axpy(R.data(), w2, k2R.data(), n);
        kernels::axpy(R.data(), w2, k3R.data(), n);
        kernels::axpy(R.data(), w1, k4R.data(), n);
        kernels::axpy(S.data(), w1, k1S.data(), n);
        kernels::axpy(S.data(), w2, k2S.data(), n);
        kernels::axpy(S.data(), w2, k3S.data(), n);
        kernels::axpy(S.data(), w1, k4S.data(), n);

        const double c = fill_vacuum(R, S, g_, cfg_.node_floor);
        if (cfg_.filter_order > 0) {
            for (std::size_t j = 0; j < n; ++j) S[j] -= c * g_.q[j];
            apply_real_multiplier_pair(R, S, filter_, g_);
            for (std::size_t j = 0; j < n; ++j) S[j] += c * g_.q[j];
        }
        const double rmax = max_of(R);
        double clip = 0.0;
        for (double& r : R) {
            if (r < 0.0) {
                clip = std::max(clip, -r / rmax);
                r = 0.0;
            }
        }
        return clip;
    }

private:
    static void stage(const RealField& R, const RealField& S, const RealField& kR, const RealField& kS, double h,
                      RealField& outR, RealField& outS) {
        outR = R;
        outS = S;
        kernels::axpy(outR.data(), h, kR.data(), R.size());
        kernels::axpy(outS.data(), h, kS.data(), S.size());
    }

    const Grid& g_;
    const MadelungRunConfig& cfg_;
    double dt_;
    RealField V_;
    RealField filter_;
};

void check_state(const EnsembleState& s) {
    if (!(max_of(s.R) > 0.0)) throw DegenerateStateError("(R,S) solver: R is identically zero");
}

// A point below the floor with support on both sides means a node has formed,
// which the Eulerian (R,S) description cannot carry through.
void check_nodes(const RealField& R, double node_floor) {
    const Support sup = support_of(R, node_floor);
    const double level = node_floor * max_of(R);
    for (std::size_t j = sup.first; j <= sup.last; ++j) {
        if (!(R[j] > level)) throw NodeError(j, "R fell below the node floor inside the support");
    }
}

double mass(const RealField& R, const Grid& g) {
    RealField r2(R.size());
    for (std::size_t j = 0; j < R.size(); ++j) r2[j] = R[j] * R[j];
    return integrate(r2, g);
}

}  // namespace

std::pair<RealField, RealField> rhs(const EnsembleState& state, const MadelungRunConfig& config) {
    config.validate();
    check_state(state);
    const MadelungStepper st(state.grid, config, config.dt);
    RealField dR, dS;
    st.eval(state.R, state.S, dR, dS);
    check_finite(dR, "dR/dt", 0);
    check_finite(dS, "dS/dt", 0);
    return {std::move(dR), std::move(dS)};
}

EnsembleState step_rk4(const EnsembleState& state, const MadelungRunConfig& config, double* clip) {
    config.validate();
    check_state(state);
    const MadelungStepper st(state.grid, config, config.dt);
    EnsembleState out = state;
    const double rmax0 = max_of(state.R);
    const double c = st.advance(out.R, out.S);
    if (clip != nullptr) *clip = c;
    check_finite(out.R, "R", 1);
    check_finite(out.S, "S", 1);
    if (max_of(out.R) > kBlowupFactor * rmax0) throw NumericalBlowup(1, "max R exceeded 1e6 times its initial value");
    return out;
}

Trajectory<EnsembleState> evolve(const EnsembleState& state0, const MadelungRunConfig& config) {
    config.validate();
    check_state(state0);
    const TimeSchedule sched = make_schedule(config.dt, config.t_final, config.sample_every);
    const Grid& g = state0.grid;
    const MadelungStepper st(g, config, sched.dt);

    Trajectory<EnsembleState> traj;
    traj.solver = config.quantum_term ? "madelung-rk4" : "hamilton-jacobi-rk4";
    traj.metadata["kappa"] = config.kappa.str();
    traj.metadata["potential"] = config.V.describe();
    traj.metadata["kernels"] = kernels::active().name;
    traj.diagnostics["dt_effective"] = sched.dt;
    traj.diagnostics["steps"] = static_cast<double>(sched.steps);

    const double rmax0 = max_of(state0.R);
    const double mass0 = mass(state0.R, g);
    check_nodes(state0.R, config.node_floor);

    RealField R = state0.R, S = state0.S;
    traj.times.push_back(0.0);
    traj.states.push_back(state0);
    double worst_clip = 0.0, worst_mass = 0.0;
    for (std::size_t s = 1; s <= sched.steps; ++s) {
        worst_clip = std::max(worst_clip, st.advance(R, S));
        check_finite(R, "R", s);
        check_finite(S, "S", s);
        if (max_of(R) > kBlowupFactor * rmax0) throw NumericalBlowup(s, "max R exceeded 1e6 times its initial value");
        check_nodes(R, config.node_floor);
        worst_mass = std::max(worst_mass, std::abs(mass(R, g) - mass0));
        if (s % sched.sample_every == 0) {
            traj.times.push_back(sched.sample_time(s / sched.sample_every));
            traj.states.emplace_back(R, S, g, state0.normalized);
        }
    }
    traj.diagnostics["max_clip_relative"] = worst_clip;
    traj.diagnostics["max_mass_drift"] = worst_mass;
    return traj;
}

}  // namespace hjs
