#include "hjs/solver_linear.hpp"

#include <algorithm>
#include <cmath>

#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"

namespace hjs {

namespace {

constexpr double kBlowupFactor = 1e6;

double max_abs(const ComplexField& psi) {
    double m = 0.0;
    for (const auto& z : psi) {
        const double a = std::abs(z);
        if (!std::isfinite(a)) return a;
        m = std::max(m, a);
    }
    return m;
}

}  // namespace

void LinearRunConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_final >= dt)) throw ConfigError("t_final must be >= dt");
    if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
    if (!(m > 0.0)) throw ConfigError("mass must be positive");
    require_nonzero(kappa);
}

ComplexField kinetic_factor(const Kappa& kappa, double m, double dt, const Grid& grid) {
    require_nonzero(kappa);
    const cplx kap = kappa.value();
    ComplexField K(grid.N);
    for (std::size_t j = 0; j < grid.N; ++j) {
        const double k = grid.k[j];
        K[j] = std::exp(cplx(0.0, -1.0) * kap * (k * k * dt / (2.0 * m)));
    }
    return K;
}

LinearPropagator::LinearPropagator(const Grid& grid, const Kappa& kappa, double m, const Potential& V, double dt)
    : grid_(grid), half_potential_(grid.N), kinetic_(kinetic_factor(kappa, m, dt, grid)) {
    const RealField v = evaluate_potential(V, grid);
    const cplx kap = kappa.value();
    for (std::size_t j = 0; j < grid.N; ++j) {
        half_potential_[j] = std::exp(cplx(0.0, -1.0) * v[j] * dt / (2.0 * kap));
    }
}

void LinearPropagator::step(ComplexField& psi, ComplexField& scratch) const {
    const std::size_t n = grid_.N;
    kernels::cmul_inplace(psi.data(), half_potential_.data(), n);
    grid_.fft->forward(psi.data(), scratch.data());
    kernels::cmul_inplace(scratch.data(), kinetic_.data(), n);
    grid_.fft->inverse(scratch.data(), psi.data());
    kernels::cmul_inplace(psi.data(), half_potential_.data(), n);
}

WaveField step(const WaveField& psi, const LinearRunConfig& config) {
    config.validate();
    require_length(psi.psi.size(), psi.grid, "step");
    const LinearPropagator prop(psi.grid, config.kappa, config.m, config.V, config.dt);
    WaveField out = psi;
    ComplexField scratch(psi.grid.N);
    prop.step(out.psi, scratch);
    if (!std::isfinite(max_abs(out.psi))) throw NumericalBlowup(0, "non-finite values after one step");
    return out;
}

Trajectory<WaveField> evolve(const WaveField& psi0, const LinearRunConfig& config) {
    config.validate();
    const TimeSchedule sched = make_schedule(config.dt, config.t_final, config.sample_every);
    const LinearPropagator prop(psi0.grid, config.kappa, config.m, config.V, sched.dt);

    Trajectory<WaveField> traj;
    traj.solver = "linear-strang";
    traj.metadata["kappa"] = config.kappa.str();
    traj.metadata["potential"] = config.V.describe();
    traj.metadata["kernels"] = kernels::active().name;
    traj.diagnostics["dt_effective"] = sched.dt;
    traj.diagnostics["steps"] = static_cast<double>(sched.steps);

    const double initial_max = max_abs(psi0.psi);
    if (!(initial_max > 0.0) || !std::isfinite(initial_max)) {
        throw DegenerateStateError("evolve: initial field is zero or non-finite");
    }

    ComplexField psi = psi0.psi;
    ComplexField scratch(psi0.grid.N);
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);
    double peak_growth = 1.0;
    for (std::size_t s = 1; s <= sched.steps; ++s) {
        prop.step(psi, scratch);
        const double mx = max_abs(psi);
        if (!std::isfinite(mx)) throw NumericalBlowup(s, "non-finite values in psi");
        if (mx > kBlowupFactor * initial_max) {
            throw NumericalBlowup(s, "max|psi| exceeded 1e6 times its initial value");
        }
        peak_growth = std::max(peak_growth, mx / initial_max);
        if (s % sched.sample_every == 0) {
            traj.times.push_back(sched.sample_time(s / sched.sample_every));
            traj.states.emplace_back(psi, psi0.grid);
        }
    }
    traj.diagnostics["max_amplitude_growth"] = peak_growth;
    return traj;
}

double time_reversal_defect(const WaveField& psi0, const LinearRunConfig& config) {
    LinearRunConfig cfg = config;
    cfg.sample_every = make_schedule(config.dt, config.t_final, config.sample_every).steps;
    auto conjugated = [](const WaveField& w) {
        WaveField c = w;
        for (auto& z : c.psi) z = std::conj(z);
        return c;
    };
    const WaveField forward = evolve(psi0, cfg).states.back();
    const WaveField back = conjugated(evolve(conjugated(forward), cfg).states.back());
    double worst = 0.0;
    for (std::size_t j = 0; j < psi0.psi.size(); ++j) worst = std::max(worst, std::abs(back.psi[j] - psi0.psi[j]));
    return worst / max_abs(psi0.psi);
}

}  // namespace hjs
