#include <doctest.h>

#include <cmath>

#include "hjs/analytic.hpp"
#include "hjs/embedding.hpp"
#include "hjs/errors.hpp"
#include "hjs/oscillator_benchmark.hpp"
#include "hjs/solver_linear.hpp"
#include "hjs/solver_madelung.hpp"
#include "support.hpp"

using namespace hjs;

namespace {

double mass(const EnsembleState& s) {
    RealField rho(s.grid.N);
    for (std::size_t j = 0; j < s.grid.N; ++j) rho[j] = s.R[j] * s.R[j];
    return integrate(rho, s.grid);
}

}  // namespace

TEST_CASE("quantum potential") {
    const Grid g = make_grid(10.0, 256);
    for (const double v : quantum_potential(RealField(g.N, 2.0), Kappa{}, 1.0, g, 1e-4)) CHECK(std::abs(v) < 1e-12);

    const RealField R = test::gaussian(g, 1.0);
    const RealField Q = quantum_potential(R, Kappa{}, 1.0, g, 1e-4);
    CHECK(Q[g.N / 2] == doctest::Approx(0.5).epsilon(1e-12));
    // -(1/2)(q^2 - 1) wherever R is well above the floor.
    for (std::size_t j = 0; j < g.N; ++j) {
        if (R[j] > 1e-3) CHECK(std::abs(Q[j] + 0.5 * (g.q[j] * g.q[j] - 1.0)) < 1e-8);
    }

    const RealField small = quantum_potential(R, Kappa{0.1, 0.0}, 1.0, g, 1e-4);
    const RealField tiny = quantum_potential(R, Kappa{1e-3, 0.0}, 1.0, g, 1e-4);
    for (std::size_t j = 0; j < g.N; ++j) {
        CHECK(small[j] == doctest::Approx(Q[j] / 100.0).epsilon(1e-14));
        CHECK(tiny[j] == doctest::Approx(Q[j] * 1e-6).epsilon(1e-14));
    }
}

TEST_CASE("rhs: static classical ensemble") {
    const Grid g = make_grid(10.0, 256);
    MadelungRunConfig cfg;
    cfg.quantum_term = false;
    const auto [dR, dS] = rhs(EnsembleState(test::gaussian(g, 1.0), RealField(g.N, 0.0), g), cfg);
    for (std::size_t j = 0; j < g.N; ++j) {
        CHECK(std::abs(dR[j]) < 1e-13);
        CHECK(std::abs(dS[j]) < 1e-13);
    }
}

TEST_CASE("rhs: ground state is stationary up to a uniform phase rate") {
    const Grid g = make_grid(10.0, 256);
    for (const double kappa : {1.0, 0.5}) {
        MadelungRunConfig cfg;
        cfg.kappa = Kappa{kappa, 0.0};
        cfg.V = Potential::harmonic(1.0, 1.0);
        const RealField R = analytic::harmonic_ground_amplitude(g, kappa, 1.0, 1.0);
        const auto [dR, dS] = rhs(EnsembleState(R, RealField(g.N, 0.0), g), cfg);
        const double top = *std::max_element(R.begin(), R.end());
        for (std::size_t j = 0; j < g.N; ++j) {
            CHECK(std::abs(dR[j]) < 1e-12);
            if (R[j] > 1e-3 * top) CHECK(std::abs(dS[j] + 0.5 * kappa) < 1e-8);
        }
    }
}

TEST_CASE("rhs: free advection without the quantum term") {
    const Grid g = make_grid(10.0, 256);
    const double p0 = 0.7;
    MadelungRunConfig cfg;
    cfg.quantum_term = false;
    RealField S(g.N);
    for (std::size_t j = 0; j < g.N; ++j) S[j] = p0 * g.q[j];
    const RealField R = test::gaussian(g, 1.0);
    const auto [dR, dS] = rhs(EnsembleState(R, S, g), cfg);
    const RealField Rq = derivative(R, g, 1);
    const double top = *std::max_element(R.begin(), R.end());
    for (std::size_t j = 0; j < g.N; ++j) {
        CHECK(std::abs(dR[j] + p0 * Rq[j]) < 1e-10);
        if (R[j] > 1e-4 * top) CHECK(std::abs(dS[j] + 0.5 * p0 * p0) < 1e-10);
    }
}

TEST_CASE("step_rk4 on stationary data") {
    const Grid g = make_grid(10.0, 256);
    MadelungRunConfig cfg;
    cfg.V = Potential::harmonic(1.0, 1.0);
    cfg.filter_order = 0;
    const RealField R = analytic::harmonic_ground_amplitude(g, 1.0, 1.0, 1.0);
    for (const double dt : {1e-2, 5e-3}) {
        cfg.dt = dt;
        const EnsembleState next = step_rk4(EnsembleState(R, RealField(g.N, 0.0), g), cfg);
        CHECK(test::max_abs_diff(next.R, R) < 1e-12);
        for (std::size_t j = 0; j < g.N; ++j) {
            if (R[j] > 1e-3) CHECK(std::abs(next.S[j] + 0.5 * dt) < 1e-10);
        }
    }
    // The filter's per-step change does not depend on dt.
    cfg.filter_order = 8;
    cfg.dt = 1e-2;
    const double filtered = test::max_abs_diff(step_rk4(EnsembleState(R, RealField(g.N, 0.0), g), cfg).R, R);
    CHECK(filtered < 1e-9);
}

TEST_CASE("step_rk4 local error is fourth order") {
    const Grid g = make_grid(20.0, 512);
    const EnsembleState s0 = test::coherent_state(g, 1.0, 0.5);
    MadelungRunConfig cfg;
    cfg.V = Potential::quartic(1.0, 1.0, 0.1);
    cfg.filter_order = 0;
    auto advance = [&](double dt, int n) {
        MadelungRunConfig c = cfg;
        c.dt = dt;
        EnsembleState s = s0;
        for (int i = 0; i < n; ++i) s = step_rk4(s, c);
        return s;
    };
    const double h = 0.02;
    const EnsembleState ref = advance(h / 64, 64);
    const double e1 = test::max_abs_diff(advance(h, 1).R, ref.R);
    const double e2 = test::max_abs_diff(advance(h / 2, 1).R, advance(h / 64, 32).R);
    CHECK(e2 / e1 == doctest::Approx(1.0 / 32.0).epsilon(0.3));  // local error O(dt^5)
    // Over a fixed interval the global error is O(dt^4).
    const double g1 = test::max_abs_diff(advance(h / 4, 4).R, ref.R);
    const double g2 = test::max_abs_diff(advance(h / 8, 8).R, ref.R);
    CHECK(g2 / g1 == doctest::Approx(1.0 / 16.0).epsilon(0.3));
}

TEST_CASE("degenerate and non-real inputs") {
    const Grid g = make_grid(10.0, 64);
    MadelungRunConfig cfg;
    CHECK_THROWS_AS(step_rk4(EnsembleState(RealField(g.N, 0.0), RealField(g.N, 0.0), g), cfg), DegenerateStateError);
    cfg.kappa = Kappa{1.0, 0.1};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("rigid transport without the quantum term") {
    const Grid g = make_grid(20.0, 1024);
    const double p0 = 1.0;
    const EnsembleState s0 = test::coherent_state(g, -2.0, p0);
    MadelungRunConfig cfg;
    cfg.quantum_term = false;
    cfg.dt = 1e-3;
    cfg.t_final = 1.0;
    cfg.sample_every = 1000;
    const auto traj = evolve(s0, cfg);
    const EnsembleState moved = test::coherent_state(g, -2.0 + p0, p0);
    CHECK(test::max_abs_diff(traj.states.back().R, moved.R) < 1e-6);
}

TEST_CASE("Madelung and linear densities agree on a short benchmark run") {
    const Grid g = make_grid(20.0, 1024);
    const EnsembleState s0 = initial_state(BenchmarkParams{}, g);
    MadelungRunConfig mc;
    mc.V = Potential::harmonic(1.0, 1.0);
    mc.dt = 5e-4;
    mc.t_final = M_PI / 4;
    mc.sample_every = 100;
    LinearRunConfig lc;
    lc.V = mc.V;
    lc.dt = mc.dt;
    lc.t_final = mc.t_final;
    lc.sample_every = mc.sample_every;
    const auto tm = evolve(s0, mc);
    const auto tl = evolve(embed(s0, Kappa{}), lc);
    REQUIRE(tm.states.size() == tl.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < tm.states.size(); ++i) {
        for (std::size_t j = 0; j < g.N; ++j) {
            worst = std::max(worst, std::abs(tm.states[i].R[j] * tm.states[i].R[j] - std::norm(tl.states[i].psi[j])));
        }
    }
    CHECK(worst < 1e-3);
    MESSAGE("L-inf density gap to pi/4: " << worst);
}

TEST_CASE("mass is conserved on smooth data") {
    const Grid g = make_grid(20.0, 1024);
    const EnsembleState s0 = test::coherent_state(g, 1.0, 0.5);
    MadelungRunConfig cfg;
    cfg.V = Potential::harmonic(1.0, 1.0);
    cfg.dt = 1e-3;
    cfg.t_final = 2.0 * M_PI;
    cfg.sample_every = 500;
    const auto traj = evolve(s0, cfg);
    const double m0 = mass(s0);
    for (const auto& s : traj.states) CHECK(std::abs(mass(s) - m0) < 1e-8);
    CHECK(traj.diagnostics.at("max_mass_drift") < 1e-8);
}

TEST_CASE("a node inside the support is an error") {
    const Grid g = make_grid(20.0, 1024);
    BenchmarkParams p;
    p.epsilon = 0.0;  // double zero at the origin
    MadelungRunConfig cfg;
    cfg.V = Potential::harmonic(1.0, 1.0);
    cfg.t_final = 0.01;
    cfg.sample_every = 1;
    CHECK_THROWS_AS(evolve(initial_state(p, g), cfg), NodeError);
}

TEST_CASE("classical limit") {
    const Grid g = make_grid(20.0, 1024);
    const Kappa k{1e-3, 0.0};
    const EnsembleState s0 = test::coherent_state(g, 0.0, 1.0);
    MadelungRunConfig on;
    on.kappa = k;
    on.dt = 1e-3;
    on.t_final = 1.0;
    on.sample_every = 100;
    MadelungRunConfig off = on;
    off.quantum_term = false;
    const auto a = evolve(s0, on), b = evolve(s0, off);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        for (std::size_t j = 0; j < g.N; ++j) {
            worst = std::max(worst, std::abs(a.states[i].R[j] * a.states[i].R[j] - b.states[i].R[j] * b.states[i].R[j]));
        }
    }
    CHECK(worst < 1e-4);
}
