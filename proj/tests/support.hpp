#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "hjs/grid.hpp"
#include "hjs/state.hpp"

namespace hjs::test {

inline double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const ComplexField& a) {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
}

inline RealField gaussian(const Grid& g, double sigma, double q0 = 0.0) {
    RealField r(g.N);
    for (std::size_t j = 0; j < g.N; ++j) r[j] = std::exp(-(g.q[j] - q0) * (g.q[j] - q0) / (2.0 * sigma * sigma));
    return r;
}

// Displaced oscillator ground state (m = omega = kappa = 1) moving with p0.
inline EnsembleState coherent_state(const Grid& g, double q0, double p0) {
    RealField R(g.N), S(g.N);
    for (std::size_t j = 0; j < g.N; ++j) {
        const double x = g.q[j] - q0;
        R[j] = std::exp(-0.5 * x * x);
        S[j] = p0 * g.q[j];
    }
    return normalize(EnsembleState(R, S, g));
}

// Smooth, strictly positive amplitude that decays to round-off well inside
// [-L, L) for L = 20, with an action of mixed polynomial/trig shape.
inline EnsembleState random_smooth_state(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double q0 = -1.0 + 2.0 * u(rng);
    const double s = 0.7 + 0.6 * u(rng);
    const double bump = 0.4 * u(rng), bump_k = 0.5 + u(rng), bump_ph = 6.0 * u(rng);
    const double p = -1.5 + 3.0 * u(rng), c2 = -0.3 + 0.6 * u(rng), c_s = 0.5 * u(rng);
    RealField R(g.N), S(g.N);
    for (std::size_t j = 0; j < g.N; ++j) {
        const double x = g.q[j] - q0;
        R[j] = std::exp(-x * x / (2.0 * s * s)) * (1.0 + bump * std::sin(bump_k * x + bump_ph));
        S[j] = p * g.q[j] + c2 * x * x + c_s * std::sin(g.q[j]);
    }
    return normalize(EnsembleState(R, S, g));
}

}  // namespace hjs::test
