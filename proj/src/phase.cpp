#include "hjs/phase.hpp"

#include <cmath>

#include "hjs/errors.hpp"

namespace hjs {

std::size_t argmax_abs(std::span<const cplx> psi) {
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double v = std::norm(psi[j]);
        if (v > best_v) {
            best_v = v;
            best = j;
        }
    }
    return best;
}

UnwrappedPhase unwrap_phase(std::span<const cplx> psi, const PhaseAnchor& anchor, double node_floor) {
    const std::size_t n = psi.size();
    if (n == 0) throw ShapeError("unwrap_phase: empty field");

    const std::size_t peak = argmax_abs(psi);
    const double max_abs = std::abs(psi[peak]);
    if (!(max_abs > 0.0)) throw DegenerateStateError("unwrap_phase: field is identically zero");
    const double floor_abs = node_floor * max_abs;

    UnwrappedPhase out;
    out.first = n;
    out.last = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(psi[j]) > floor_abs) {
            if (out.first == n) out.first = j;
            out.last = j;
        }
    }
    for (std::size_t j = out.first; j <= out.last; ++j) {
        if (!(std::abs(psi[j]) > floor_abs)) {
            throw NodeError(j, "|psi| below the relative floor inside the support");
        }
    }

    out.anchor = anchor.index.value_or(peak);
    if (out.anchor >= n) throw ParameterError("unwrap_phase: anchor index out of range");
    if (out.anchor < out.first || out.anchor > out.last) {
        throw ParameterError("unwrap_phase: anchor index lies outside the support");
    }

    out.phi.assign(n, 0.0);
    auto& phi = out.phi;
    const double a0 = std::arg(psi[out.anchor]);
    phi[out.anchor] = a0 + 2.0 * M_PI * std::round((anchor.reference - a0) / (2.0 * M_PI));

    // Increment between neighbours taken from the ratio, which is exact in
    // (-pi, pi] and avoids differencing two principal values.
    auto step = [&](std::size_t from, std::size_t to) {
        const double d = std::arg(psi[to] * std::conj(psi[from]));
        if (std::abs(d) > kMaxPhaseIncrement) {
            throw NodeError(to, "unresolved phase jump of " + std::to_string(d) + " rad between neighbours");
        }
        phi[to] = phi[from] + d;
    };
    for (std::size_t j = out.anchor; j < out.last; ++j) step(j, j + 1);
    for (std::size_t j = out.anchor; j > out.first; --j) step(j, j - 1);
    for (std::size_t j = 0; j < out.first; ++j) phi[j] = phi[out.first];
    for (std::size_t j = out.last + 1; j < n; ++j) phi[j] = phi[out.last];
    return out;
}

}  // namespace hjs
