#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "hjs/grid.hpp"

namespace hjs {

// Relative amplitude threshold below which a phase is not considered defined.
inline constexpr double kDefaultNodeFloor = 1e-8;
// Largest accepted phase increment between neighbouring points of the support.
// Larger jumps mean the phase is not resolved (typically a node falling between
// grid points) and unwrapping is refused.
inline constexpr double kMaxPhaseIncrement = M_PI / 2.0;

// Branch selection: the unwrapped phase at `index` is the principal argument
// plus the multiple of 2 pi that lands closest to `reference`.
struct PhaseAnchor {
    std::optional<std::size_t> index;  // default: argmax |psi|
    double reference = 0.0;
};

struct UnwrappedPhase {
    RealField phi;
    // Support: first..last index with |psi| > floor * max|psi|. Outside it the
    // phase is held at the edge value.
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t anchor = 0;
};

// Sequential 1-D unwrap outward from the anchor. Throws NodeError for a point
// below the floor strictly inside the support, or an increment above
// kMaxPhaseIncrement.
UnwrappedPhase unwrap_phase(std::span<const cplx> psi, const PhaseAnchor& anchor = {},
                            double node_floor = kDefaultNodeFloor);

std::size_t argmax_abs(std::span<const cplx> psi);

}  // namespace hjs
