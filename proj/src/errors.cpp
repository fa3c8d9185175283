#include "hjs/errors.hpp"

namespace hjs {

NodeError::NodeError(std::size_t index, const std::string& what)
    : Error("node at grid index " + std::to_string(index) + ": " + what), index_(index) {}

NumericalBlowup::NumericalBlowup(std::size_t step, const std::string& what)
    : Error("numerical blow-up at step " + std::to_string(step) + ": " + what), step_(step) {}

}  // namespace hjs
