#include "hjs/trajectory.hpp"

#include <cmath>

#include "hjs/errors.hpp"

namespace hjs {

double TimeSchedule::sample_time(std::size_t i) const {
    if (i + 1 == samples()) return t_final;
    return static_cast<double>(i * sample_every) * dt;
}

TimeSchedule make_schedule(double dt_requested, double t_final, std::size_t sample_every) {
    if (!(dt_requested > 0.0) || !std::isfinite(dt_requested)) throw ConfigError("dt must be positive and finite");
    if (!(t_final >= dt_requested) || !std::isfinite(t_final)) throw ConfigError("t_final must be finite and >= dt");
    if (sample_every == 0) throw ConfigError("sample_every must be >= 1");
    TimeSchedule s;
    s.sample_every = sample_every;
    s.t_final = t_final;
    const double block = dt_requested * static_cast<double>(sample_every);
    // Tolerate t_final/dt landing a hair above an integer.
    const double blocks = std::ceil(t_final / block * (1.0 - 1e-12));
    s.steps = static_cast<std::size_t>(std::max(1.0, blocks)) * sample_every;
    s.dt = t_final / static_cast<double>(s.steps);
    return s;
}

}  // namespace hjs
