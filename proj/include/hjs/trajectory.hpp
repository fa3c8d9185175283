#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace hjs {

// Fixed-step schedule actually used by a run. The requested dt is shrunk so
// that an integer number of steps, a multiple of sample_every, lands exactly
// on t_final.
struct TimeSchedule {
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t sample_every = 1;
    double t_final = 0.0;

    std::size_t samples() const { return steps / sample_every + 1; }
    double sample_time(std::size_t i) const;
};

TimeSchedule make_schedule(double dt_requested, double t_final, std::size_t sample_every);

template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::string solver;
    std::map<std::string, std::string> metadata;
    std::map<std::string, double> diagnostics;
};

}  // namespace hjs
