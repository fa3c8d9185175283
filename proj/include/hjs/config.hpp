#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hjs/state.hpp"

namespace hjs {

// Flat `key = value` configuration. Every key has a default except `scenario`;
// `outdir` may come from the command line instead. Numbers accept decimal and
// exponent notation plus the forms pi, 2pi, 2*pi, pi/4, 3*pi/4. Lists are
// comma separated. Tolerance overrides use `tol.<name>`.
struct ScenarioConfig {
    std::string scenario;
    std::string outdir;

    double L = 20.0;
    std::size_t N = 1024;
    double dt = 1e-3;
    double t_final = 0.0;  // scenario default when not given
    std::size_t sample_every = 100;
    std::size_t n_samples = 64;

    double kappa_re = 1.0;
    double kappa_im = 0.0;
    double m = 1.0;
    double omega = 1.0;
    double lambda = 0.1;
    double epsilon = 0.4;
    double sigma = 0.4;
    double p0 = 1.0;

    std::string solver = "linear";
    bool quantum_term = true;
    double node_floor = 1e-4;
    int filter_order = 8;
    double filter_strength = 36.0;
    bool refine = true;
    bool track_hj_split = false;

    std::vector<double> kappa_values{0.5, 1.0, 2.0};
    std::vector<double> theta_values{0.0, 1e-3, 2e-3};
    double separation = 3.0;
    double relative_phase = 1.2;
    double packet_width = 1.0;

    std::size_t threads = 0;
    std::size_t snapshot_every = 0;

    std::map<std::string, double> tolerances;
    std::set<std::string> explicit_keys;

    Kappa kappa() const { return {kappa_re, kappa_im}; }
    double tolerance(const std::string& name) const;
};

const std::vector<std::string>& scenario_names();
const std::map<std::string, double>& default_tolerances();

// Throws ConfigError with "line N: ..." on unknown keys, duplicates and
// malformed values; validate() runs at the end.
ScenarioConfig parse_config(const std::string& text);
// `key=value` as from --set; same rules as a config line.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);
// Scenario-specific defaults and cross-field checks.
void validate(ScenarioConfig& cfg);

// Effective configuration, one `key = value` per line, for report echoes.
std::map<std::string, std::string> config_echo(const ScenarioConfig& cfg);

double parse_number(const std::string& text);

}  // namespace hjs
