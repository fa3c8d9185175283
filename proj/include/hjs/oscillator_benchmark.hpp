#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hjs/observables.hpp"
#include "hjs/state.hpp"

#include <json.hpp>

namespace hjs {

// Polynomially modified Gaussian R = (q^2 + eps^2) exp(-q^2 / 2 sigma^2),
// S = p0 q, in the oscillator with m = omega = 1.
struct BenchmarkParams {
    double epsilon = 0.4;
    double sigma = 0.4;
    double p0 = 1.0;
    Kappa kappa{};

    void validate() const;
};

EnsembleState initial_state(const BenchmarkParams& params, const Grid& grid);

// Initial variances from the explicit Gaussian integrals.
double initial_var_q(const BenchmarkParams& params);
double initial_var_p(const BenchmarkParams& params);

// Closed-form moment trajectory. var_p_hj and amp_grad follow the stated split
// (var_q0 sin^2 t and var_p0 cos^2 t); see the README for how that split
// compares with simulation.
MomentSet closed_form_moments(double t, const BenchmarkParams& params);

enum class SolverKind { linear, madelung };

struct BenchmarkSettings {
    double L = 20.0;
    std::size_t N = 1024;
    double dt = 1e-3;
    double t_final = 2.0 * M_PI;
    std::size_t n_samples = 64;  // intervals over [0, t_final]
    double node_floor = 1e-4;    // (R,S) solver only
    int filter_order = 8;
    double filter_strength = 36.0;
    // Tolerances: mean values absolute, variances and identity relative.
    double tol_mean_abs = 1e-5;
    double tol_var_rel = 1e-3;
    double tol_identity_rel = 1e-3;
    double tol_hj_split_rel = 1e-3;
    // Whether the HJ/amplitude split is part of pass/fail.
    bool track_hj_split = false;
};

struct QuantityError {
    std::string name;
    std::string kind;  // "abs" or "rel"
    double max_abs = 0.0;
    double max_rel = 0.0;
    double tolerance = 0.0;
    bool tracked = true;
    bool pass = true;
};

struct ComparisonReport {
    std::vector<double> times;
    std::vector<MomentSet> oracle;
    std::vector<MomentSet> simulated;
    std::vector<QuantityError> errors;
    bool pass = false;
    std::map<std::string, std::string> metadata;
    std::map<std::string, double> diagnostics;

    const QuantityError& error(const std::string& name) const;
    nlohmann::ordered_json to_json() const;
};

// Compare a simulated moment series against closed_form_moments. Relative
// errors use a denominator floored at 1e-3 of the quantity's largest oracle
// value.
ComparisonReport compare_to_oracle(const std::vector<double>& times, const std::vector<MomentSet>& simulated,
                                   const BenchmarkParams& params, const BenchmarkSettings& settings);

// Called for every stored sample; `rs` is set only for the (R,S) solver.
using SampleObserver =
    std::function<void(std::size_t index, double t, const WaveField& psi, const EnsembleState* rs)>;

ComparisonReport run_benchmark(const BenchmarkParams& params, SolverKind solver, const BenchmarkSettings& settings,
                               const SampleObserver& observer = {});

}  // namespace hjs
