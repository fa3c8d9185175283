#include "hjs/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "hjs/analytic.hpp"
#include "hjs/csv.hpp"
#include "hjs/embedding.hpp"
#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"
#include "hjs/observables.hpp"
#include "hjs/oscillator_benchmark.hpp"
#include "hjs/solver_linear.hpp"
#include "hjs/solver_madelung.hpp"
#include "hjs/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace hjs {

namespace {

// A scenario's outcome before it is wrapped into report.json.
struct Outcome {
    json checks = json::array();
    json metadata = json::object();
    json diagnostics = json::object();
    json extra = json::object();
    std::vector<std::string> artifacts;

    // `below`: pass when value < tolerance; otherwise value >= tolerance.
    void check(const std::string& name, double value, double tolerance, bool below, const std::string& note = "") {
        const bool ok = below ? (value < tolerance) : (value >= tolerance);
        json c = {{"name", name}, {"value", value}, {"tolerance", tolerance}, {"comparison", below ? "<" : ">="},
                  {"pass", ok}, {"tracked", true}};
        if (!note.empty()) c["note"] = note;
        checks.push_back(c);
    }
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const json& c) { return c["pass"].get<bool>(); });
    }
};

BenchmarkParams benchmark_params(const ScenarioConfig& c, Kappa kappa) {
    BenchmarkParams p;
    p.epsilon = c.epsilon;
    p.sigma = c.sigma;
    p.p0 = c.p0;
    p.kappa = kappa;
    return p;
}

BenchmarkSettings benchmark_settings(const ScenarioConfig& c) {
    BenchmarkSettings s;
    s.L = c.L;
    s.N = c.N;
    s.dt = c.dt;
    s.t_final = c.t_final;
    s.n_samples = c.n_samples;
    s.node_floor = c.node_floor;
    s.filter_order = c.filter_order;
    s.filter_strength = c.filter_strength;
    s.tol_mean_abs = c.tolerance("mean_abs");
    s.tol_var_rel = c.tolerance("var_rel");
    s.tol_identity_rel = c.tolerance("identity_rel");
    s.tol_hj_split_rel = c.tolerance("hj_split_rel");
    s.track_hj_split = c.track_hj_split;
    return s;
}

std::string time_tag(double t) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", t);
    return buf;
}

// fields_<t>.csv; R and S from the (R,S) state when given, otherwise by
// extraction, left empty where the phase is undefined.
void write_snapshot(const fs::path& dir, double t, const WaveField& psi, const Kappa& kappa, const EnsembleState* rs,
                    Outcome& out) {
    std::optional<RealField> R, S;
    if (rs != nullptr) {
        R = rs->R;
        S = rs->S;
    } else if (kappa.re != 0.0) {
        try {
            EnsembleState e = extract(psi, kappa);
            R = std::move(e.R);
            S = std::move(e.S);
        } catch (const NodeError&) {
        }
    }
    RealField born;
    try {
        born = born_density(psi, kappa.re != 0.0 ? kappa.theta() : 0.0);
    } catch (const NodeError&) {
        born.assign(psi.psi.size(), std::nan(""));
    }
    const std::string name = "fields_" + time_tag(t) + ".csv";
    csv::write_fields(dir / name, psi.grid, psi.psi, R, S, born);
    out.artifacts.push_back(name);
}

json benchmark_to_json(const ComparisonReport& rep) {
    json j = rep.to_json();
    j.erase("times");
    j.erase("oracle");
    j.erase("simulated");
    return j;
}

void add_benchmark_checks(const ComparisonReport& rep, Outcome& out, const std::string& prefix = "") {
    for (const auto& e : rep.errors) {
        const double value = e.kind == "rel" ? e.max_rel : e.max_abs;
        json c = {{"name", prefix + e.name + "_max_" + e.kind + "_error"},
                  {"value", value},
                  {"tolerance", e.tolerance},
                  {"comparison", "<"},
                  {"pass", e.tracked ? e.pass : true},
                  {"tracked", e.tracked}};
        if (!e.tracked) c["note"] = "reported only; not part of pass/fail (within tolerance: " +
                                    std::string(e.pass ? "yes" : "no") + ")";
        out.checks.push_back(c);
    }
}

// --- scenarios -------------------------------------------------------------

Outcome free_packet(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    const Grid g = make_grid(c.L, c.N);
    const Kappa kappa = c.kappa();
    const bool real = kappa.is_real();
    ComplexField psi0;
    if (real) {
        psi0 = analytic::free_gaussian(g, c.sigma, 0.0, c.p0, kappa.re, c.m, 0.0);
    } else {
        // Same envelope; the oracle only exists for real kappa.
        psi0 = analytic::free_gaussian(g, c.sigma, 0.0, 0.0, 1.0, c.m, 0.0);
        for (std::size_t j = 0; j < g.N; ++j) psi0[j] *= std::exp(cplx(0.0, 1.0) * c.p0 * g.q[j] / kappa.value());
    }
    LinearRunConfig lc;
    lc.dt = c.dt;
    lc.t_final = c.t_final;
    lc.sample_every = c.sample_every;
    lc.kappa = kappa;
    lc.m = c.m;
    lc.V = Potential::free_particle();
    const auto traj = evolve(WaveField(psi0, g), lc);

    std::vector<MomentSet> sim, orc;
    double linf = 0.0, norm_drift = 0.0;
    const double norm0 = moments(traj.states.front(), kappa).norm;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double t = traj.times[i];
        sim.push_back(moments(traj.states[i], kappa));
        norm_drift = std::max(norm_drift, std::abs(sim.back().norm - norm0));
        if (real) {
            const ComplexField exact = analytic::free_gaussian(g, c.sigma, 0.0, c.p0, kappa.re, c.m, t);
            for (std::size_t j = 0; j < g.N; ++j) linf = std::max(linf, std::abs(exact[j] - traj.states[i].psi[j]));
            MomentSet o;
            o.mean_q = c.p0 * t / c.m;
            o.mean_p = c.p0;
            o.var_q = analytic::free_gaussian_var_q(c.sigma, kappa.re, c.m, t);
            o.var_p_op = analytic::free_gaussian_var_p(c.sigma, kappa.re);
            o.var_p_hj = analytic::free_gaussian_var_p_hj(c.sigma, kappa.re, c.m, t);
            o.amp_grad = o.var_p_op - o.var_p_hj;
            o.uncertainty_product = std::sqrt(o.var_q * o.var_p_op);
            orc.push_back(o);
        }
        if (c.snapshot_every > 0 && i % c.snapshot_every == 0) write_snapshot(dir, t, traj.states[i], kappa, nullptr, out);
    }
    csv::write_series(dir / "series.csv", traj.times, sim, real ? &orc : nullptr);
    out.artifacts.push_back("series.csv");
    if (real) {
        out.check("state_linf_vs_closed_form", linf, c.tolerance("state_linf"), true);
        out.check("norm_drift", norm_drift, c.tolerance("norm_drift"), true);
    }
    out.diagnostics = traj.diagnostics;
    out.metadata["solver"] = traj.solver;
    return out;
}

Outcome harmonic_benchmark(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    const BenchmarkParams p = benchmark_params(c, c.kappa());
    const SolverKind solver = c.solver == "madelung" ? SolverKind::madelung : SolverKind::linear;
    SampleObserver obs;
    if (c.snapshot_every > 0) {
        obs = [&](std::size_t i, double t, const WaveField& psi, const EnsembleState* rs) {
            if (i % c.snapshot_every == 0) write_snapshot(dir, t, psi, p.kappa, rs, out);
        };
    }
    const ComparisonReport rep = run_benchmark(p, solver, benchmark_settings(c), obs);
    csv::write_series(dir / "series.csv", rep.times, rep.simulated, &rep.oracle);
    out.artifacts.push_back("series.csv");
    add_benchmark_checks(rep, out);
    out.extra["benchmark"] = benchmark_to_json(rep);
    out.extra["closed_form_initial"] = {{"var_q0", initial_var_q(p)}, {"var_p0", initial_var_p(p)}};
    for (const auto& [k, v] : rep.diagnostics) out.diagnostics[k] = v;
    for (const auto& [k, v] : rep.metadata) out.metadata[k] = v;
    return out;
}

Outcome quartic(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    const Grid g = make_grid(c.L, c.N);
    const Kappa kappa = c.kappa();
    const EnsembleState init = initial_state(benchmark_params(c, kappa), g);
    LinearRunConfig lc;
    lc.dt = c.dt;
    lc.t_final = c.t_final;
    lc.sample_every = c.sample_every;
    lc.kappa = kappa;
    lc.m = c.m;
    lc.V = Potential::quartic(c.m, c.omega, c.lambda);
    const auto traj = evolve(embed(init, kappa), lc);
    std::vector<MomentSet> sim;
    double norm_drift = 0.0, identity = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        sim.push_back(moments(traj.states[i], kappa));
        norm_drift = std::max(norm_drift, std::abs(sim.back().norm - sim.front().norm));
        identity = std::max(identity, sim.back().identity_residual());
        if (c.snapshot_every > 0 && i % c.snapshot_every == 0) {
            write_snapshot(dir, traj.times[i], traj.states[i], kappa, nullptr, out);
        }
    }
    csv::write_series(dir / "series.csv", traj.times, sim, nullptr);
    out.artifacts.push_back("series.csv");
    if (kappa.is_real()) out.check("norm_drift", norm_drift, c.tolerance("norm_drift"), true);
    out.check("moment_identity_max_rel_residual", identity, c.tolerance("identity_rel"), true);
    out.diagnostics = traj.diagnostics;
    out.metadata["solver"] = traj.solver;
    out.metadata["potential"] = lc.V.describe();
    return out;
}

Outcome kappa_sweep(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    const std::size_t jobs = c.kappa_values.size();
    std::vector<std::optional<ComparisonReport>> reports(jobs);
    std::vector<std::string> errors(jobs);
    std::vector<int> statuses(jobs, kExitPass);
    std::size_t workers = c.threads > 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, jobs);

    std::mutex m;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(m);
                if (next >= jobs) return;
                i = next++;
            }
            try {
                const BenchmarkParams p = benchmark_params(c, Kappa{c.kappa_values[i], 0.0});
                ComparisonReport rep = run_benchmark(p, SolverKind::linear, benchmark_settings(c));
                const fs::path sub = dir / ("kappa_" + csv::format(c.kappa_values[i]));
                fs::create_directories(sub);
                csv::write_series(sub / "series.csv", rep.times, rep.simulated, &rep.oracle);
                std::ofstream(sub / "report.json") << rep.to_json().dump(2) << '\n';
                reports[i] = std::move(rep);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                statuses[i] = exit_status_for(e);
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    json runs = json::array();
    for (std::size_t i = 0; i < jobs; ++i) {
        const std::string name = "kappa_" + csv::format(c.kappa_values[i]);
        if (!errors[i].empty()) {
            if (statuses[i] == kExitNumerical) throw NumericalBlowup(0, name + ": " + errors[i]);
            throw ConfigError(name + ": " + errors[i]);
        }
        runs.push_back({{"kappa", c.kappa_values[i]}, {"dir", name}, {"pass", reports[i]->pass}});
        add_benchmark_checks(*reports[i], out, name + ".");
        out.artifacts.push_back(name + "/series.csv");
    }
    // <q>(t) should not depend on kappa.
    double spread = 0.0;
    for (std::size_t i = 1; i < jobs; ++i) {
        for (std::size_t s = 0; s < reports[0]->times.size(); ++s) {
            spread = std::max(spread, std::abs(reports[i]->simulated[s].mean_q - reports[0]->simulated[s].mean_q));
        }
    }
    out.check("mean_q_spread_across_kappa", spread, c.tolerance("kappa_mean_q"), true);
    out.extra["runs"] = runs;
    out.metadata["threads"] = workers;
    return out;
}

Outcome theta_interference(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    const Grid g = make_grid(c.L, c.N);
    ComplexField a(g.N), b(g.N);
    const double w2 = c.packet_width * c.packet_width;
    for (std::size_t j = 0; j < g.N; ++j) {
        const double ql = g.q[j] + 0.5 * c.separation, qr = g.q[j] - 0.5 * c.separation;
        a[j] = std::exp(-ql * ql / (4.0 * w2));
        b[j] = std::exp(-qr * qr / (4.0 * w2)) * std::exp(cplx(0.0, c.relative_phase));
    }
    const WaveField psi1(a, g), psi2(b, g);
    const InterferenceReport rep = interference_modulation(psi1, psi2, c.theta_values);

    // Same ratio straight from the Born density, as a cross-check of the
    // cancellation-free form used in the report.
    ComplexField sum(g.N);
    for (std::size_t j = 0; j < g.N; ++j) sum[j] = a[j] + b[j];
    const RealField h0 = born_density(WaveField(sum, g), 0.0);
    double literal = 0.0;
    for (std::size_t t = 0; t < rep.thetas.size(); ++t) {
        const RealField ht = born_density(WaveField(sum, g), rep.thetas[t]);
        for (std::size_t i = 0; i < rep.window.size(); ++i) {
            const std::size_t j = rep.window[i];
            literal = std::max(literal, std::abs((ht[j] / h0[j] - 1.0) - rep.M[t][i]));
        }
    }

    std::vector<std::string> header = {"q", "phase"};
    for (double t : rep.thetas) header.push_back("F_" + csv::format(t));
    for (double t : rep.thetas) header.push_back("M_" + csv::format(t));
    std::vector<std::vector<std::string>> rows;
    double closed = 0.0, phase_max = 0.0;
    for (double ph : rep.phase) phase_max = std::max(phase_max, std::abs(ph));
    for (std::size_t i = 0; i < rep.window.size(); ++i) {
        std::vector<std::string> row = {csv::format(g.q[rep.window[i]]), csv::format(rep.phase[i])};
        for (const auto& F : rep.F) {
            row.push_back(csv::format(F[i]));
            closed = std::max(closed, std::abs(F[i] + 2.0 * rep.phase[i]));
        }
        for (const auto& M : rep.M) row.push_back(csv::format(M[i]));
        rows.push_back(std::move(row));
    }
    csv::write_table(dir / "profile.csv", header, rows);
    out.artifacts.push_back("profile.csv");

    out.check("linearity_spread", rep.linearity_spread, c.tolerance("linearity_spread"), true,
              "max over the central 80% of the window of the spread of F across theta, relative to max|F|");
    out.check("F_vs_minus_two_phase_rel", phase_max > 0 ? closed / (2.0 * phase_max) : 0.0,
              c.tolerance("closed_form_rel"), true);
    if (!std::isnan(rep.ratio_deviation)) {
        out.check("doubling_ratio_deviation", rep.ratio_deviation, c.tolerance("ratio_theta_multiple") * rep.ratio_theta,
                  true, "|M(2 theta)/M(theta) - 2| against tol.ratio_theta_multiple * theta");
    }
    out.diagnostics["literal_ratio_max_abs_diff"] = literal;
    out.diagnostics["window_points"] = rep.window.size();
    out.diagnostics["max_abs_phase"] = phase_max;
    return out;
}

Outcome equivalence_check(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    const BenchmarkParams p = benchmark_params(c, c.kappa());
    struct Gap {
        std::vector<double> times;
        std::vector<double> gap;
        std::vector<MomentSet> moments;
        std::map<std::string, double> diag;
        double max = 0.0;
    };
    auto run = [&](std::size_t N, double dt, std::size_t sample_every) {
        const Grid g = make_grid(c.L, N);
        const EnsembleState init = initial_state(p, g);
        MadelungRunConfig mc;
        mc.dt = dt;
        mc.t_final = c.t_final;
        mc.sample_every = sample_every;
        mc.kappa = p.kappa;
        mc.m = 1.0;
        mc.V = Potential::harmonic(1.0, 1.0);
        mc.quantum_term = c.quantum_term;
        mc.node_floor = c.node_floor;
        mc.filter_order = c.filter_order;
        mc.filter_strength = c.filter_strength;
        LinearRunConfig lc;
        lc.dt = dt;
        lc.t_final = c.t_final;
        lc.sample_every = sample_every;
        lc.kappa = p.kappa;
        lc.V = mc.V;
        const auto tm = evolve(init, mc);
        const auto tl = evolve(embed(init, p.kappa), lc);
        Gap r;
        r.times = tm.times;
        r.diag = tm.diagnostics;
        for (std::size_t i = 0; i < tm.states.size(); ++i) {
            double worst = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                worst = std::max(worst, std::abs(tm.states[i].R[j] * tm.states[i].R[j] - std::norm(tl.states[i].psi[j])));
            }
            r.gap.push_back(worst);
            r.max = std::max(r.max, worst);
            r.moments.push_back(moments(tm.states[i], p.kappa));
        }
        return r;
    };
    const Gap base = run(c.N, c.dt, c.sample_every);
    std::vector<MomentSet> orc;
    for (double t : base.times) orc.push_back(closed_form_moments(t, p));
    csv::write_series(dir / "series.csv", base.times, base.moments, &orc);
    out.artifacts.push_back("series.csv");

    std::vector<std::vector<std::string>> rows;
    std::optional<Gap> fine;
    if (c.refine) fine = run(2 * c.N, 0.5 * c.dt, 2 * c.sample_every);
    for (std::size_t i = 0; i < base.times.size(); ++i) {
        rows.push_back({csv::format(base.times[i]), csv::format(base.gap[i]), fine ? csv::format(fine->gap[i]) : ""});
    }
    csv::write_table(dir / "equivalence.csv", {"t", "linf_rho_gap", "linf_rho_gap_refined"}, rows);
    out.artifacts.push_back("equivalence.csv");

    out.check("linf_rho_gap", base.max, c.tolerance("linf_rho"), true);
    if (fine) {
        const double ratio = fine->max > 0.0 ? base.max / fine->max : INFINITY;
        out.check("refinement_gap_ratio", ratio, c.tolerance("refinement_ratio"), false,
                  "gap(N, dt) / gap(2N, dt/2)");
        out.diagnostics["linf_rho_gap_refined"] = fine->max;
    }
    for (const auto& [k, v] : base.diag) out.diagnostics["madelung_" + k] = v;
    return out;
}

Outcome admissibility_suite(const ScenarioConfig& c, const fs::path& dir) {
    Outcome out;
    std::vector<double> samples;
    for (int i = 0; i <= 40; ++i) samples.push_back(0.1 * std::pow(100.0, i / 40.0));
    std::vector<std::vector<std::string>> rows;
    double worst_perturbed = INFINITY;
    double unique_max = 0.0;
    bool first = true;
    for (const auto& cand : standard_candidates()) {
        const auto coef = admissibility_coefficient(cand, samples);
        double mx = 0.0;
        for (const auto& z : coef) mx = std::max(mx, std::abs(z));
        const double at1 = std::abs(admissibility_coefficient(cand, {1.0}).front());
        const cplx kc = cand.kappa_candidate();
        rows.push_back({cand.name, csv::format(cand.c1), csv::format(cand.c2), csv::format(kc.real()),
                        csv::format(kc.imag()), csv::format(mx), csv::format(at1), first ? "yes" : "no"});
        if (first) {
            unique_max = mx;
        } else {
            worst_perturbed = std::min(worst_perturbed, at1);
        }
        first = false;
    }
    csv::write_table(dir / "candidates.csv",
                     {"candidate", "c1", "c2", "kappa_re", "kappa_im", "max_abs_coefficient", "abs_coefficient_at_R1",
                      "expected_admissible"},
                     rows);
    out.artifacts.push_back("candidates.csv");
    out.check("admissible_max_abs_coefficient", unique_max, c.tolerance("coefficient_unique"), true,
              "A constant, B = R over R in [0.1, 10]");
    out.check("perturbed_min_abs_coefficient_at_R1", worst_perturbed, c.tolerance("coefficient_perturbed_min"), false);
    out.diagnostics["samples"] = samples.size();
    return out;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    f << j.dump(2) << '\n';
}

json software() { return {{"name", kSoftwareName}, {"version", kVersion}, {"kernels", kernels::active().name}}; }

}  // namespace

int exit_status_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
        dynamic_cast<const GridTooSmallError*>(&e) || dynamic_cast<const InputError*>(&e) ||
        dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const DomainError*>(&e)) {
        return kExitConfigError;
    }
    return kExitNumerical;
}

void write_error_report(const std::string& outdir, int exit_status, const std::string& message,
                        const std::string& scenario) {
    if (outdir.empty()) return;
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) return;
    json j;
    if (scenario.empty()) j["scenario"] = nullptr;
    else j["scenario"] = scenario;
    j["pass"] = false;
    j["exit_status"] = exit_status;
    j["error"] = message;
    j["software"] = software();
    write_json(fs::path(outdir) / "report.json", j);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    ScenarioResult res;
    const fs::path dir(cfg.outdir);
    json& j = res.report;
    j["scenario"] = cfg.scenario;
    j["pass"] = false;
    j["exit_status"] = kExitPass;
    j["error"] = nullptr;
    j["software"] = software();
    j["config"] = config_echo(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        fs::create_directories(dir);
        Outcome out;
        if (cfg.scenario == "free_packet") out = free_packet(cfg, dir);
        else if (cfg.scenario == "harmonic_benchmark") out = harmonic_benchmark(cfg, dir);
        else if (cfg.scenario == "quartic") out = quartic(cfg, dir);
        else if (cfg.scenario == "kappa_sweep") out = kappa_sweep(cfg, dir);
        else if (cfg.scenario == "theta_interference") out = theta_interference(cfg, dir);
        else if (cfg.scenario == "equivalence_check") out = equivalence_check(cfg, dir);
        else if (cfg.scenario == "admissibility_suite") out = admissibility_suite(cfg, dir);
        else throw ConfigError("unknown scenario '" + cfg.scenario + "'");

        j["pass"] = out.pass();
        res.exit_status = out.pass() ? kExitPass : kExitToleranceFailure;
        j["checks"] = out.checks;
        j["metadata"] = out.metadata;
        j["diagnostics"] = out.diagnostics;
        for (auto& [k, v] : out.extra.items()) j[k] = v;
        out.artifacts.push_back("report.json");
        j["artifacts"] = out.artifacts;
    } catch (const std::exception& e) {
        res.exit_status = exit_status_for(e);
        j["pass"] = false;
        j["error"] = e.what();
    }
    j["exit_status"] = res.exit_status;
    j["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::error_code ec;
    if (fs::is_directory(dir, ec)) write_json(dir / "report.json", j);
    return res;
}

}  // namespace hjs
