#include "hjs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "hjs/errors.hpp"

namespace hjs {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_plain(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::size_t to_count(double v, const char* key) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
        throw ConfigError(std::string(key) + " must be a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& v, const char* key) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(std::string(key) + " expects on/off (got '" + v + "')");
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item)));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    auto num = [](double ScenarioConfig::*f) {
        return [f](ScenarioConfig& c, const std::string& v) { c.*f = parse_number(v); };
    };
    auto count = [](std::size_t ScenarioConfig::*f, const char* key) {
        return [f, key](ScenarioConfig& c, const std::string& v) { c.*f = to_count(parse_number(v), key); };
    };
    auto flag = [](bool ScenarioConfig::*f, const char* key) {
        return [f, key](ScenarioConfig& c, const std::string& v) { c.*f = to_bool(v, key); };
    };
    static const std::map<std::string, Setter> table = {
        {"scenario", [](ScenarioConfig& c, const std::string& v) { c.scenario = v; }},
        {"outdir", [](ScenarioConfig& c, const std::string& v) { c.outdir = v; }},
        {"L", num(&ScenarioConfig::L)},
        {"N", count(&ScenarioConfig::N, "N")},
        {"dt", num(&ScenarioConfig::dt)},
        {"t_final", num(&ScenarioConfig::t_final)},
        {"sample_every", count(&ScenarioConfig::sample_every, "sample_every")},
        {"n_samples", count(&ScenarioConfig::n_samples, "n_samples")},
        {"kappa_re", num(&ScenarioConfig::kappa_re)},
        {"kappa_im", num(&ScenarioConfig::kappa_im)},
        {"m", num(&ScenarioConfig::m)},
        {"omega", num(&ScenarioConfig::omega)},
        {"lambda", num(&ScenarioConfig::lambda)},
        {"epsilon", num(&ScenarioConfig::epsilon)},
        {"sigma", num(&ScenarioConfig::sigma)},
        {"p0", num(&ScenarioConfig::p0)},
        {"solver", [](ScenarioConfig& c, const std::string& v) {
             if (v != "linear" && v != "madelung") throw ConfigError("solver must be linear or madelung");
             c.solver = v;
         }},
        {"quantum_term", flag(&ScenarioConfig::quantum_term, "quantum_term")},
        {"node_floor", num(&ScenarioConfig::node_floor)},
        {"filter_order", [](ScenarioConfig& c, const std::string& v) {
             c.filter_order = static_cast<int>(to_count(parse_number(v), "filter_order"));
         }},
        {"filter_strength", num(&ScenarioConfig::filter_strength)},
        {"refine", flag(&ScenarioConfig::refine, "refine")},
        {"track_hj_split", flag(&ScenarioConfig::track_hj_split, "track_hj_split")},
        {"kappa_values", [](ScenarioConfig& c, const std::string& v) { c.kappa_values = to_list(v); }},
        {"theta_values", [](ScenarioConfig& c, const std::string& v) { c.theta_values = to_list(v); }},
        {"separation", num(&ScenarioConfig::separation)},
        {"relative_phase", num(&ScenarioConfig::relative_phase)},
        {"packet_width", num(&ScenarioConfig::packet_width)},
        {"threads", count(&ScenarioConfig::threads, "threads")},
        {"snapshot_every", count(&ScenarioConfig::snapshot_every, "snapshot_every")},
    };
    return table;
}

void assign(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key.rfind("tol.", 0) == 0) {
        const std::string name = key.substr(4);
        if (!default_tolerances().count(name)) throw ConfigError("unknown tolerance '" + name + "'");
        const double v = parse_number(value);
        if (!(v > 0.0)) throw ConfigError("tolerance " + name + " must be positive");
        cfg.tolerances[name] = v;
    } else {
        auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
        it->second(cfg, value);
    }
    cfg.explicit_keys.insert(key);
}

void split_assignment(const std::string& line, std::string& key, std::string& value) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key");
    if (value.empty()) throw ConfigError("empty value for '" + key + "'");
}

void require_finite(double v, const char* key) {
    if (!std::isfinite(v)) throw ConfigError(std::string(key) + " must be finite");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

}  // namespace

double parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    if (parse_plain(s, v)) {
        if (!std::isfinite(v)) throw ConfigError("number must be finite (got '" + s + "')");
        return v;
    }
    // [a][*]pi[/b]
    const auto p = s.find("pi");
    if (p != std::string::npos) {
        std::string pre = trim(s.substr(0, p));
        std::string post = trim(s.substr(p + 2));
        double a = 1.0, b = 1.0;
        if (!pre.empty() && pre.back() == '*') pre = trim(pre.substr(0, pre.size() - 1));
        if (pre == "-") {
            a = -1.0;
        } else if (!pre.empty() && !parse_plain(pre, a)) {
            throw ConfigError("cannot parse number '" + s + "'");
        }
        if (!post.empty()) {
            if (post.front() != '/' || !parse_plain(trim(post.substr(1)), b) || b == 0.0) {
                throw ConfigError("cannot parse number '" + s + "'");
            }
        }
        return a * M_PI / b;
    }
    throw ConfigError("cannot parse number '" + s + "'");
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"free_packet",        "harmonic_benchmark", "quartic",
                                                   "kappa_sweep",        "theta_interference", "equivalence_check",
                                                   "admissibility_suite"};
    return names;
}

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> tol = {
        {"mean_abs", 1e-5},          {"var_rel", 1e-3},          {"identity_rel", 1e-3},
        {"hj_split_rel", 1e-3},      {"state_linf", 1e-8},       {"norm_drift", 1e-10},
        {"kappa_mean_q", 1e-6},      {"linf_rho", 1e-3},         {"refinement_ratio", 3.0},
        {"linearity_spread", 1e-2},  {"ratio_theta_multiple", 10.0}, {"closed_form_rel", 1e-2},
        {"coefficient_unique", 1e-10}, {"coefficient_perturbed_min", 0.1},
    };
    return tol;
}

double ScenarioConfig::tolerance(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it != tolerances.end()) return it->second;
    auto d = default_tolerances().find(name);
    if (d == default_tolerances().end()) throw ConfigError("no tolerance named " + name);
    return d->second;
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    std::set<std::string> seen;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        try {
            std::string key, value;
            split_assignment(line, key, value);
            if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
            assign(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (cfg.scenario.empty()) throw ConfigError("missing required key 'scenario'");
    return cfg;
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    try {
        std::string key, value;
        split_assignment(assignment, key, value);
        cfg.explicit_keys.erase(key);
        if (key.rfind("tol.", 0) == 0) cfg.tolerances.erase(key.substr(4));
        assign(cfg, key, value);
    } catch (const ConfigError& e) {
        throw ConfigError("--set " + assignment + ": " + e.what());
    }
}

void validate(ScenarioConfig& cfg) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
        throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    }
    if (cfg.outdir.empty()) throw ConfigError("missing required key 'outdir' (or pass --outdir)");
    for (auto [v, k] : {std::pair{cfg.L, "L"}, {cfg.dt, "dt"}, {cfg.t_final, "t_final"}, {cfg.kappa_re, "kappa_re"},
                        {cfg.kappa_im, "kappa_im"}, {cfg.m, "m"}, {cfg.omega, "omega"}, {cfg.lambda, "lambda"},
                        {cfg.epsilon, "epsilon"}, {cfg.sigma, "sigma"}, {cfg.p0, "p0"}, {cfg.node_floor, "node_floor"},
                        {cfg.separation, "separation"}, {cfg.relative_phase, "relative_phase"},
                        {cfg.packet_width, "packet_width"}, {cfg.filter_strength, "filter_strength"}}) {
        require_finite(v, k);
    }
    if (!(cfg.L > 0.0)) throw ConfigError("L must be positive");
    if (cfg.N < 8 || (cfg.N & (cfg.N - 1)) != 0) {
        throw ConfigError("N must be a power of two >= 8 (got " + std::to_string(cfg.N) + ")");
    }
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (cfg.sample_every < 1) throw ConfigError("sample_every must be >= 1");
    if (cfg.n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (cfg.kappa_re == 0.0 && cfg.kappa_im == 0.0) throw ConfigError("kappa must be nonzero");
    if (!(cfg.m > 0.0)) throw ConfigError("m must be positive");
    if (!(cfg.omega >= 0.0)) throw ConfigError("omega must be >= 0");
    if (!(cfg.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(cfg.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
    if (!(cfg.node_floor > 0.0 && cfg.node_floor < 1e-3)) throw ConfigError("node_floor must lie in (0, 1e-3)");
    if (!(cfg.packet_width > 0.0)) throw ConfigError("packet_width must be positive");

    if (!cfg.explicit_keys.count("t_final")) {
        if (cfg.scenario == "free_packet") cfg.t_final = 1.0;
        else if (cfg.scenario == "equivalence_check") cfg.t_final = M_PI / 4.0;
        else cfg.t_final = 2.0 * M_PI;
    }
    if (!(cfg.t_final >= cfg.dt)) throw ConfigError("t_final must be >= dt");

    const bool uses_madelung = cfg.scenario == "equivalence_check" ||
                               (cfg.scenario == "harmonic_benchmark" && cfg.solver == "madelung");
    if (uses_madelung && cfg.kappa_im != 0.0) {
        throw ConfigError("scenario " + cfg.scenario + " runs the (R,S) solver, which requires real kappa (kappa_im = 0)");
    }
    if (cfg.scenario == "kappa_sweep") {
        for (double k : cfg.kappa_values) {
            if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("kappa_values must be positive reals");
        }
    }
    if (cfg.scenario == "theta_interference") {
        const auto& th = cfg.theta_values;
        const bool zero = std::find(th.begin(), th.end(), 0.0) != th.end();
        const auto nonzero = std::count_if(th.begin(), th.end(), [](double t) { return t != 0.0; });
        if (!zero || nonzero < 2) throw ConfigError("theta_values must contain 0 and at least two nonzero values");
        for (double t : th) {
            if (std::abs(t) > 1e-2) throw ConfigError("theta_values must satisfy |theta| <= 1e-2");
        }
    }
}

std::map<std::string, std::string> config_echo(const ScenarioConfig& c) {
    std::map<std::string, std::string> e = {
        {"scenario", c.scenario},
        {"outdir", c.outdir},
        {"L", fmt(c.L)},
        {"N", std::to_string(c.N)},
        {"dt", fmt(c.dt)},
        {"t_final", fmt(c.t_final)},
        {"sample_every", std::to_string(c.sample_every)},
        {"n_samples", std::to_string(c.n_samples)},
        {"kappa_re", fmt(c.kappa_re)},
        {"kappa_im", fmt(c.kappa_im)},
        {"m", fmt(c.m)},
        {"omega", fmt(c.omega)},
        {"lambda", fmt(c.lambda)},
        {"epsilon", fmt(c.epsilon)},
        {"sigma", fmt(c.sigma)},
        {"p0", fmt(c.p0)},
        {"solver", c.solver},
        {"quantum_term", c.quantum_term ? "on" : "off"},
        {"node_floor", fmt(c.node_floor)},
        {"filter_order", std::to_string(c.filter_order)},
        {"filter_strength", fmt(c.filter_strength)},
        {"refine", c.refine ? "on" : "off"},
        {"track_hj_split", c.track_hj_split ? "on" : "off"},
        {"kappa_values", fmt_list(c.kappa_values)},
        {"theta_values", fmt_list(c.theta_values)},
        {"separation", fmt(c.separation)},
        {"relative_phase", fmt(c.relative_phase)},
        {"packet_width", fmt(c.packet_width)},
        {"threads", std::to_string(c.threads)},
        {"snapshot_every", std::to_string(c.snapshot_every)},
    };
    for (const auto& [k, v] : default_tolerances()) e["tol." + k] = fmt(c.tolerance(k));
    return e;
}

}  // namespace hjs
