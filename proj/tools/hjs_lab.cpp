#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hjs/config.hpp"
#include "hjs/errors.hpp"
#include "hjs/kernels.hpp"
#include "hjs/scenarios.hpp"
#include "hjs/version.hpp"

namespace {

int run(const std::string& path, const std::string& outdir, const std::vector<std::string>& sets) {
    hjs::ScenarioConfig cfg;
    try {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw hjs::ConfigError("cannot open config file '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        cfg = hjs::parse_config(text.str());
        for (const auto& s : sets) hjs::apply_override(cfg, s);
        if (!outdir.empty()) cfg.outdir = outdir;
        hjs::validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "hjs-lab: " << path << ": " << e.what() << '\n';
        const std::string dir = !outdir.empty() ? outdir : cfg.outdir;
        hjs::write_error_report(dir, hjs::kExitConfigError, e.what(), cfg.scenario);
        return hjs::kExitConfigError;
    }

    const hjs::ScenarioResult res = hjs::run_scenario(cfg);
    const auto& r = res.report;
    if (!r["error"].is_null()) std::cerr << "hjs-lab: " << r["error"].get<std::string>() << '\n';
    if (r.contains("checks")) {
        for (const auto& c : r["checks"]) {
            const char* tag = !c["tracked"].get<bool>() ? "info " : c["pass"].get<bool>() ? "ok   " : "FAIL ";
            std::cout << tag << c["name"].get<std::string>() << " = "
                      << c["value"].dump() << " (" << c["comparison"].get<std::string>() << ' '
                      << c["tolerance"].dump() << ")\n";
        }
    }
    std::cout << cfg.scenario << ": " << (res.exit_status == 0 ? "pass" : "fail") << " (exit " << res.exit_status
              << ", " << cfg.outdir << ")\n";
    return res.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamilton-Jacobi-Schroedinger 1-D simulation lab"};
    app.require_subcommand(1);

    std::string config, outdir;
    std::vector<std::string> sets;
    auto* run_cmd = app.add_subcommand("run", "run the scenario described by a config file");
    run_cmd->add_option("config", config, "config file (key = value lines)")->required();
    run_cmd->add_option("--outdir", outdir, "output directory (overrides the config)");
    run_cmd->add_option("--set", sets, "override a config key, e.g. --set N=512")->take_all();

    auto* list_cmd = app.add_subcommand("list-scenarios", "print the available scenarios");
    auto* version_cmd = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hjs::kExitConfigError;
    }

    if (*list_cmd) {
        for (const auto& s : hjs::scenario_names()) std::cout << s << '\n';
        return 0;
    }
    if (*version_cmd) {
        std::cout << hjs::kSoftwareName << ' ' << hjs::kVersion << " (kernels: " << hjs::kernels::active().name
                  << ")\n";
        return 0;
    }
    return run(config, outdir, sets);
}
