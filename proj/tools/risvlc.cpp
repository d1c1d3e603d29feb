// risvlc: command-line front end for scenario files.
//
//   risvlc eval    --scenario s.json [--out DIR]
//   risvlc sweep   --scenario s.json
//   risvlc design  --scenario s.json
//   risvlc bench   --scenario s.json
//   risvlc figures [--scenarios DIR]
//
// Output directory: --out, else $RIS_VLC_OUT, else ./out.
// Exit codes: 0 ok, 2 validation, 3 numerical, 4 I/O.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>

#include "CLI11.hpp"
#include "risvlc/risvlc.hpp"

namespace {

using risvlc::json;

struct Options {
    std::string scenario;
    std::string out;
    std::string format = "csv";
    std::string scenario_dir = RISVLC_SCENARIO_DIR;
    bool quiet = false;
};

std::filesystem::path output_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("RIS_VLC_OUT"); env && *env) return env;
    return "out";
}

void write_sidecar(const risvlc::Scenario& s, const std::filesystem::path& dir,
                   const std::vector<risvlc::Artifact>& artifacts) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json meta = {{"scenario", risvlc::to_json(s)}, {"mode", risvlc::to_string(s.mode())}, {"generated_utc", stamp}};
    json files = json::array();
    for (const auto& a : artifacts) files.push_back(a.path.filename().string());
    meta["artifacts"] = files;
    std::ofstream(dir / (s.name + ".meta.json")) << meta.dump(2) << '\n';
}

void run_one(const risvlc::Scenario& s, const Options& o) {
    risvlc::RunOptions ro;
    ro.out_dir = output_dir(o);
    const auto artifacts = risvlc::run(s, ro);
    write_sidecar(s, ro.out_dir, artifacts);
    if (!o.quiet)
        for (const auto& a : artifacts) std::cout << a.path.string() << ": " << a.summary << '\n';
}

int report(risvlc::ErrorKind kind, const std::string& message, const json& extra = json::object()) {
    const int code = risvlc::exit_code(kind);
    json rec = {{"error", risvlc::to_string(kind)}, {"exit_code", code}, {"message", message}};
    for (const auto& [k, v] : extra.items()) rec[k] = v;
    std::cerr << rec.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS beam-steering simulation and inverse design for VLC receivers"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_scenario) {
        auto* opt = sub->add_option("--scenario", o.scenario, "scenario JSON file");
        if (needs_scenario) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default $RIS_VLC_OUT or ./out)");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv"}));
        sub->add_flag("--quiet", o.quiet, "suppress per-artifact summaries");
    };
    std::map<std::string, risvlc::ScenarioMode> modes = {{"eval", risvlc::ScenarioMode::Eval},
                                                         {"sweep", risvlc::ScenarioMode::Sweep},
                                                         {"design", risvlc::ScenarioMode::Design},
                                                         {"bench", risvlc::ScenarioMode::Bench}};
    for (const auto& [name, mode] : modes) add_common(app.add_subcommand(name, "run a scenario in " + name + " mode"), true);
    auto* figures = app.add_subcommand("figures", "run every bundled figure and table scenario");
    add_common(figures, false);
    figures->add_option("--scenarios", o.scenario_dir, "directory holding the bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (figures->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            for (const auto& name : risvlc::bundled_figure_scenarios())
                run_one(risvlc::load_scenario(std::filesystem::path(o.scenario_dir) / (name + ".json")), o);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            if (!o.quiet) std::cout << "figures done in " << dt.count() << " s\n";
            return 0;
        }
        const auto s = risvlc::load_scenario(o.scenario);
        for (const auto& [name, mode] : modes) {
            if (!app.got_subcommand(name)) continue;
            if (s.mode() != mode)
                throw risvlc::ValidationError(std::vector<risvlc::Violation>{
                    {"$", "subcommand '" + name + "' given a " + std::string(risvlc::to_string(s.mode())) + " scenario"}});
        }
        run_one(s, o);
        return 0;
    } catch (const risvlc::ValidationError& e) {
        json v = json::array();
        for (const auto& x : e.violations) v.push_back({{"path", x.path}, {"message", x.message}});
        return report(e.kind(), e.what(), {{"violations", v}});
    } catch (const risvlc::Infeasible& e) {
        return report(e.kind(), e.what(), {{"reachable", {e.reachable_lo, e.reachable_hi}}});
    } catch (const risvlc::Error& e) {
        return report(e.kind(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return report(risvlc::ErrorKind::Io, e.what());
    } catch (const json::exception& e) {
        return report(risvlc::ErrorKind::Validation, e.what());
    }
}
