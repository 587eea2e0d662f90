#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causal/metrics.hpp"
#include "causal/netsim.hpp"
#include "causal/oracle.hpp"
#include "causal/scenario_file.hpp"

namespace fs = std::filesystem;
using namespace causal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitLiveness = 2;
constexpr int kExitConfig = 64;

struct RunOutput {
    RunResult result;
    Verdict verdict;
    RunMetrics metrics;
};

RunOutput execute(const Scenario& scenario, EngineKind engine,
                  Tick tick_limit) {
    Simulator sim(scenario.config, scenario.processes, engine);
    RunOutput out;
    out.result = sim.run(scenario.script, tick_limit);
    out.verdict = check(out.result.trace);
    out.metrics =
        analyze(out.result.trace, out.result.stats, out.result.quiescent);
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
}

int write_outputs(const RunOutput& run, const fs::path& dir,
                  const std::string& run_id) {
    fs::create_directories(dir);
    write_file(dir / "trace.txt", run.result.trace.serialize());
    write_file(dir / "verdict.txt", run.verdict.serialize());
    write_file(dir / "metrics.csv", to_csv(run.metrics, run_id));
    if (!run.verdict.violations.empty()) {
        return kExitViolation;
    }
    if (!run.result.quiescent) {
        return kExitLiveness;
    }
    return run.verdict.ok ? kExitOk : kExitViolation;
}

fs::path default_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) {
        return flag_value;
    }
    if (const char* env = std::getenv("CAUSAL_OUT_DIR")) {
        return env;
    }
    return "out";
}

double mean_of(const std::vector<Tick>& xs) {
    if (xs.empty()) {
        return 0.0;
    }
    return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

std::string residency_plot(
    const std::vector<std::pair<std::string, RunMetrics>>& runs) {
    std::vector<std::pair<std::string, double>> bars;
    double top = 1.0;
    for (const auto& [engine, metrics] : runs) {
        std::vector<Tick> residencies;
        for (const MessageMetric& mm : metrics.per_message) {
            if (auto r = mm.residency()) {
                residencies.push_back(*r);
            }
        }
        double mean = mean_of(residencies);
        top = std::max(top, mean);
        bars.emplace_back(engine, mean);
    }
    const int width = 120 * static_cast<int>(bars.size()) + 60;
    const int height = 260;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n"
        << "<text x=\"10\" y=\"20\">mean send-buffer residency (ticks)"
        << "</text>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        int h = static_cast<int>(180.0 * bars[i].second / top);
        int x = 60 + 120 * static_cast<int>(i);
        svg << "<rect x=\"" << x << "\" y=\"" << (220 - h)
            << "\" width=\"80\" height=\"" << h << "\" fill=\"#4477aa\"/>\n"
            << "<text x=\"" << x << "\" y=\"240\">" << bars[i].first << ' '
            << static_cast<std::uint64_t>(bars[i].second) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal delivery protocol simulator"};
    app.require_subcommand(1);

    std::string scenario_ref;
    std::string out_flag;
    std::string engine_flag;
    std::string engines_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<Tick> tick_limit_flag;

    CLI::App* cmd_run = app.add_subcommand("run", "run one scenario");
    cmd_run->add_option("scenario", scenario_ref, "builtin name, random(...) "
                        "spec, or JSON file")->required();
    cmd_run->add_option("--out", out_flag, "output directory");
    cmd_run->add_option("--seed", seed_flag, "override the network seed");
    cmd_run->add_option("--tick-limit", tick_limit_flag,
                        "override the tick limit");
    cmd_run->add_option("--engine", engine_flag,
                        "basic|sps_optimal|multicast|mf|cykas");

    CLI::App* cmd_compare =
        app.add_subcommand("compare", "run one scenario under several engines");
    cmd_compare->add_option("scenario", scenario_ref)->required();
    cmd_compare->add_option("--engines", engines_flag, "comma-separated list")
        ->required();
    cmd_compare->add_option("--out", out_flag, "output directory");
    cmd_compare->add_option("--seed", seed_flag, "override the network seed");
    cmd_compare->add_option("--tick-limit", tick_limit_flag,
                            "override the tick limit");

    app.add_subcommand("list-scenarios", "print known scenario names");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("list-scenarios")) {
        for (const std::string& name : builtin_scenario_names()) {
            std::cout << name << '\n';
        }
        std::cout << "random(seed,n,messages,none|light|heavy)\n"
                  << "random_mcast(seed,n,messages,none|light|heavy)\n";
        return kExitOk;
    }

    Scenario scenario;
    try {
        scenario = load_scenario(scenario_ref);
        if (seed_flag) {
            scenario.config.seed = *seed_flag;
        }
        if (tick_limit_flag) {
            scenario.tick_limit = *tick_limit_flag;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (app.got_subcommand("run")) {
            EngineKind engine = scenario.engine;
            if (!engine_flag.empty()) {
                engine = engine_kind_from_name(engine_flag);
            }
            RunOutput run = execute(scenario, engine, scenario.tick_limit);
            fs::path dir = default_out_dir(out_flag);
            int code = write_outputs(run, dir, engine_kind_name(engine));
            std::cout << scenario.name << " engine=" << engine_kind_name(engine)
                      << " quiescent=" << (run.result.quiescent ? 1 : 0)
                      << " violations=" << run.verdict.violations.size()
                      << " end_tick=" << run.result.end_tick << '\n';
            return code;
        }
        // compare
        std::vector<std::string> engines;
        std::istringstream list(engines_flag);
        std::string item;
        while (std::getline(list, item, ',')) {
            engines.push_back(item);
        }
        if (engines.empty()) {
            std::cerr << "error: no engines given\n";
            return kExitConfig;
        }
        fs::path dir = default_out_dir(out_flag);
        fs::create_directories(dir);
        int worst = kExitOk;
        std::ostringstream combined;
        std::vector<std::pair<std::string, RunMetrics>> all_metrics;
        for (const std::string& name : engines) {
            EngineKind engine = engine_kind_from_name(name);
            RunOutput run = execute(scenario, engine, scenario.tick_limit);
            int code = write_outputs(run, dir / name, name);
            worst = std::max(worst, code);
            combined << to_csv(run.metrics, name);
            all_metrics.emplace_back(name, run.metrics);
            std::cout << scenario.name << " engine=" << name
                      << " quiescent=" << (run.result.quiescent ? 1 : 0)
                      << " violations=" << run.verdict.violations.size()
                      << '\n';
        }
        write_file(dir / "compare.csv", combined.str());
        write_file(dir / "residency.svg", residency_plot(all_metrics));
        return worst;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
