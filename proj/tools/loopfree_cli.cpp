#include "loopfree/errors.hpp"
#include "loopfree/experiment.hpp"
#include "loopfree/scenario.hpp"
#include "loopfree/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

using namespace loopfree;

namespace {

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

int run_cmd(const std::string& scenario_path, const std::string& policy_name, std::optional<std::uint64_t> horizon,
            std::optional<std::uint64_t> seed, std::optional<double> load, const std::string& out_path) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    Policy policy = parse_policy(policy_name);
    double rho = load ? *load : cfg.loads.front();
    std::uint64_t s = seed ? *seed : cfg.seeds.front();
    MetricsReport report = run(make_sim_config(cfg, rho, s, policy), policy, horizon ? *horizon : cfg.horizon);

    std::ofstream file;
    std::ostream& out = open_or_stdout(out_path, file);
    write_metrics_csv(out, report);
    if (&out != &std::cout) write_summary_csv(std::cout, cfg.name, {report});
    return 0;
}

int sweep_cmd(const std::string& scenario_path, const std::vector<std::string>& policies,
              std::optional<std::uint64_t> horizon, std::optional<std::uint64_t> seed, const std::string& out_dir,
              std::size_t jobs) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    SweepOptions options;
    if (!policies.empty()) {
        options.policies.clear();
        for (const std::string& p : policies) options.policies.push_back(parse_policy(p));
    }
    options.horizon = horizon;
    if (seed) options.seeds = std::vector<std::uint64_t>{*seed};
    options.jobs = jobs;
    std::vector<MetricsReport> runs = sweep(cfg, options);
    if (out_dir.empty() || out_dir == "-") {
        write_summary_csv(std::cout, cfg.name, runs);
    } else {
        write_sweep(out_dir, cfg.name, runs);
        std::cerr << "wrote " << runs.size() << " runs to " << out_dir << "\n";
    }
    return 0;
}

void apply_er_config(const std::string& path, ErBatchOptions& options) {
    std::ifstream in(path);
    if (!in) throw ValidationError("--config", "cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path, e.what());
    }
    auto get = [&](const char* key, auto& field) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(field);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(key, e.what());
        }
    };
    get("samples", options.samples);
    get("min_nodes", options.min_nodes);
    get("max_nodes", options.max_nodes);
    get("p", options.p);
    get("cap_min", options.cap_min);
    get("cap_max", options.cap_max);
    get("seed", options.seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loop-free backpressure simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string policy = "lfbp";
    std::vector<std::string> policies;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<double> load;
    std::string out;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());

    auto* run = app.add_subcommand("run", "Simulate one scenario under one policy");
    run->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--policy", policy, "bp or lfbp")->check(CLI::IsMember({"bp", "lfbp"}));
    run->add_option("--horizon", horizon, "Slots to simulate");
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--load", load, "Load factor (default: first in scenario)");
    run->add_option("--out", out, "CSV output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Run every load and seed for both policies");
    sweep->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--policy", policies, "Restrict to these policies")->check(CLI::IsMember({"bp", "lfbp"}));
    sweep->add_option("--horizon", horizon, "Slots to simulate");
    sweep->add_option("--seed", seed, "Use this seed only");
    sweep->add_option("--out", out, "Output directory (default: summary to stdout)");
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    ErBatchOptions er;
    std::string er_config;
    auto* batch = app.add_subcommand("er-batch", "Link-reversal convergence over random graphs");
    batch->add_option("--config", er_config, "JSON file with batch settings")->check(CLI::ExistingFile);
    auto* samples_opt = batch->add_option("--samples", er.samples, "Number of graphs");
    auto* min_opt = batch->add_option("--min-nodes", er.min_nodes, "Smallest graph");
    auto* max_opt = batch->add_option("--max-nodes", er.max_nodes, "Largest graph");
    auto* p_opt = batch->add_option("--p", er.p, "Link probability");
    auto* cap_opt = batch->add_option("--cap-max", er.cap_max, "Largest capacity");
    auto* seed_opt = batch->add_option("--seed", er.seed, "Random seed");
    batch->add_option("--out", out, "CSV output file (default stdout)");
    batch->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("validate", "Check a scenario file");
    check->add_option("--scenario", scenario, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return run_cmd(scenario, policy, horizon, seed, load, out);
        if (*sweep) return sweep_cmd(scenario, policies, horizon, seed, out, jobs);
        if (*batch) {
            if (!er_config.empty()) {
                // command-line flags win over the file
                ErBatchOptions flags = er;
                apply_er_config(er_config, er);
                if (samples_opt->count()) er.samples = flags.samples;
                if (min_opt->count()) er.min_nodes = flags.min_nodes;
                if (max_opt->count()) er.max_nodes = flags.max_nodes;
                if (p_opt->count()) er.p = flags.p;
                if (cap_opt->count()) er.cap_max = flags.cap_max;
                if (seed_opt->count()) er.seed = flags.seed;
            }
            er.jobs = jobs;
            ErBatchResult result = er_batch(er);
            std::ofstream file;
            std::ostream& os = open_or_stdout(out, file);
            write_er_csv(os, result);
            std::cerr << "samples=" << result.samples.size() << " mean_iterations=" << result.mean_iterations
                      << " max_iterations=" << result.max_iterations << " max_bound_ratio=" << result.max_bound_ratio
                      << "\n";
            return 0;
        }
        if (*check) {
            ScenarioConfig cfg = load_scenario(scenario);
            std::cout << "ok: " << cfg.name << " (" << cfg.nodes.size() << " nodes, " << cfg.edges.size()
                      << " edges, " << cfg.commodities.size() << " commodities)\n";
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
