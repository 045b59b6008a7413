#pragma once

#include "loopfree/graph.hpp"
#include "loopfree/scenario.hpp"
#include "loopfree/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

namespace loopfree {

struct SweepOptions {
    std::vector<Policy> policies{Policy::Bp, Policy::Lfbp};
    std::optional<std::uint64_t> horizon;             // overrides the scenario
    std::optional<std::vector<std::uint64_t>> seeds;  // overrides the scenario
    std::size_t jobs = 1;
};

// Runs every (load, seed, policy) cell on a bounded worker pool. Results come
// back ordered by load, then seed, then policy, whatever the completion order.
std::vector<MetricsReport> sweep(const ScenarioConfig& config, const SweepOptions& options = {});

// One row per run. Columns: scenario,policy,load,seed,horizon,
// total_backlog_avg,real_backlog_avg,injected,delivered,delivered_dummy,
// final_backlog,reversal_epochs,reversed_links,topology_events,live_fraction,
// arrival_checksum
void write_summary_csv(std::ostream& out, const std::string& scenario, const std::vector<MetricsReport>& runs);

// Writes summary.csv, buckets.csv and reversals.csv into `dir`.
void write_sweep(const std::filesystem::path& dir, const std::string& scenario, const std::vector<MetricsReport>& runs);

struct ErBatchOptions {
    std::size_t samples = 1000;
    std::size_t min_nodes = 10;
    std::size_t max_nodes = 50;
    double p = 0.5;
    std::int64_t cap_min = 1;
    std::int64_t cap_max = 10;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
};

struct ErSample {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    Rational max_flow;
    Rational initial_flow;
    std::size_t iterations = 0;
    std::uint64_t bound = 0;
    bool bound_exact = false;
};

struct ErBatchResult {
    std::vector<ErSample> samples;
    double mean_iterations = 0.0;
    std::size_t max_iterations = 0;
    double max_bound_ratio = 0.0;  // iterations / bound over samples with a positive bound
};

// Nodes 1..n, each pair linked with probability p, integer capacities uniform
// in [cap_min, cap_max]; resampled until 1 and n are connected. Source 1,
// destination n.
Network random_er_network(std::size_t n, double p, std::int64_t cap_min, std::int64_t cap_max, std::mt19937_64& rng);

// Random priority permutation, every link from lower to higher priority.
DagOrientation random_initial_dag(std::shared_ptr<const Network> net, std::mt19937_64& rng);

// Generates ER instances, runs converge with lambda = f^max from a random
// initial DAG, and records iterations against the iteration bound.
ErBatchResult er_batch(const ErBatchOptions& options);

// Columns: index,seed,nodes,edges,max_flow,initial_flow,iterations,bound,bound_exact
void write_er_csv(std::ostream& out, const ErBatchResult& result);

}  // namespace loopfree
