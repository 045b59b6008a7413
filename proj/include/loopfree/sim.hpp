#pragma once

#include "loopfree/graph.hpp"
#include "loopfree/lfbp.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace loopfree {

enum class Policy { Bp, Lfbp };

std::string to_string(Policy policy);
Policy parse_policy(const std::string& name);

struct CommoditySpec {
    NodeId source = 0;
    NodeId destination = 0;
    double rate = 0.0;  // Poisson mean per slot
    std::uint64_t dummy_packets = 0;

    friend bool operator==(const CommoditySpec&, const CommoditySpec&) = default;
};

struct TopologyProcess {
    double fail_prob = 0.0;
    double recover_prob = 0.0;

    friend bool operator==(const TopologyProcess&, const TopologyProcess&) = default;
};

// Everything one simulation run needs. BP ignores `initial_dags` and `lfbp`.
struct SimConfig {
    std::shared_ptr<const Network> network;
    std::vector<CommoditySpec> commodities;
    std::vector<DagOrientation> initial_dags;  // one per commodity
    TopologyProcess topology;
    LfbpParams lfbp;
    std::uint64_t seed = 1;
    std::uint64_t bucket_slots = 0;  // 0: a single bucket
    double load = 1.0;               // label only
};

struct Bucket {
    std::uint64_t start = 0;
    std::uint64_t slots = 0;
    double backlog_sum = 0.0;
    std::uint64_t delivered = 0;
    std::uint64_t reversals = 0;
    double live_sum = 0.0;
};

struct ReversalEvent {
    std::uint64_t slot = 0;
    std::size_t commodity = 0;
    std::size_t edges_reversed = 0;
    std::size_t marked = 0;
};

struct MetricsReport {
    Policy policy = Policy::Bp;
    double load = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t horizon = 0;

    // Averages over the samples taken at t = 0, 1, ..., horizon.
    double average_backlog = 0.0;
    double average_backlog_real = 0.0;  // dummy packets excluded
    double live_fraction = 0.0;

    std::uint64_t injected = 0;
    std::uint64_t delivered = 0;  // dummy packets excluded
    std::uint64_t delivered_dummy = 0;
    std::uint64_t final_backlog = 0;
    std::uint64_t reversal_epochs = 0;
    std::uint64_t reversed_links = 0;
    std::uint64_t topology_events = 0;
    std::uint64_t arrival_checksum = 0;

    std::vector<Bucket> buckets;
    std::vector<ReversalEvent> reversal_log;
    std::vector<DagOrientation> final_dags;  // LFBP only
};

struct SimState {
    std::shared_ptr<const Network> network;
    std::vector<CommoditySpec> commodities;
    Policy policy = Policy::Bp;
    TopologyProcess topology;

    std::uint64_t t = 0;
    // [commodity][node index]
    std::vector<std::vector<std::int64_t>> queues;
    std::vector<std::vector<std::int64_t>> dummies;
    std::vector<bool> live;
    std::vector<DagOrientation> dags;  // LFBP only
    std::vector<std::size_t> destination_index;
    std::vector<std::size_t> source_index;
    std::vector<std::int64_t> link_capacity;
    std::vector<std::size_t> link_u;
    std::vector<std::size_t> link_v;

    std::mt19937_64 arrival_rng;
    std::mt19937_64 topology_rng;

    // LFBP protocol state
    std::vector<std::vector<bool>> marks;
    std::uint64_t epoch = 0;
    std::uint64_t epoch_remaining = 0;

    // Cumulative counters
    std::uint64_t injected = 0;
    std::uint64_t delivered = 0;
    std::uint64_t delivered_dummy = 0;
    std::uint64_t reversal_epochs = 0;
    std::uint64_t reversed_links = 0;
    std::uint64_t topology_events = 0;
    std::uint64_t arrival_checksum = 14695981039346656037ULL;
    std::vector<ReversalEvent> reversal_log;

    std::int64_t total_backlog() const;
    std::int64_t total_dummies() const;
};

// Validates the config and builds the slot-0 state: dummy packets placed at
// the sources, all links live, random streams seeded from config.seed.
// Throws ValidationError.
SimState make_state(const SimConfig& config, Policy policy);

// One Poisson draw per commodity, by inversion of a single uniform.
void arrivals_step(SimState& state);

// One synchronous slot of backpressure. BP uses every live link in both
// directions; LFBP only along each commodity's DAG.
void bp_step(SimState& state);

// One uniform per link: live links fail with fail_prob, dead links recover
// with recover_prob.
void topology_step(SimState& state);

std::uint64_t poisson_inverse(double mean, double uniform);

MetricsReport run(const SimConfig& config, Policy policy, std::uint64_t horizon);

// Columns: slot_bucket,policy,load,total_backlog_avg,delivered,reversals,live_edges
void write_metrics_csv(std::ostream& out, const MetricsReport& report, bool header = true);

// Columns: slot,commodity,edges_reversed,marks
void write_reversal_log_csv(std::ostream& out, const MetricsReport& report);

}  // namespace loopfree
