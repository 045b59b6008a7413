#pragma once

#include "loopfree/errors.hpp"
#include "loopfree/graph.hpp"
#include "loopfree/lfbp.hpp"
#include "loopfree/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace loopfree {

inline constexpr int kScenarioSchemaVersion = 1;

struct ScenarioCommodity {
    NodeId source = 0;
    NodeId destination = 0;
    double rate = 0.0;  // arrival rate at load 1; a run at load rho uses rho * rate
    std::uint64_t dummy_packets = 0;
    // When positive, floor(dummy_inverse_load / rho) dummies are used instead.
    double dummy_inverse_load = 0.0;
    // Dummy packets are given to LFBP runs only unless set.
    bool dummies_for_bp = false;

    friend bool operator==(const ScenarioCommodity&, const ScenarioCommodity&) = default;
};

enum class InitialDagKind { ById, Explicit, Optimal };

struct InitialDagSpec {
    InitialDagKind kind = InitialDagKind::ById;
    std::vector<std::pair<NodeId, NodeId>> arcs;  // Explicit only; shared by all commodities

    friend bool operator==(const InitialDagSpec&, const InitialDagSpec&) = default;
};

struct ScenarioConfig {
    std::string name;
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    NodeId source = 0;
    NodeId destination = 0;
    std::vector<ScenarioCommodity> commodities;
    InitialDagSpec initial_dag;
    LfbpParams lfbp;
    TopologyProcess topology;
    std::vector<double> loads{1.0};
    std::uint64_t horizon = 1000;
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t bucket_slots = 0;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&);
};

// Parses and validates. Throws ValidationError naming the offending field,
// including for JSON syntax errors (field "<file>").
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::string scenario_to_string(const ScenarioConfig& config);
void write_scenario(const std::filesystem::path& path, const ScenarioConfig& config);

// Eager checks of every invariant, including acyclicity of an explicit
// initial orientation.
void validate(const ScenarioConfig& config);

std::shared_ptr<const Network> scenario_network(const ScenarioConfig& config);

// Initial orientation for commodity y, on the commodity's view of the network.
DagOrientation scenario_initial_dag(const ScenarioConfig& config, std::size_t commodity);

// Resolves one (load, seed, policy) cell into a runnable config.
SimConfig make_sim_config(const ScenarioConfig& config, double load, std::uint64_t seed, Policy policy);

}  // namespace loopfree
