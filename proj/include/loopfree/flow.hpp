#pragma once

#include "loopfree/graph.hpp"
#include "loopfree/rational.hpp"

#include <set>
#include <vector>

namespace loopfree {

// Per-link flow along the link's orientation in the DAG it was computed on;
// dead links carry zero.
struct FlowAllocation {
    std::vector<Rational> flow;  // indexed by EdgeId
    Rational value;              // net flow into the destination
};

struct CutPartition {
    std::set<NodeId> source_side;
    std::set<NodeId> sink_side;
    Rational capacity;

    friend bool operator==(const CutPartition&, const CutPartition&) = default;
};

FlowAllocation max_flow(const DagOrientation& dag, NodeId src, NodeId dst);

// Every live link usable in either direction up to its capacity.
Rational max_flow_undirected(const Network& net, NodeId src, NodeId dst);
Rational max_flow_undirected(const DagOrientation& dag, NodeId src, NodeId dst);

// Source side = nodes reachable from src in the final residual graph; this is
// the unique min-cut with the fewest source-side nodes.
CutPartition smallest_min_cut(const DagOrientation& dag, NodeId src, NodeId dst);

// Total capacity of live links directed from A into B. Throws
// std::invalid_argument if the sets overlap.
Rational cut_capacity(const DagOrientation& dag, const std::set<NodeId>& a, const std::set<NodeId>& b);

// Orientation supporting the undirected max-flow between the network's
// source and destination: max-flow, cancel flow cycles (lowest id first),
// orient loaded links along their flow and the rest along a lowest-id-first
// topological order of the loaded subgraph.
DagOrientation optimal_dag(std::shared_ptr<const Network> net);
DagOrientation optimal_dag(std::shared_ptr<const Network> net, NodeId src, NodeId dst);

enum class DeltaMode {
    Auto,        // exhaustive when the edge count allows it, analytic otherwise
    Exhaustive,  // smallest positive gap between any two capacity subset sums
    Analytic,    // 1 / lcd of the capacities, a lower bound on the exact value
};

struct DeltaBound {
    Rational value;
    bool exact = false;
};

inline constexpr std::size_t kDeltaExhaustiveMaxEdges = 20;

// Throws std::invalid_argument when no capacity is positive, or when
// Exhaustive is requested above kDeltaExhaustiveMaxEdges.
DeltaBound delta_bound(const Network& net, DeltaMode mode = DeltaMode::Auto);

}  // namespace loopfree
