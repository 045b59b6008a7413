#pragma once

#include "loopfree/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace loopfree {

using NodeId = std::int64_t;
using EdgeId = std::size_t;

// Undirected link {u, v}, stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    Rational capacity;
};

// Ground-truth topology: uniquely identified nodes, capacitated undirected
// links, and the (default) source/destination pair. The edge list is the
// universe of links that may ever be live.
class Network {
public:
    // Throws std::invalid_argument naming the offending node or edge.
    Network(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId source, NodeId destination);

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    NodeId source() const { return source_; }
    NodeId destination() const { return destination_; }

    bool has_node(NodeId id) const { return index_.count(id) != 0; }
    // Dense index in [0, node_count()); nodes are kept sorted by id.
    std::size_t index_of(NodeId id) const;
    NodeId id_of(std::size_t index) const { return nodes_[index]; }

    std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;
    const std::vector<EdgeId>& incident(std::size_t node_index) const { return incident_[node_index]; }

    // Same topology, different endpoints (per-commodity views).
    Network with_endpoints(NodeId source, NodeId destination) const;

    friend bool operator==(const Network& a, const Network& b);

private:
    std::vector<NodeId> nodes_;
    std::vector<Edge> edges_;
    NodeId source_;
    NodeId destination_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::vector<std::vector<EdgeId>> incident_;
};

// A direction for every link of a Network, a liveness mask and per-node
// topological states. Directions of dead links are kept but carry no meaning;
// a link coming back to life is re-oriented from the states.
//
// The raw constructor does not validate acyclicity so tests can build
// deliberately broken orientations; use the factory functions below for
// everything else.
class DagOrientation {
public:
    DagOrientation(std::shared_ptr<const Network> network,
                   std::vector<bool> forward,
                   std::vector<bool> live,
                   std::vector<Rational> states,
                   Rational delta);

    const Network& network() const { return *network_; }
    const std::shared_ptr<const Network>& network_ptr() const { return network_; }

    // Number of reversal iterations applied since the initial orientation.
    std::uint64_t version() const { return version_; }
    void set_version(std::uint64_t v) { version_ = v; }

    bool is_live(EdgeId e) const { return live_[e]; }
    std::size_t live_count() const;
    // true: u -> v (lower id to higher id); false: v -> u.
    bool is_forward(EdgeId e) const { return forward_[e]; }
    NodeId tail(EdgeId e) const;
    NodeId head(EdgeId e) const;
    std::size_t tail_index(EdgeId e) const { return network_->index_of(tail(e)); }
    std::size_t head_index(EdgeId e) const { return network_->index_of(head(e)); }

    const std::vector<Rational>& states() const { return states_; }
    const Rational& state_of(NodeId id) const { return states_[network_->index_of(id)]; }

    // Offset unit for the state update; exceeds the spread of the states at
    // the last (re)initialisation.
    const Rational& delta() const { return delta_; }
    // Reversal rounds since the last rescale; the next update uses 2^(round+1).
    std::uint32_t state_round() const { return state_round_; }
    std::uint32_t rescale_every() const { return rescale_every_; }
    void set_rescale_every(std::uint32_t n) { rescale_every_ = n; }

    void reverse(EdgeId e) { forward_[e] = !forward_[e]; }
    void set_forward(EdgeId e, bool forward) { forward_[e] = forward; }
    void set_live(EdgeId e, bool live) { live_[e] = live; }
    void set_states(std::vector<Rational> states, Rational delta, std::uint32_t round);

    // Equality of the orientation proper: directions of live links and the
    // live mask. States and counters are bookkeeping.
    bool same_orientation(const DagOrientation& other) const;

private:
    std::shared_ptr<const Network> network_;
    std::vector<bool> forward_;
    std::vector<bool> live_;
    std::vector<Rational> states_;
    Rational delta_;
    std::uint64_t version_ = 0;
    std::uint32_t state_round_ = 0;
    std::uint32_t rescale_every_ = 32;
};

enum class TopologyEventKind { Add, Remove };

struct TopologyEvent {
    TopologyEventKind kind;
    EdgeId edge;
};

// Every link directed from lower to higher id; x_n = n.
DagOrientation initial_dag(std::shared_ptr<const Network> network);

// Validating factory: `arcs` must name every link exactly once as (tail, head)
// and be acyclic. States are the ranks of a lowest-id-first topological order.
DagOrientation dag_from_arcs(std::shared_ptr<const Network> network,
                             const std::vector<std::pair<NodeId, NodeId>>& arcs);

// Directions taken from `forward`, states recomputed from a topological order.
// Throws std::invalid_argument if the directions contain a cycle.
DagOrientation dag_from_directions(std::shared_ptr<const Network> network, std::vector<bool> forward);

bool is_acyclic(const DagOrientation& dag);

// Kahn's algorithm over live links, smallest id first among ready nodes.
// Returns node indices, or nullopt on a cycle.
std::optional<std::vector<std::size_t>> topological_order(const DagOrientation& dag);

// Every live link goes from lower to higher state and states are distinct.
bool states_consistent(const DagOrientation& dag);

// Throws std::invalid_argument on adding a live link or removing a dead one.
DagOrientation apply_topology_event(const DagOrientation& dag, const TopologyEvent& event);

// x_n - 2^k * delta for every overloaded node, others unchanged.
DagOrientation update_states_after_reversal(const DagOrientation& dag,
                                            const std::set<NodeId>& overloaded,
                                            std::uint32_t k,
                                            const Rational& delta);

// Divides every state by `divisor`, resets the round counter and picks a
// fresh delta larger than the spread of the rescaled states.
DagOrientation rescale_states(const DagOrientation& dag, const Rational& divisor);

// Flips every listed live link, applies the state update for `overloaded`
// with the next round exponent, bumps the version and rescales when the round
// counter reaches rescale_every(). Shared by the oracle-driven and the
// threshold-driven reversal.
DagOrientation reverse_links(const DagOrientation& dag,
                             const std::vector<EdgeId>& links,
                             const std::set<NodeId>& overloaded);

}  // namespace loopfree
