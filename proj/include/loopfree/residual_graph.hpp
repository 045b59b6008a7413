#pragma once

#include "loopfree/rational.hpp"

#include <cstddef>
#include <vector>

namespace loopfree {

// Shortest-augmenting-path (Edmonds-Karp) max-flow over dense node indices
// with exact rational capacities. BFS visits arcs in insertion order, so the
// resulting flow is deterministic.
class ResidualGraph {
public:
    explicit ResidualGraph(std::size_t node_count);

    std::size_t node_count() const { return adjacency_.size(); }

    // Returns an arc handle for flow(). Zero-capacity arcs are allowed.
    std::size_t add_arc(std::size_t from, std::size_t to, const Rational& capacity);

    // Augments from the current flow; returns the flow added by this call.
    Rational augment(std::size_t source, std::size_t sink);

    const Rational& capacity(std::size_t arc) const { return capacity_[arc]; }
    Rational flow(std::size_t arc) const { return capacity_[arc] - residual_[2 * arc]; }

    // Nodes reachable from `source` through arcs with positive residual.
    std::vector<bool> reachable_from(std::size_t source) const;
    // Nodes that can reach `sink` through arcs with positive residual.
    std::vector<bool> can_reach(std::size_t sink) const;

private:
    struct Half {
        std::size_t to;
    };
    // half-arc 2a is the forward direction of arc a, 2a+1 its reverse
    std::vector<Half> halves_;
    std::vector<Rational> residual_;
    std::vector<Rational> capacity_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace loopfree
