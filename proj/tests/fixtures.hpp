#pragma once

#include "loopfree/graph.hpp"
#include "loopfree/scenario.hpp"

#include <memory>
#include <string>
#include <vector>

namespace loopfree::fixtures {

inline std::string scenario_path(const std::string& name) {
    return std::string(LOOPFREE_SCENARIO_DIR) + "/" + name;
}

inline std::shared_ptr<const Network> make_network(std::vector<NodeId> nodes,
                                                   const std::vector<std::tuple<NodeId, NodeId, Rational>>& links,
                                                   NodeId s, NodeId d) {
    std::vector<Edge> edges;
    for (const auto& [u, v, c] : links) edges.push_back(Edge{std::min(u, v), std::max(u, v), c});
    return std::make_shared<const Network>(std::move(nodes), std::move(edges), s, d);
}

// Six-node fixed topology; s = 0, d = 5.
inline std::shared_ptr<const Network> small_fixed() {
    return make_network({0, 1, 2, 3, 4, 5},
                        {{0, 2, 15}, {0, 1, 5}, {2, 3, 5}, {1, 4, 10}, {1, 2, 5}, {3, 4, 5}, {3, 5, 15}, {4, 5, 5}}, 0, 5);
}

// 4x4 grid, ids column-major from 1 (top-left) to 16 (bottom-right).
inline std::shared_ptr<const Network> grid(NodeId s = 1, NodeId d = 16) {
    std::vector<std::tuple<NodeId, NodeId, Rational>> links;
    auto id = [](int r, int c) { return NodeId(4 * c + r + 1); };
    for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 4; ++r) {
            if (r < 3) links.emplace_back(id(r, c), id(r + 1, c), Rational(6));
            if (c < 3) links.emplace_back(id(r, c), id(r, c + 1), Rational(6));
        }
    }
    std::vector<NodeId> nodes;
    for (NodeId i = 1; i <= 16; ++i) nodes.push_back(i);
    return make_network(nodes, links, s, d);
}

// Path 1 - 2 - ... - n with unit capacities, s = 1, d = n.
inline std::shared_ptr<const Network> line(std::size_t n) {
    std::vector<NodeId> nodes;
    std::vector<std::tuple<NodeId, NodeId, Rational>> links;
    for (std::size_t i = 1; i <= n; ++i) nodes.push_back(NodeId(i));
    for (std::size_t i = 1; i < n; ++i) links.emplace_back(NodeId(i), NodeId(i + 1), Rational(1));
    return make_network(nodes, links, 1, NodeId(n));
}

// Every link pointing from the higher id to the lower one.
inline DagOrientation reverse_id_dag(std::shared_ptr<const Network> net) {
    std::vector<bool> forward(net->edge_count(), false);
    return dag_from_directions(std::move(net), std::move(forward));
}

}  // namespace loopfree::fixtures
