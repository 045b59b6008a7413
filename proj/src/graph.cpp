#include "loopfree/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

namespace loopfree {

namespace {

std::string edge_name(NodeId a, NodeId b) {
    return "{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

}  // namespace

Network::Network(std::vector<NodeId> nodes, std::vector<Edge> edges, NodeId source, NodeId destination)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), source_(source), destination_(destination) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
        throw std::invalid_argument("duplicate node id " +
                                    std::to_string(*std::adjacent_find(nodes_.begin(), nodes_.end())));
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);

    if (!has_node(source_)) throw std::invalid_argument("source " + std::to_string(source_) + " is not a node");
    if (!has_node(destination_)) {
        throw std::invalid_argument("destination " + std::to_string(destination_) + " is not a node");
    }
    if (source_ == destination_) throw std::invalid_argument("source and destination coincide");

    incident_.assign(nodes_.size(), {});
    std::set<std::pair<NodeId, NodeId>> seen;
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        Edge& edge = edges_[e];
        if (edge.u > edge.v) std::swap(edge.u, edge.v);
        if (edge.u == edge.v) throw std::invalid_argument("self-loop at node " + std::to_string(edge.u));
        if (!has_node(edge.u) || !has_node(edge.v)) {
            throw std::invalid_argument("edge " + edge_name(edge.u, edge.v) + " references an unknown node");
        }
        if (edge.capacity < 0) {
            throw std::invalid_argument("edge " + edge_name(edge.u, edge.v) + " has negative capacity " +
                                        to_string(edge.capacity));
        }
        if (!seen.emplace(edge.u, edge.v).second) {
            throw std::invalid_argument("duplicate edge " + edge_name(edge.u, edge.v));
        }
        incident_[index_.at(edge.u)].push_back(e);
        incident_[index_.at(edge.v)].push_back(e);
    }
}

std::size_t Network::index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown node id " + std::to_string(id));
    return it->second;
}

std::optional<EdgeId> Network::find_edge(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    if (!has_node(a)) return std::nullopt;
    for (EdgeId e : incident_[index_of(a)]) {
        if (edges_[e].u == a && edges_[e].v == b) return e;
    }
    return std::nullopt;
}

Network Network::with_endpoints(NodeId source, NodeId destination) const {
    return Network(nodes_, edges_, source, destination);
}

bool operator==(const Network& a, const Network& b) {
    if (a.nodes_ != b.nodes_ || a.source_ != b.source_ || a.destination_ != b.destination_) return false;
    if (a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        const Edge& x = a.edges_[i];
        const Edge& y = b.edges_[i];
        if (x.u != y.u || x.v != y.v || x.capacity != y.capacity) return false;
    }
    return true;
}

DagOrientation::DagOrientation(std::shared_ptr<const Network> network,
                               std::vector<bool> forward,
                               std::vector<bool> live,
                               std::vector<Rational> states,
                               Rational delta)
    : network_(std::move(network)),
      forward_(std::move(forward)),
      live_(std::move(live)),
      states_(std::move(states)),
      delta_(std::move(delta)) {
    if (!network_) throw std::invalid_argument("null network");
    if (forward_.size() != network_->edge_count() || live_.size() != network_->edge_count()) {
        throw std::invalid_argument("direction/live vectors must have one entry per edge");
    }
    if (states_.size() != network_->node_count()) {
        throw std::invalid_argument("state vector must have one entry per node");
    }
}

std::size_t DagOrientation::live_count() const {
    return static_cast<std::size_t>(std::count(live_.begin(), live_.end(), true));
}

NodeId DagOrientation::tail(EdgeId e) const {
    const Edge& edge = network_->edges()[e];
    return forward_[e] ? edge.u : edge.v;
}

NodeId DagOrientation::head(EdgeId e) const {
    const Edge& edge = network_->edges()[e];
    return forward_[e] ? edge.v : edge.u;
}

void DagOrientation::set_states(std::vector<Rational> states, Rational delta, std::uint32_t round) {
    if (states.size() != states_.size()) throw std::invalid_argument("state vector size mismatch");
    states_ = std::move(states);
    delta_ = std::move(delta);
    state_round_ = round;
}

bool DagOrientation::same_orientation(const DagOrientation& other) const {
    if (live_ != other.live_) return false;
    for (EdgeId e = 0; e < forward_.size(); ++e) {
        if (live_[e] && forward_[e] != other.forward_[e]) return false;
    }
    return true;
}

DagOrientation initial_dag(std::shared_ptr<const Network> network) {
    const auto& nodes = network->nodes();
    std::vector<Rational> states;
    states.reserve(nodes.size());
    for (NodeId id : nodes) states.emplace_back(id);
    Rational delta = Rational(nodes.back() - nodes.front()) + 1;
    std::size_t m = network->edge_count();
    return DagOrientation(std::move(network), std::vector<bool>(m, true), std::vector<bool>(m, true),
                          std::move(states), std::move(delta));
}

std::optional<std::vector<std::size_t>> topological_order(const DagOrientation& dag) {
    const Network& net = dag.network();
    std::size_t n = net.node_count();
    std::vector<std::size_t> indegree(n, 0);
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (dag.is_live(e)) ++indegree[dag.head_index(e)];
    }
    // node indices are sorted by id, so the smallest index is the smallest id
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        std::size_t i = ready.top();
        ready.pop();
        order.push_back(i);
        for (EdgeId e : net.incident(i)) {
            if (!dag.is_live(e) || dag.tail_index(e) != i) continue;
            std::size_t j = dag.head_index(e);
            if (--indegree[j] == 0) ready.push(j);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

bool is_acyclic(const DagOrientation& dag) { return topological_order(dag).has_value(); }

DagOrientation dag_from_directions(std::shared_ptr<const Network> network, std::vector<bool> forward) {
    std::size_t m = network->edge_count();
    std::size_t n = network->node_count();
    DagOrientation dag(network, std::move(forward), std::vector<bool>(m, true), std::vector<Rational>(n),
                       Rational(1));
    auto order = topological_order(dag);
    if (!order) throw std::invalid_argument("link directions contain a directed cycle");
    std::vector<Rational> states(n);
    for (std::size_t rank = 0; rank < order->size(); ++rank) states[(*order)[rank]] = Rational(rank);
    dag.set_states(std::move(states), Rational(n), 0);
    return dag;
}

DagOrientation dag_from_arcs(std::shared_ptr<const Network> network,
                             const std::vector<std::pair<NodeId, NodeId>>& arcs) {
    std::size_t m = network->edge_count();
    std::vector<bool> forward(m, true);
    std::vector<bool> assigned(m, false);
    for (const auto& [tail, head] : arcs) {
        auto e = network->find_edge(tail, head);
        if (!e) throw std::invalid_argument("arc " + std::to_string(tail) + "->" + std::to_string(head) +
                                            " does not match any edge");
        if (assigned[*e]) throw std::invalid_argument("edge " + edge_name(tail, head) + " oriented twice");
        assigned[*e] = true;
        forward[*e] = tail < head;
    }
    for (EdgeId e = 0; e < m; ++e) {
        if (!assigned[e]) {
            const Edge& edge = network->edges()[e];
            throw std::invalid_argument("edge " + edge_name(edge.u, edge.v) + " has no orientation");
        }
    }
    return dag_from_directions(std::move(network), std::move(forward));
}

bool states_consistent(const DagOrientation& dag) {
    std::vector<Rational> sorted = dag.states();
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (EdgeId e = 0; e < dag.network().edge_count(); ++e) {
        if (!dag.is_live(e)) continue;
        if (!(dag.states()[dag.tail_index(e)] < dag.states()[dag.head_index(e)])) return false;
    }
    return true;
}

DagOrientation apply_topology_event(const DagOrientation& dag, const TopologyEvent& event) {
    const Network& net = dag.network();
    if (event.edge >= net.edge_count()) throw std::invalid_argument("topology event on unknown edge");
    const Edge& edge = net.edges()[event.edge];
    DagOrientation out = dag;
    switch (event.kind) {
        case TopologyEventKind::Remove:
            if (!dag.is_live(event.edge)) {
                throw std::invalid_argument("cannot remove dead edge " + edge_name(edge.u, edge.v));
            }
            out.set_live(event.edge, false);
            break;
        case TopologyEventKind::Add: {
            if (dag.is_live(event.edge)) {
                throw std::invalid_argument("cannot add live edge " + edge_name(edge.u, edge.v));
            }
            const Rational& xu = dag.states()[net.index_of(edge.u)];
            const Rational& xv = dag.states()[net.index_of(edge.v)];
            out.set_live(event.edge, true);
            out.set_forward(event.edge, xu < xv);
            break;
        }
    }
    return out;
}

DagOrientation update_states_after_reversal(const DagOrientation& dag,
                                            const std::set<NodeId>& overloaded,
                                            std::uint32_t k,
                                            const Rational& delta) {
    if (overloaded.empty()) return dag;
    const Network& net = dag.network();
    Rational shift = delta;
    for (std::uint32_t i = 0; i < k; ++i) shift *= 2;
    std::vector<Rational> states = dag.states();
    for (NodeId id : overloaded) states[net.index_of(id)] -= shift;
    DagOrientation out = dag;
    out.set_states(std::move(states), dag.delta(), k);
    return out;
}

DagOrientation rescale_states(const DagOrientation& dag, const Rational& divisor) {
    if (divisor <= 0) throw std::invalid_argument("rescale divisor must be positive, got " + to_string(divisor));
    std::vector<Rational> states = dag.states();
    for (Rational& x : states) x /= divisor;
    auto [lo, hi] = std::minmax_element(states.begin(), states.end());
    Rational delta = Rational(floor(*hi - *lo)) + 1;
    DagOrientation out = dag;
    out.set_states(std::move(states), std::move(delta), 0);
    return out;
}

DagOrientation reverse_links(const DagOrientation& dag,
                             const std::vector<EdgeId>& links,
                             const std::set<NodeId>& overloaded) {
    DagOrientation out = dag;
    for (EdgeId e : links) {
        if (!out.is_live(e)) throw std::invalid_argument("cannot reverse a dead link");
        out.reverse(e);
    }
    out = update_states_after_reversal(out, overloaded, dag.state_round() + 1, dag.delta());
    out.set_version(dag.version() + 1);
    if (out.rescale_every() > 0 && out.state_round() >= out.rescale_every()) {
        Rational largest = 0;
        for (const Rational& x : out.states()) largest = std::max(largest, Rational(boost::multiprecision::abs(x)));
        Rational divisor = largest > 1 ? Rational(ceil(largest)) : Rational(1);
        out = rescale_states(out, divisor);
    }
    return out;
}

}  // namespace loopfree
