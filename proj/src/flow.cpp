#include "loopfree/flow.hpp"

#include "loopfree/residual_graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace loopfree {

namespace {

struct DirectedRun {
    ResidualGraph graph;
    std::vector<std::size_t> arc_of_edge;  // npos for dead links
    Rational value;
};

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

DirectedRun run_directed(const DagOrientation& dag, NodeId src, NodeId dst) {
    const Network& net = dag.network();
    if (src == dst) throw std::invalid_argument("max_flow: source equals destination");
    DirectedRun run{ResidualGraph(net.node_count()), std::vector<std::size_t>(net.edge_count(), npos), 0};
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (!dag.is_live(e)) continue;
        run.arc_of_edge[e] = run.graph.add_arc(dag.tail_index(e), dag.head_index(e), net.edges()[e].capacity);
    }
    run.value = run.graph.augment(net.index_of(src), net.index_of(dst));
    return run;
}

struct UndirectedRun {
    ResidualGraph graph;
    std::vector<std::size_t> uv_arc;
    std::vector<std::size_t> vu_arc;
    Rational value;
};

template <class LivePredicate>
UndirectedRun run_undirected(const Network& net, NodeId src, NodeId dst, LivePredicate live) {
    if (src == dst) throw std::invalid_argument("max_flow_undirected: source equals destination");
    UndirectedRun run{ResidualGraph(net.node_count()), std::vector<std::size_t>(net.edge_count(), npos),
                      std::vector<std::size_t>(net.edge_count(), npos), 0};
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (!live(e)) continue;
        const Edge& edge = net.edges()[e];
        std::size_t u = net.index_of(edge.u);
        std::size_t v = net.index_of(edge.v);
        run.uv_arc[e] = run.graph.add_arc(u, v, edge.capacity);
        run.vu_arc[e] = run.graph.add_arc(v, u, edge.capacity);
    }
    run.value = run.graph.augment(net.index_of(src), net.index_of(dst));
    return run;
}

}  // namespace

FlowAllocation max_flow(const DagOrientation& dag, NodeId src, NodeId dst) {
    DirectedRun run = run_directed(dag, src, dst);
    FlowAllocation out{std::vector<Rational>(dag.network().edge_count(), Rational(0)), run.value};
    for (EdgeId e = 0; e < out.flow.size(); ++e) {
        if (run.arc_of_edge[e] != npos) out.flow[e] = run.graph.flow(run.arc_of_edge[e]);
    }
    return out;
}

Rational max_flow_undirected(const Network& net, NodeId src, NodeId dst) {
    return run_undirected(net, src, dst, [](EdgeId) { return true; }).value;
}

Rational max_flow_undirected(const DagOrientation& dag, NodeId src, NodeId dst) {
    return run_undirected(dag.network(), src, dst, [&](EdgeId e) { return dag.is_live(e); }).value;
}

CutPartition smallest_min_cut(const DagOrientation& dag, NodeId src, NodeId dst) {
    const Network& net = dag.network();
    DirectedRun run = run_directed(dag, src, dst);
    std::vector<bool> reach = run.graph.reachable_from(net.index_of(src));
    CutPartition cut;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        (reach[i] ? cut.source_side : cut.sink_side).insert(net.id_of(i));
    }
    cut.capacity = cut_capacity(dag, cut.source_side, cut.sink_side);
    return cut;
}

Rational cut_capacity(const DagOrientation& dag, const std::set<NodeId>& a, const std::set<NodeId>& b) {
    for (NodeId id : a) {
        if (b.count(id)) throw std::invalid_argument("cut_capacity: node " + std::to_string(id) + " in both sets");
    }
    const Network& net = dag.network();
    Rational total = 0;
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (dag.is_live(e) && a.count(dag.tail(e)) && b.count(dag.head(e))) total += net.edges()[e].capacity;
    }
    return total;
}

namespace {

// Signed net flow per link (positive: u -> v). Repeatedly finds a directed
// cycle in the support, scanning start nodes and neighbours by ascending id,
// and subtracts the cycle minimum until the support is acyclic.
void cancel_flow_cycles(const Network& net, std::vector<Rational>& net_flow) {
    std::size_t n = net.node_count();
    auto tail_of = [&](EdgeId e) { return net.index_of(net_flow[e] > 0 ? net.edges()[e].u : net.edges()[e].v); };
    auto head_of = [&](EdgeId e) { return net.index_of(net_flow[e] > 0 ? net.edges()[e].v : net.edges()[e].u); };

    for (;;) {
        std::vector<std::vector<std::pair<std::size_t, EdgeId>>> out(n);
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            if (net_flow[e] != 0) out[tail_of(e)].emplace_back(head_of(e), e);
        }
        for (auto& list : out) std::sort(list.begin(), list.end());

        // 0 = unvisited, 1 = on stack, 2 = done
        std::vector<int> color(n, 0);
        std::vector<EdgeId> path;  // edges along the current DFS stack
        std::vector<EdgeId> cycle;

        std::function<bool(std::size_t)> dfs = [&](std::size_t x) -> bool {
            color[x] = 1;
            for (auto [y, e] : out[x]) {
                if (color[y] == 1) {
                    // cycle: y ... x -> y
                    path.push_back(e);
                    std::size_t k = path.size() - 1;
                    while (k > 0 && tail_of(path[k]) != y) --k;
                    cycle.assign(path.begin() + static_cast<std::ptrdiff_t>(k), path.end());
                    return true;
                }
                if (color[y] == 0) {
                    path.push_back(e);
                    if (dfs(y)) return true;
                    path.pop_back();
                }
            }
            color[x] = 2;
            return false;
        };

        bool found = false;
        for (std::size_t start = 0; start < n && !found; ++start) {
            if (color[start] == 0) found = dfs(start);
        }
        if (!found) return;

        Rational amount = boost::multiprecision::abs(net_flow[cycle.front()]);
        for (EdgeId e : cycle) amount = std::min(amount, Rational(boost::multiprecision::abs(net_flow[e])));
        for (EdgeId e : cycle) {
            if (net_flow[e] > 0) {
                net_flow[e] -= amount;
            } else {
                net_flow[e] += amount;
            }
        }
    }
}

}  // namespace

DagOrientation optimal_dag(std::shared_ptr<const Network> net) {
    NodeId s = net->source();
    NodeId d = net->destination();
    return optimal_dag(std::move(net), s, d);
}

DagOrientation optimal_dag(std::shared_ptr<const Network> net, NodeId src, NodeId dst) {
    UndirectedRun run = run_undirected(*net, src, dst, [](EdgeId) { return true; });
    std::size_t m = net->edge_count();
    std::size_t n = net->node_count();
    std::vector<Rational> net_flow(m);
    for (EdgeId e = 0; e < m; ++e) net_flow[e] = run.graph.flow(run.uv_arc[e]) - run.graph.flow(run.vu_arc[e]);
    cancel_flow_cycles(*net, net_flow);

    // Topological order of the loaded subgraph, smallest id first.
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> succ(n);
    for (EdgeId e = 0; e < m; ++e) {
        if (net_flow[e] == 0) continue;
        const Edge& edge = net->edges()[e];
        std::size_t a = net->index_of(net_flow[e] > 0 ? edge.u : edge.v);
        std::size_t b = net->index_of(net_flow[e] > 0 ? edge.v : edge.u);
        succ[a].push_back(b);
        ++indegree[b];
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> position(n, 0);
    std::size_t next = 0;
    while (!ready.empty()) {
        std::size_t x = ready.top();
        ready.pop();
        position[x] = next++;
        for (std::size_t y : succ[x]) {
            if (--indegree[y] == 0) ready.push(y);
        }
    }
    if (next != n) throw std::logic_error("optimal_dag: flow support still cyclic after cancellation");

    std::vector<bool> forward(m, true);
    for (EdgeId e = 0; e < m; ++e) {
        const Edge& edge = net->edges()[e];
        if (net_flow[e] != 0) {
            forward[e] = net_flow[e] > 0;
        } else {
            forward[e] = position[net->index_of(edge.u)] < position[net->index_of(edge.v)];
        }
    }
    return dag_from_directions(std::move(net), std::move(forward));
}

DeltaBound delta_bound(const Network& net, DeltaMode mode) {
    BigInt lcd = 1;
    bool any_positive = false;
    for (const Edge& edge : net.edges()) {
        if (edge.capacity > 0) any_positive = true;
        lcd = lcm(lcd, denominator(edge.capacity));
    }
    if (!any_positive) throw std::invalid_argument("delta_bound: no positive capacity, no positive cut difference");

    if (mode == DeltaMode::Auto) {
        mode = net.edge_count() <= kDeltaExhaustiveMaxEdges ? DeltaMode::Exhaustive : DeltaMode::Analytic;
    }
    if (mode == DeltaMode::Analytic) return {Rational(BigInt(1), lcd), false};

    if (net.edge_count() > kDeltaExhaustiveMaxEdges) {
        throw std::invalid_argument("delta_bound: too many edges for exhaustive enumeration");
    }
    std::vector<std::int64_t> scaled;
    for (const Edge& edge : net.edges()) {
        Rational s = edge.capacity * Rational(lcd);
        if (s > Rational(std::numeric_limits<std::int64_t>::max() >> 24)) {
            throw std::overflow_error("delta_bound: scaled capacities too large for exhaustive enumeration");
        }
        scaled.push_back(numerator(s).convert_to<std::int64_t>());
    }
    // Differences of any two subset sums = gaps in the sorted subset-sum set.
    std::vector<std::int64_t> sums{0};
    for (std::int64_t c : scaled) {
        std::size_t k = sums.size();
        for (std::size_t i = 0; i < k; ++i) sums.push_back(sums[i] + c);
    }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    std::int64_t gap = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 1; i < sums.size(); ++i) gap = std::min(gap, sums[i] - sums[i - 1]);
    return {Rational(BigInt(gap), lcd), true};
}

}  // namespace loopfree
