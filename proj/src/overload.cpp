#include "loopfree/overload.hpp"

#include "loopfree/residual_graph.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace loopfree {

bool OverloadVector::is_zero() const {
    return std::all_of(q.begin(), q.end(), [](const Rational& x) { return x == 0; });
}

std::strong_ordering lex_compare(const std::vector<Rational>& u, const std::vector<Rational>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("lex_compare: length mismatch");
    std::vector<Rational> a = u;
    std::vector<Rational> b = v;
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return std::strong_ordering::less;
        if (a[i] > b[i]) return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

namespace {

Rational flow_into(const DagOrientation& dag, const std::vector<Rational>& flow, NodeId node) {
    Rational total = 0;
    for (EdgeId e = 0; e < flow.size(); ++e) {
        if (dag.is_live(e) && dag.head(e) == node) total += flow[e];
    }
    return total;
}

}  // namespace

OverloadVector lex_min_overload(const DagOrientation& dag, const Rational& lambda) {
    if (lambda < 0) throw std::invalid_argument("lex_min_overload: negative arrival rate");
    const Network& net = dag.network();
    const std::size_t n = net.node_count();
    const std::size_t m = net.edge_count();
    const std::size_t dst = net.index_of(net.destination());
    const std::size_t super_source = n;
    const std::size_t super_sink = n + 1;

    OverloadVector out{std::vector<Rational>(n, Rational(0)),
                       FlowAllocation{std::vector<Rational>(m, Rational(0)), Rational(0)}};
    std::vector<bool> remaining(n, true);
    remaining[dst] = false;
    std::vector<Rational> supply(n, Rational(0));
    supply[net.index_of(net.source())] = lambda;

    Rational capacity_sum = 0;
    for (const Edge& edge : net.edges()) capacity_sum += edge.capacity;

    for (;;) {
        Rational total = 0;
        std::size_t remaining_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!remaining[i]) continue;
            total += supply[i];
            ++remaining_count;
        }
        if (remaining_count == 0) break;

        Rational theta = 0;
        bool finished = false;
        for (;;) {
            ResidualGraph graph(n + 2);
            std::vector<std::pair<EdgeId, std::size_t>> arcs;
            for (std::size_t i = 0; i < n; ++i) {
                if (!remaining[i]) continue;
                if (supply[i] > 0) graph.add_arc(super_source, i, supply[i]);
                if (theta > 0) graph.add_arc(i, super_sink, theta);
            }
            graph.add_arc(dst, super_sink, total + capacity_sum + 1);
            for (EdgeId e = 0; e < m; ++e) {
                if (!dag.is_live(e)) continue;
                std::size_t a = dag.tail_index(e);
                std::size_t b = dag.head_index(e);
                if (remaining[a] && (remaining[b] || b == dst)) {
                    arcs.emplace_back(e, graph.add_arc(a, b, net.edges()[e].capacity));
                }
            }
            Rational pushed = graph.augment(super_source, super_sink);

            if (pushed == total) {
                if (theta == 0) {
                    // every remaining node can be kept at zero overload
                    for (auto [e, arc] : arcs) out.inducing_flow.flow[e] = graph.flow(arc);
                    finished = true;
                    break;
                }
                // Top level: the largest set whose members cannot push into the
                // super sink through the residual graph.
                std::vector<bool> reaches_sink = graph.can_reach(super_sink);
                std::vector<bool> level(n, false);
                std::size_t level_size = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (remaining[i] && !reaches_sink[i]) {
                        level[i] = true;
                        ++level_size;
                    }
                }
                if (level_size == 0) throw std::logic_error("lex_min_overload: empty top level");
                for (std::size_t i = 0; i < n; ++i) {
                    if (level[i]) {
                        out.q[i] = theta;
                        remaining[i] = false;
                    }
                }
                for (auto [e, arc] : arcs) {
                    std::size_t a = dag.tail_index(e);
                    std::size_t b = dag.head_index(e);
                    if (!level[a]) continue;
                    out.inducing_flow.flow[e] = graph.flow(arc);
                    if (remaining[b]) {
                        // links leaving the level are saturated and feed the rest
                        supply[b] += net.edges()[e].capacity;
                    }
                }
                break;
            }

            // A set with negative cut value exists; its ratio is the next guess.
            std::vector<bool> reach = graph.reachable_from(super_source);
            Rational set_supply = 0;
            Rational cap_out = 0;
            std::size_t size = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (remaining[i] && reach[i]) {
                    set_supply += supply[i];
                    ++size;
                }
            }
            for (auto [e, arc] : arcs) {
                std::size_t a = dag.tail_index(e);
                std::size_t b = dag.head_index(e);
                if (reach[a] && !reach[b]) cap_out += net.edges()[e].capacity;
            }
            if (size == 0) throw std::logic_error("lex_min_overload: empty violating set");
            Rational next = (set_supply - cap_out) / Rational(size);
            if (!(next > theta)) throw std::logic_error("lex_min_overload: parametric search stalled");
            theta = next;
        }
        if (finished) break;
    }

    out.inducing_flow.value = flow_into(dag, out.inducing_flow.flow, net.destination());
    return out;
}

std::optional<CutPartition> overloaded_set(const DagOrientation& dag, const Rational& lambda) {
    const Network& net = dag.network();
    CutPartition cut = smallest_min_cut(dag, net.source(), net.destination());
    if (lambda <= cut.capacity) return std::nullopt;
    return cut;
}

namespace {

// Is there a flow on the live links (destination does not forward) such that
// every non-destination node's overload lies in [lo, hi]? Lower bounds are
// removed by the usual circulation transform.
std::optional<std::vector<Rational>> bounded_feasible_flow(const DagOrientation& dag,
                                                           const Rational& lambda,
                                                           const std::vector<Rational>& lo,
                                                           const std::vector<Rational>& hi) {
    const Network& net = dag.network();
    const std::size_t n = net.node_count();
    const std::size_t dst = net.index_of(net.destination());
    const std::size_t src = net.index_of(net.source());
    const std::size_t sigma = n, tau = n + 1, star_source = n + 2, star_sink = n + 3;

    Rational big = lambda + 1;
    for (const Edge& edge : net.edges()) big += edge.capacity;

    ResidualGraph graph(n + 4);
    std::vector<Rational> excess(n + 4, Rational(0));
    auto bounded_arc = [&](std::size_t from, std::size_t to, const Rational& lower, const Rational& upper) {
        excess[to] += lower;
        excess[from] -= lower;
        return graph.add_arc(from, to, upper - lower);
    };

    bounded_arc(sigma, src, lambda, lambda);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == dst) continue;
        if (lo[i] > hi[i]) return std::nullopt;
        bounded_arc(i, tau, lo[i], hi[i]);
    }
    bounded_arc(dst, tau, Rational(0), big);
    bounded_arc(tau, sigma, Rational(0), big);

    std::vector<std::pair<EdgeId, std::size_t>> arcs;
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (!dag.is_live(e) || dag.tail_index(e) == dst) continue;
        arcs.emplace_back(e, graph.add_arc(dag.tail_index(e), dag.head_index(e), net.edges()[e].capacity));
    }

    Rational required = 0;
    for (std::size_t i = 0; i < n + 2; ++i) {
        if (excess[i] > 0) {
            graph.add_arc(star_source, i, excess[i]);
            required += excess[i];
        } else if (excess[i] < 0) {
            graph.add_arc(i, star_sink, -excess[i]);
        }
    }
    if (graph.augment(star_source, star_sink) != required) return std::nullopt;

    std::vector<Rational> flow(net.edge_count(), Rational(0));
    for (auto [e, arc] : arcs) flow[e] = graph.flow(arc);
    return flow;
}

}  // namespace

Rational default_grid_step(const DagOrientation& dag, const Rational& lambda) {
    const Network& net = dag.network();
    BigInt lcd = denominator(lambda);
    for (const Edge& edge : net.edges()) lcd = lcm(lcd, denominator(edge.capacity));
    BigInt sizes = 1;
    for (std::size_t k = 2; k + 1 <= net.node_count(); ++k) sizes = lcm(sizes, BigInt(k));
    return Rational(BigInt(1), lcd * sizes);
}

OverloadVector brute_force_lex_min(const DagOrientation& dag, const Rational& lambda) {
    return brute_force_lex_min(dag, lambda, default_grid_step(dag, lambda));
}

OverloadVector brute_force_lex_min(const DagOrientation& dag, const Rational& lambda, const Rational& step) {
    const Network& net = dag.network();
    const std::size_t n = net.node_count();
    if (n > kBruteForceMaxNodes) {
        throw std::invalid_argument("brute_force_lex_min: instance too large (" + std::to_string(n) + " nodes)");
    }
    if (lambda < 0) throw std::invalid_argument("brute_force_lex_min: negative arrival rate");
    if (step <= 0) throw std::invalid_argument("brute_force_lex_min: grid step must be positive");
    if (!is_integer(lambda / step)) throw std::invalid_argument("brute_force_lex_min: step does not divide lambda");
    for (const Edge& edge : net.edges()) {
        if (!is_integer(edge.capacity / step)) {
            throw std::invalid_argument("brute_force_lex_min: step does not divide capacity " +
                                        to_string(edge.capacity));
        }
    }

    const std::size_t dst = net.index_of(net.destination());
    const BigInt top = numerator(lambda / step);

    std::vector<bool> fixed(n, false);
    fixed[dst] = true;
    std::vector<Rational> lo(n, Rational(0));
    std::vector<Rational> hi(n, Rational(0));

    auto feasible_with_cap = [&](const Rational& cap, std::size_t lowered = SIZE_MAX, const Rational& lowered_cap = 0) {
        std::vector<Rational> l = lo;
        std::vector<Rational> h = hi;
        for (std::size_t i = 0; i < n; ++i) {
            if (fixed[i]) continue;
            l[i] = 0;
            h[i] = i == lowered ? lowered_cap : cap;
        }
        return bounded_feasible_flow(dag, lambda, l, h).has_value();
    };

    BigInt upper = top;
    while (std::find(fixed.begin(), fixed.end(), false) != fixed.end()) {
        // smallest grid level v such that all free nodes fit under v
        BigInt a = 0;
        BigInt b = upper;
        while (a < b) {
            BigInt mid = (a + b) / 2;
            if (feasible_with_cap(Rational(mid) * step)) {
                b = mid;
            } else {
                a = mid + 1;
            }
        }
        Rational level = Rational(a) * step;
        upper = a;

        std::vector<std::size_t> forced;
        for (std::size_t i = 0; i < n; ++i) {
            if (fixed[i]) continue;
            if (a == 0 || !feasible_with_cap(level, i, level - step)) forced.push_back(i);
        }
        if (forced.empty()) {
            throw std::runtime_error("brute_force_lex_min: grid too coarse to resolve the optimum");
        }
        for (std::size_t i : forced) {
            fixed[i] = true;
            lo[i] = level;
            hi[i] = level;
        }
    }

    auto flow = bounded_feasible_flow(dag, lambda, lo, hi);
    if (!flow) throw std::logic_error("brute_force_lex_min: fixed levels became infeasible");
    OverloadVector out{lo, FlowAllocation{*flow, Rational(0)}};
    out.q[dst] = 0;
    out.inducing_flow.value = flow_into(dag, out.inducing_flow.flow, net.destination());
    return out;
}

}  // namespace loopfree
