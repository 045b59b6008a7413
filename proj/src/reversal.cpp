#include "loopfree/reversal.hpp"

#include <limits>
#include <ostream>

namespace loopfree {

ReversalStep reversal_step(const DagOrientation& dag, const Rational& lambda) {
    std::optional<CutPartition> cut = overloaded_set(dag, lambda);
    if (!cut) return {dag, {}, std::nullopt};

    const Network& net = dag.network();
    std::vector<EdgeId> reversed;
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (!dag.is_live(e)) continue;
        if (!cut->source_side.count(dag.tail(e)) && cut->source_side.count(dag.head(e))) reversed.push_back(e);
    }
    if (reversed.empty()) return {dag, {}, cut->source_side};
    return {reverse_links(dag, reversed, cut->source_side), reversed, cut->source_side};
}

namespace {

std::uint64_t clamp_to_u64(const Rational& x) {
    BigInt c = ceil(x);
    if (c <= 0) return 0;
    if (c > BigInt(std::numeric_limits<std::uint64_t>::max())) return std::numeric_limits<std::uint64_t>::max();
    return c.convert_to<std::uint64_t>();
}

}  // namespace

std::uint64_t iteration_bound(const Network& net, DeltaMode mode) {
    Rational fmax = max_flow_undirected(net, net.source(), net.destination());
    if (fmax == 0) return 0;
    DeltaBound delta = delta_bound(net, mode);
    return clamp_to_u64(Rational(static_cast<long long>(net.node_count())) * fmax / delta.value);
}

std::uint64_t default_max_iterations(const Network& net, DeltaMode mode) {
    std::uint64_t bound = iteration_bound(net, mode);
    std::uint64_t n = net.node_count();
    return bound > std::numeric_limits<std::uint64_t>::max() - n ? bound : bound + n;
}

ReversalTrace converge(const DagOrientation& dag0, const Rational& lambda, const ConvergeOptions& options) {
    const Network& net = dag0.network();
    const NodeId s = net.source();
    const NodeId d = net.destination();
    Rational fmax = max_flow_undirected(net, s, d);

    ReversalTrace trace;
    trace.target = lambda < fmax ? lambda : fmax;
    std::uint64_t limit = options.max_iterations ? *options.max_iterations : default_max_iterations(net);

    DagOrientation current = dag0;
    for (;;) {
        TraceEntry entry{current.version(), current, std::nullopt, {}, max_flow(current, s, d).value, std::nullopt};
        if (options.record_overload) entry.overload = lex_min_overload(current, lambda).q;
        if (entry.max_flow >= trace.target) {
            trace.entries.push_back(std::move(entry));
            return trace;
        }
        if (trace.entries.size() >= limit) {
            throw InvariantViolation("converge: iteration limit " + std::to_string(limit) + " exceeded");
        }
        ReversalStep step = reversal_step(current, lambda);
        if (step.reversed.empty()) {
            throw InvariantViolation("converge: no link to reverse below the target flow");
        }
        entry.overloaded = std::move(step.overloaded);
        entry.reversed = std::move(step.reversed);
        trace.entries.push_back(std::move(entry));
        current = std::move(step.dag);
    }
}

void write_trace_csv(std::ostream& out, const ReversalTrace& trace) {
    out << "k,max_flow,overloaded_size,edges_reversed\n";
    for (const TraceEntry& entry : trace.entries) {
        out << entry.version << ',' << to_string(entry.max_flow) << ','
            << (entry.overloaded ? entry.overloaded->size() : 0) << ',' << entry.reversed.size() << '\n';
    }
}

}  // namespace loopfree
