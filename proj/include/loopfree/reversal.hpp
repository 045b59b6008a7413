#pragma once

#include "loopfree/errors.hpp"
#include "loopfree/flow.hpp"
#include "loopfree/graph.hpp"
#include "loopfree/overload.hpp"
#include "loopfree/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <vector>

namespace loopfree {

struct ReversalStep {
    DagOrientation dag;
    std::vector<EdgeId> reversed;
    std::optional<std::set<NodeId>> overloaded;  // nullopt when the DAG already supports lambda
};

// One oracle-driven iteration: find the smallest min-cut source side A of the
// current DAG and flip every live link pointing from outside A into A. When
// lambda does not exceed the DAG's max-flow nothing changes.
ReversalStep reversal_step(const DagOrientation& dag, const Rational& lambda);

struct TraceEntry {
    std::uint64_t version = 0;
    DagOrientation dag;
    std::optional<std::set<NodeId>> overloaded;
    std::vector<EdgeId> reversed;  // links of this DAG flipped to obtain the next one
    Rational max_flow;
    std::optional<std::vector<Rational>> overload;  // q^min, only with record_overload
};

struct ReversalTrace {
    std::vector<TraceEntry> entries;
    Rational target;  // min(lambda, undirected max-flow)

    std::size_t iterations() const { return entries.empty() ? 0 : entries.size() - 1; }
    const DagOrientation& final_dag() const { return entries.back().dag; }
};

struct ConvergeOptions {
    std::optional<std::uint64_t> max_iterations;  // default_max_iterations() when unset
    bool record_overload = false;
};

// ceil(|N| f^max / delta) + |N|, delta from delta_bound(net, mode).
std::uint64_t default_max_iterations(const Network& net, DeltaMode mode = DeltaMode::Auto);

// ceil(|N| f^max / delta) alone.
std::uint64_t iteration_bound(const Network& net, DeltaMode mode = DeltaMode::Auto);

// Repeats reversal_step until the DAG max-flow reaches min(lambda, f^max).
// Throws InvariantViolation if that takes more than the iteration limit or a
// step fails to reverse anything while the target is unmet.
ReversalTrace converge(const DagOrientation& dag0, const Rational& lambda, const ConvergeOptions& options = {});

// Columns: k,max_flow,overloaded_size,edges_reversed
void write_trace_csv(std::ostream& out, const ReversalTrace& trace);

}  // namespace loopfree
