#pragma once

#include "loopfree/flow.hpp"
#include "loopfree/graph.hpp"
#include "loopfree/rational.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace loopfree {

// Fluid-model queue growth rates. q is indexed by node index and includes the
// destination, whose entry is always zero.
struct OverloadVector {
    std::vector<Rational> q;
    FlowAllocation inducing_flow;

    const Rational& at(const Network& net, NodeId id) const { return q[net.index_of(id)]; }
    bool is_zero() const;
};

// Compares the components sorted in descending order, dictionary style.
// Throws std::invalid_argument on a length mismatch.
std::strong_ordering lex_compare(const std::vector<Rational>& u, const std::vector<Rational>& v);

// The lexicographically smallest feasible overload vector of `dag` under
// arrival rate `lambda` at the network source, together with a flow inducing
// it. Computed level by level: the top level value is the largest
// (supply(X) - cap_out(X)) / |X| over node sets X, found by Newton iteration
// on a parametric min-cut; the largest maximising set is fixed at that value,
// its outgoing links saturated, and the rest solved recursively.
OverloadVector lex_min_overload(const DagOrientation& dag, const Rational& lambda);

// Smallest min-cut when lambda exceeds the DAG max-flow, nullopt otherwise.
std::optional<CutPartition> overloaded_set(const DagOrientation& dag, const Rational& lambda);

inline constexpr std::size_t kBruteForceMaxNodes = 7;

// Independent oracle for lex_min_overload on small instances. Scans candidate
// levels on the grid {0, step, 2 step, ...}, fills levels from the top down,
// and checks each candidate with an exact bounded-transshipment feasibility
// test; no cut structure is used. Exact whenever the true optimum lies on the
// grid; default_grid_step() picks a step for which it always does.
//
// Throws std::invalid_argument if the instance has more than
// kBruteForceMaxNodes nodes or `step` does not divide lambda and every
// capacity.
OverloadVector brute_force_lex_min(const DagOrientation& dag, const Rational& lambda, const Rational& step);
OverloadVector brute_force_lex_min(const DagOrientation& dag, const Rational& lambda);

// 1 / (lcd(capacities, lambda) * lcm(1..n-1)): overload levels are averages
// over at most n-1 nodes, so every level of the optimum lies on this grid.
Rational default_grid_step(const DagOrientation& dag, const Rational& lambda);

}  // namespace loopfree
