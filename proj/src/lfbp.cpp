#include "loopfree/lfbp.hpp"

#include "loopfree/errors.hpp"
#include "loopfree/sim.hpp"

#include <set>

namespace loopfree {

double LfbpParams::threshold(std::uint64_t epoch) const {
    if (thresholds.empty()) return kNoThreshold;
    return epoch < thresholds.size() ? thresholds[epoch] : thresholds.back();
}

std::uint64_t LfbpParams::period(std::uint64_t epoch) const {
    if (periods.empty()) return 1;
    return epoch < periods.size() ? periods[epoch] : periods.back();
}

void mark_step(SimState& state, const LfbpParams& params) {
    const double r = params.threshold(state.epoch);
    for (std::size_t y = 0; y < state.queues.size(); ++y) {
        for (std::size_t i = 0; i < state.queues[y].size(); ++i) {
            if (i == state.destination_index[y]) continue;
            if (static_cast<double>(state.queues[y][i]) > r) state.marks[y][i] = true;
        }
    }
}

std::size_t epoch_reversal(SimState& state, const LfbpParams& params) {
    const Network& net = *state.network;
    std::size_t total = 0;
    for (std::size_t y = 0; y < state.dags.size(); ++y) {
        const std::vector<bool>& marked = state.marks[y];
        DagOrientation& dag = state.dags[y];
        std::vector<EdgeId> links;
        for (EdgeId e = 0; e < net.edge_count(); ++e) {
            if (!dag.is_live(e)) continue;
            if (!marked[dag.tail_index(e)] && marked[dag.head_index(e)]) links.push_back(e);
        }
        if (links.empty()) continue;

        std::set<NodeId> overloaded;
        for (std::size_t i = 0; i < marked.size(); ++i) {
            if (marked[i]) overloaded.insert(net.id_of(i));
        }
        dag = reverse_links(dag, links, overloaded);
        if (!is_acyclic(dag)) throw InvariantViolation("epoch_reversal: orientation became cyclic");

        total += links.size();
        state.reversed_links += links.size();
        ++state.reversal_epochs;
        state.reversal_log.push_back({state.t + 1, y, links.size(), overloaded.size()});
    }
    ++state.epoch;
    for (auto& marks : state.marks) marks.assign(marks.size(), false);
    state.epoch_remaining = params.period(state.epoch);
    return total;
}

void epoch_tick(SimState& state, const LfbpParams& params) {
    if (state.epoch_remaining > 0) --state.epoch_remaining;
    if (state.epoch_remaining == 0) epoch_reversal(state, params);
}

MetricsReport lfbp_run(const SimConfig& config, std::uint64_t horizon) {
    return run(config, Policy::Lfbp, horizon);
}

}  // namespace loopfree
