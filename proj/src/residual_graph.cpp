#include "loopfree/residual_graph.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace loopfree {

ResidualGraph::ResidualGraph(std::size_t node_count) : adjacency_(node_count) {}

std::size_t ResidualGraph::add_arc(std::size_t from, std::size_t to, const Rational& capacity) {
    if (from >= node_count() || to >= node_count()) throw std::out_of_range("arc endpoint out of range");
    if (capacity < 0) throw std::invalid_argument("negative arc capacity");
    std::size_t arc = capacity_.size();
    capacity_.push_back(capacity);
    halves_.push_back({to});
    halves_.push_back({from});
    residual_.push_back(capacity);
    residual_.push_back(Rational(0));
    adjacency_[from].push_back(2 * arc);
    adjacency_[to].push_back(2 * arc + 1);
    return arc;
}

Rational ResidualGraph::augment(std::size_t source, std::size_t sink) {
    if (source == sink) throw std::invalid_argument("source equals sink");
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    Rational total = 0;
    std::vector<std::size_t> via(node_count());
    std::vector<std::size_t> queue;
    queue.reserve(node_count());
    for (;;) {
        std::fill(via.begin(), via.end(), none);
        queue.clear();
        queue.push_back(source);
        via[source] = none - 1;
        for (std::size_t qi = 0; qi < queue.size() && via[sink] == none; ++qi) {
            std::size_t x = queue[qi];
            for (std::size_t h : adjacency_[x]) {
                std::size_t y = halves_[h].to;
                if (via[y] != none || residual_[h] <= 0) continue;
                via[y] = h;
                queue.push_back(y);
            }
        }
        if (via[sink] == none) break;

        Rational bottleneck = residual_[via[sink]];
        for (std::size_t y = sink; y != source;) {
            std::size_t h = via[y];
            if (residual_[h] < bottleneck) bottleneck = residual_[h];
            y = halves_[h ^ 1].to;
        }
        for (std::size_t y = sink; y != source;) {
            std::size_t h = via[y];
            residual_[h] -= bottleneck;
            residual_[h ^ 1] += bottleneck;
            y = halves_[h ^ 1].to;
        }
        total += bottleneck;
    }
    return total;
}

std::vector<bool> ResidualGraph::reachable_from(std::size_t source) const {
    std::vector<bool> seen(node_count(), false);
    std::vector<std::size_t> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t h : adjacency_[x]) {
            std::size_t y = halves_[h].to;
            if (!seen[y] && residual_[h] > 0) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return seen;
}

std::vector<bool> ResidualGraph::can_reach(std::size_t sink) const {
    // walk backwards: y reaches x if the half-arc y->x has residual
    std::vector<bool> seen(node_count(), false);
    std::vector<std::size_t> stack{sink};
    seen[sink] = true;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t h : adjacency_[x]) {
            std::size_t y = halves_[h].to;
            if (!seen[y] && residual_[h ^ 1] > 0) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return seen;
}

}  // namespace loopfree
