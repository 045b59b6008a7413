#pragma once

#include "loopfree/rational.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace loopfree {

struct SimState;
struct SimConfig;
struct MetricsReport;

// Detection threshold R_k and period T_k for epoch k (from 0). Past the end of
// a list its last entry applies.
struct LfbpParams {
    std::vector<double> thresholds{60.0};
    std::vector<std::uint64_t> periods{50};
    std::optional<Rational> delta;  // overrides the initial DAG's state offset
    std::uint32_t rescale_every = 32;

    double threshold(std::uint64_t epoch) const;
    std::uint64_t period(std::uint64_t epoch) const;

    friend bool operator==(const LfbpParams&, const LfbpParams&) = default;
};

inline constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

// Marks every (node, commodity) whose backlog exceeds the current threshold.
// Marks stay until the epoch ends.
void mark_step(SimState& state, const LfbpParams& params);

// Per commodity, flips every live link from an unmarked to a marked node and
// lowers the marked nodes' states. Advances the epoch and clears all marks.
// Returns the number of links reversed over all commodities.
std::size_t epoch_reversal(SimState& state, const LfbpParams& params);

// Counts down the epoch timer, running epoch_reversal when it expires.
void epoch_tick(SimState& state, const LfbpParams& params);

// Full LFBP simulation: BP along each commodity's DAG plus marking and
// epoch reversals. Same as run(config, Policy::Lfbp, horizon).
MetricsReport lfbp_run(const SimConfig& config, std::uint64_t horizon);

}  // namespace loopfree
