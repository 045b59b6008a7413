#include "fixtures.hpp"
#include "oracles.hpp"

#include "loopfree/lfbp.hpp"
#include "loopfree/reversal.hpp"
#include "loopfree/scenario.hpp"
#include "loopfree/sim.hpp"

#include <gtest/gtest.h>

using namespace loopfree;

namespace {

SimConfig lfbp_config(DagOrientation dag, double rate, LfbpParams params) {
    SimConfig config;
    config.network = dag.network_ptr();
    config.commodities = {CommoditySpec{dag.network().source(), dag.network().destination(), rate, 0}};
    config.initial_dags = {std::move(dag)};
    config.lfbp = std::move(params);
    return config;
}

}  // namespace

TEST(LfbpParams, ListsRepeatLastEntry) {
    LfbpParams p;
    p.thresholds = {10.0, 20.0};
    p.periods = {5, 7, 9};
    EXPECT_EQ(p.threshold(0), 10.0);
    EXPECT_EQ(p.threshold(1), 20.0);
    EXPECT_EQ(p.threshold(50), 20.0);
    EXPECT_EQ(p.period(2), 9u);
    EXPECT_EQ(p.period(99), 9u);
}

TEST(MarkStep, ThresholdIsStrictAndMarksStick) {
    auto net = fixtures::line(3);
    LfbpParams params;
    params.thresholds = {5.0};
    SimState state = make_state(lfbp_config(initial_dag(net), 0, params), Policy::Lfbp);
    state.queues[0] = {5, 3, 0};
    mark_step(state, params);
    EXPECT_EQ(state.marks[0], (std::vector<bool>{false, false, false}));
    state.queues[0] = {6, 3, 0};
    mark_step(state, params);
    EXPECT_EQ(state.marks[0], (std::vector<bool>{true, false, false}));
    state.queues[0] = {0, 0, 0};
    mark_step(state, params);
    EXPECT_EQ(state.marks[0], (std::vector<bool>{true, false, false}));
}

TEST(EpochReversal, NoMarksNoChange) {
    auto net = fixtures::grid();
    LfbpParams params;
    params.periods = {4, 9};
    SimState state = make_state(lfbp_config(initial_dag(net), 0, params), Policy::Lfbp);
    DagOrientation before = state.dags[0];
    EXPECT_EQ(epoch_reversal(state, params), 0u);
    EXPECT_TRUE(state.dags[0].same_orientation(before));
    EXPECT_EQ(state.epoch, 1u);
    EXPECT_EQ(state.epoch_remaining, 9u);
    EXPECT_EQ(state.reversal_epochs, 0u);
}

TEST(EpochReversal, TimerExpiry) {
    auto net = fixtures::line(3);
    LfbpParams params;
    params.periods = {3};
    SimState state = make_state(lfbp_config(fixtures::reverse_id_dag(net), 0, params), Policy::Lfbp);
    state.marks[0][0] = true;
    epoch_tick(state, params);
    epoch_tick(state, params);
    EXPECT_EQ(state.epoch, 0u);
    EXPECT_TRUE(state.marks[0][0]);
    epoch_tick(state, params);
    EXPECT_EQ(state.epoch, 1u);
    EXPECT_FALSE(state.marks[0][0]);
    EXPECT_EQ(state.reversed_links, 1u);
    EXPECT_EQ(state.dags[0].tail(*net->find_edge(1, 2)), 1);
    ASSERT_EQ(state.reversal_log.size(), 1u);
    EXPECT_EQ(state.reversal_log[0].marked, 1u);
}

// Marking exactly the smallest min-cut source side reproduces the
// oracle-driven reversal.
TEST(EpochReversal, MatchesOracleStep) {
    std::mt19937_64 rng(51);
    oracle::InstanceShape shape{3, 10, 0.4, 1, 6, 1};
    for (int trial = 0; trial < 200; ++trial) {
        auto net = oracle::random_network(rng, shape);
        DagOrientation dag = oracle::random_dag(net, rng);
        Rational lambda = std::uniform_int_distribution<int>(1, 20)(rng);
        ReversalStep step = reversal_step(dag, lambda);
        if (!step.overloaded) continue;

        LfbpParams params;
        SimState state = make_state(lfbp_config(dag, 0, params), Policy::Lfbp);
        for (NodeId id : *step.overloaded) state.marks[0][net->index_of(id)] = true;
        EXPECT_EQ(epoch_reversal(state, params), step.reversed.size());
        EXPECT_TRUE(state.dags[0].same_orientation(step.dag)) << "trial " << trial;
        EXPECT_EQ(state.dags[0].states(), step.dag.states());
    }
}

TEST(Lfbp, InfiniteThresholdNeverReverses) {
    ScenarioConfig scn = load_scenario(fixtures::scenario_path("fixed_topology.scn"));
    SimConfig config = make_sim_config(scn, 0.9, 1, Policy::Lfbp);
    config.lfbp.thresholds = {kNoThreshold};
    MetricsReport r = lfbp_run(config, 3000);
    EXPECT_EQ(r.reversed_links, 0u);
    EXPECT_TRUE(r.final_dags[0].same_orientation(config.initial_dags[0]));
    EXPECT_EQ(r.delivered, 0u);
}

TEST(Lfbp, ReachesRequiredFlowOnFixedTopology) {
    ScenarioConfig scn = load_scenario(fixtures::scenario_path("fixed_topology.scn"));
    for (double load : {0.5, 0.9}) {
        SimConfig config = make_sim_config(scn, load, 2, Policy::Lfbp);
        MetricsReport r = lfbp_run(config, 20000);
        const DagOrientation& dag = r.final_dags[0];
        EXPECT_TRUE(is_acyclic(dag));
        EXPECT_GE(to_double(max_flow(dag, 0, 5).value), 15.0 * load) << load;
        EXPECT_GT(r.reversal_epochs, 0u);
        // Stable: the backlog at the end is a small multiple of the threshold.
        EXPECT_LT(r.final_backlog, 2000u) << load;
    }
}

// Marks chosen at random rather than from real overload: orientation stays
// acyclic with consistent states, and the honest protocol recovers afterwards.
TEST(Lfbp, SurvivesWrongMarks) {
    ScenarioConfig scn = load_scenario(fixtures::scenario_path("fixed_topology.scn"));
    SimConfig config = make_sim_config(scn, 0.5, 3, Policy::Lfbp);
    SimState state = make_state(config, Policy::Lfbp);
    std::mt19937_64 rng(52);
    for (int k = 0; k < 200; ++k) {
        for (std::size_t i = 0; i < state.marks[0].size(); ++i) state.marks[0][i] = rng() % 2 == 0;
        epoch_reversal(state, config.lfbp);
        ASSERT_TRUE(is_acyclic(state.dags[0]));
        ASSERT_TRUE(states_consistent(state.dags[0]));
    }
    config.initial_dags = {state.dags[0]};
    MetricsReport r = lfbp_run(config, 20000);
    EXPECT_GE(to_double(max_flow(r.final_dags[0], 0, 5).value), 7.5);
    EXPECT_LT(r.final_backlog, 2000u);
}

TEST(Lfbp, AcyclicUnderTopologyChanges) {
    ScenarioConfig scn = load_scenario(fixtures::scenario_path("grid4x4.scn"));
    SimConfig config = make_sim_config(scn, 0.4, 4, Policy::Lfbp);
    config.topology = {0.02, 0.05};
    config.lfbp.thresholds = {20.0};
    config.lfbp.periods = {10};
    config.lfbp.rescale_every = 3;
    SimState state = make_state(config, Policy::Lfbp);
    for (std::uint64_t t = 1; t <= 20000; ++t) {
        arrivals_step(state);
        bp_step(state);
        mark_step(state, config.lfbp);
        epoch_tick(state, config.lfbp);
        topology_step(state);
        state.t = t;
        if (t % 97 == 0) {
            ASSERT_TRUE(is_acyclic(state.dags[0]));
            ASSERT_TRUE(states_consistent(state.dags[0]));
            for (EdgeId e = 0; e < state.live.size(); ++e) ASSERT_EQ(state.dags[0].is_live(e), state.live[e]);
        }
    }
    EXPECT_GT(state.reversal_epochs, 10u);
    EXPECT_GT(state.topology_events, 100u);
}
