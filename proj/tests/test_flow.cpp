#include "fixtures.hpp"
#include "oracles.hpp"

#include "loopfree/flow.hpp"

#include <gtest/gtest.h>

using namespace loopfree;

TEST(MaxFlow, KnownNetworks) {
    EXPECT_EQ(max_flow_undirected(*fixtures::small_fixed(), 0, 5), Rational(15));
    EXPECT_EQ(max_flow_undirected(*fixtures::grid(), 1, 16), Rational(12));

    DagOrientation dead = initial_dag(fixtures::grid());
    for (EdgeId e = 0; e < dead.network().edge_count(); ++e) dead.set_live(e, false);
    EXPECT_EQ(max_flow_undirected(dead, 1, 16), Rational(0));
    EXPECT_EQ(max_flow(dead, 1, 16).value, Rational(0));

    EXPECT_EQ(max_flow(fixtures::reverse_id_dag(fixtures::small_fixed()), 0, 5).value, Rational(0));
    EXPECT_THROW(max_flow(initial_dag(fixtures::grid()), 3, 3), std::invalid_argument);
}

TEST(MaxFlow, MatchesEnumeration) {
    std::mt19937_64 rng(11);
    oracle::InstanceShape shape{2, 5, 0.6, 0, 3, 1};
    for (int trial = 0; trial < 200; ++trial) {
        auto net = oracle::random_network(rng, shape);
        if (net->edge_count() > 8) continue;
        DagOrientation dag = oracle::random_dag(net, rng);
        FlowAllocation f = max_flow(dag, net->source(), net->destination());
        ASSERT_EQ(f.value, oracle::enumerate_max_flow(dag, net->source(), net->destination())) << "trial " << trial;
        for (EdgeId e = 0; e < net->edge_count(); ++e) {
            EXPECT_GE(f.flow[e], 0);
            EXPECT_LE(f.flow[e], net->edges()[e].capacity);
        }
    }
}

TEST(MinCut, SmallestMatchesEnumeration) {
    std::mt19937_64 rng(12);
    oracle::InstanceShape shape{2, 9, 0.5, 1, 4, 2};
    for (int trial = 0; trial < 300; ++trial) {
        auto net = oracle::random_network(rng, shape);
        DagOrientation dag = oracle::random_dag(net, rng);
        CutPartition cut = smallest_min_cut(dag, net->source(), net->destination());
        oracle::EnumeratedCut brute = oracle::enumerate_smallest_min_cut(dag, net->source(), net->destination());
        ASSERT_TRUE(brute.unique_smallest);
        EXPECT_EQ(cut.capacity, brute.capacity);
        EXPECT_EQ(cut.capacity, max_flow(dag, net->source(), net->destination()).value);
        EXPECT_EQ(cut.source_side, brute.source_side) << "trial " << trial;
    }
}

TEST(MinCut, CapacityRejectsOverlap) {
    DagOrientation dag = initial_dag(fixtures::small_fixed());
    EXPECT_THROW(cut_capacity(dag, {0, 1}, {1, 5}), std::invalid_argument);
    EXPECT_EQ(cut_capacity(dag, {0}, {1, 2, 3, 4, 5}), Rational(20));
}

TEST(OptimalDag, AchievesUndirectedMaxFlow) {
    auto fixed = fixtures::small_fixed();
    DagOrientation best = optimal_dag(fixed);
    EXPECT_EQ(max_flow(best, 0, 5).value, Rational(15));

    std::mt19937_64 rng(13);
    oracle::InstanceShape shape{2, 12, 0.4, 1, 9, 3};
    for (int trial = 0; trial < 300; ++trial) {
        auto net = oracle::random_network(rng, shape);
        DagOrientation dag = optimal_dag(net);
        ASSERT_TRUE(is_acyclic(dag));
        ASSERT_TRUE(states_consistent(dag));
        EXPECT_EQ(max_flow(dag, net->source(), net->destination()).value,
                  max_flow_undirected(*net, net->source(), net->destination()))
            << "trial " << trial;
    }
}

TEST(OptimalDag, TreePointsAtDestination) {
    auto tree = fixtures::make_network({1, 2, 3, 4, 5}, {{1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {4, 5, 1}}, 1, 5);
    DagOrientation dag = optimal_dag(tree);
    EXPECT_EQ(dag.tail(*tree->find_edge(1, 2)), 1);
    EXPECT_EQ(dag.tail(*tree->find_edge(2, 4)), 2);
    EXPECT_EQ(dag.tail(*tree->find_edge(4, 5)), 4);
}

TEST(DeltaBound, ExhaustiveAndAnalytic) {
    auto a = fixtures::make_network({1, 2, 3}, {{1, 2, 1}, {2, 3, 2}}, 1, 3);
    EXPECT_EQ(delta_bound(*a, DeltaMode::Exhaustive).value, Rational(1));
    EXPECT_TRUE(delta_bound(*a).exact);

    auto b = fixtures::make_network({1, 2, 3}, {{1, 2, Rational(1, 2)}, {2, 3, Rational(1, 3)}}, 1, 3);
    // scaled by 6: {3, 2}, subset sums {0, 2, 3, 5}
    EXPECT_EQ(delta_bound(*b, DeltaMode::Exhaustive).value, Rational(1, 6));
    EXPECT_EQ(delta_bound(*b, DeltaMode::Analytic).value, Rational(1, 6));
    EXPECT_FALSE(delta_bound(*b, DeltaMode::Analytic).exact);

    auto c = fixtures::make_network({1, 2, 3}, {{1, 2, 4}, {2, 3, 6}}, 1, 3);
    EXPECT_EQ(delta_bound(*c).value, Rational(2));

    auto zero = fixtures::make_network({1, 2}, {{1, 2, 0}}, 1, 2);
    EXPECT_THROW(delta_bound(*zero), std::invalid_argument);

    auto g = fixtures::grid();
    EXPECT_FALSE(delta_bound(*g).exact);
    EXPECT_THROW(delta_bound(*g, DeltaMode::Exhaustive), std::invalid_argument);
}

// The exhaustive value lower-bounds every gap between two actual cut capacities.
TEST(DeltaBound, BelowEveryCutGap) {
    std::mt19937_64 rng(14);
    oracle::InstanceShape shape{3, 7, 0.5, 1, 6, 2};
    for (int trial = 0; trial < 100; ++trial) {
        auto net = oracle::random_network(rng, shape);
        if (net->edge_count() == 0) continue;
        Rational delta = delta_bound(*net).value;
        DagOrientation dag = oracle::random_dag(net, rng);
        std::vector<Rational> caps;
        std::vector<NodeId> inner(net->nodes().begin() + 1, net->nodes().end() - 1);
        for (std::uint64_t mask = 0; mask < (1u << inner.size()); ++mask) {
            std::set<NodeId> a{net->source()}, b{net->destination()};
            for (std::size_t k = 0; k < inner.size(); ++k) (mask >> k & 1 ? a : b).insert(inner[k]);
            caps.push_back(cut_capacity(dag, a, b));
        }
        for (const Rational& x : caps) {
            for (const Rational& y : caps) {
                if (x != y) {
                    EXPECT_GE(boost::multiprecision::abs(x - y), delta);
                }
            }
        }
    }
}
