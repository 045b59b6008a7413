#include "fixtures.hpp"

#include "loopfree/experiment.hpp"
#include "loopfree/flow.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace loopfree;

namespace {

std::string summary_of(const ScenarioConfig& scn, const std::vector<MetricsReport>& runs) {
    std::ostringstream out;
    write_summary_csv(out, scn.name, runs);
    return out.str();
}

}  // namespace

TEST(Sweep, OrderedAndIndependentOfJobs) {
    ScenarioConfig scn = load_scenario(fixtures::scenario_path("fixed_topology.scn"));
    scn.loads = {0.4, 0.8};
    SweepOptions options;
    options.horizon = 2000;
    options.seeds = std::vector<std::uint64_t>{3, 4};
    std::vector<MetricsReport> serial = sweep(scn, options);
    options.jobs = 3;
    std::vector<MetricsReport> parallel = sweep(scn, options);
    ASSERT_EQ(serial.size(), 8u);
    EXPECT_EQ(summary_of(scn, serial), summary_of(scn, parallel));
    EXPECT_EQ(serial[0].load, 0.4);
    EXPECT_EQ(serial[0].seed, 3u);
    EXPECT_EQ(serial[0].policy, Policy::Bp);
    EXPECT_EQ(serial[1].policy, Policy::Lfbp);
    EXPECT_EQ(serial[2].seed, 4u);
    EXPECT_EQ(serial[7].load, 0.8);
    EXPECT_EQ(serial[0].arrival_checksum, serial[1].arrival_checksum);
}

TEST(Sweep, WritesFiles) {
    ScenarioConfig scn = load_scenario(fixtures::scenario_path("overload_detect.scn"));
    SweepOptions options;
    options.seeds = std::vector<std::uint64_t>{1};
    auto runs = sweep(scn, options);
    auto dir = std::filesystem::temp_directory_path() / "loopfree_sweep_test";
    std::filesystem::remove_all(dir);
    write_sweep(dir, scn.name, runs);
    for (const char* f : {"summary.csv", "buckets.csv", "reversals.csv"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    std::ifstream in(dir / "summary.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header,
              "scenario,policy,load,seed,horizon,total_backlog_avg,real_backlog_avg,injected,delivered,"
              "delivered_dummy,final_backlog,reversal_epochs,reversed_links,topology_events,live_fraction,"
              "arrival_checksum");
    std::filesystem::remove_all(dir);
}

TEST(ErBatch, ConnectedInstances) {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 50; ++k) {
        Network net = random_er_network(12, 0.2, 1, 10, rng);
        EXPECT_EQ(net.source(), 1);
        EXPECT_EQ(net.destination(), 12);
        EXPECT_GT(max_flow_undirected(net, 1, 12), 0);
        for (const Edge& e : net.edges()) {
            EXPECT_GE(e.capacity, 1);
            EXPECT_LE(e.capacity, 10);
            EXPECT_TRUE(is_integer(e.capacity));
        }
    }
}

TEST(ErBatch, BoundRespectedAndReproducible) {
    ErBatchOptions options;
    options.samples = 40;
    options.min_nodes = 5;
    options.max_nodes = 15;
    options.seed = 5;
    ErBatchResult a = er_batch(options);
    ASSERT_EQ(a.samples.size(), 40u);
    for (const ErSample& s : a.samples) {
        EXPECT_LE(s.iterations, s.bound);
        EXPECT_GE(s.nodes, 5u);
        EXPECT_LE(s.nodes, 15u);
    }
    EXPECT_LE(a.max_bound_ratio, 1.0);
    options.jobs = 2;
    ErBatchResult b = er_batch(options);
    std::ostringstream ca, cb;
    write_er_csv(ca, a);
    write_er_csv(cb, b);
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(ca.str().substr(0, ca.str().find('\n')),
              "index,seed,nodes,edges,max_flow,initial_flow,iterations,bound,bound_exact");
}
