#include "fixtures.hpp"

#include "loopfree/flow.hpp"
#include "loopfree/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace loopfree;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "name": "tiny",
  "network": {"nodes": [1, 2, 3], "edges": [[1, 2, 3], [2, 3, "1/2"]], "source": 1, "destination": 3},
  "commodities": [{"source": 1, "destination": 3, "rate": 2}]
})";

std::string with(const std::string& from, const std::string& to) {
    std::string text = kMinimal;
    auto pos = text.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return text.replace(pos, from.size(), to);
}

std::string field_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "<accepted>";
}

}  // namespace

TEST(Scenario, BundledFilesLoad) {
    ScenarioConfig fixed = load_scenario(fixtures::scenario_path("fixed_topology.scn"));
    EXPECT_EQ(fixed.nodes.size(), 6u);
    EXPECT_EQ(fixed.edges.size(), 8u);
    EXPECT_EQ(max_flow_undirected(*scenario_network(fixed), 0, 5), Rational(15));
    EXPECT_EQ(max_flow(scenario_initial_dag(fixed, 0), 0, 5).value, Rational(0));

    ScenarioConfig grid = load_scenario(fixtures::scenario_path("grid4x4.scn"));
    EXPECT_EQ(grid.nodes.size(), 16u);
    EXPECT_EQ(grid.edges.size(), 24u);
    EXPECT_EQ(grid.topology.fail_prob, 1e-4);
    EXPECT_EQ(grid.topology.recover_prob, 1e-3);

    ScenarioConfig multi = load_scenario(fixtures::scenario_path("grid4x4_multi.scn"));
    ASSERT_EQ(multi.commodities.size(), 3u);
    EXPECT_EQ(multi.commodities[2].rate, 9.86);
    EXPECT_EQ(multi.loads.size(), 9u);
    for (std::size_t y = 0; y < 3; ++y) {
        DagOrientation dag = scenario_initial_dag(multi, y);
        EXPECT_EQ(dag.network().source(), multi.commodities[y].source);
        EXPECT_TRUE(is_acyclic(dag));
    }

    ScenarioConfig detect = load_scenario(fixtures::scenario_path("overload_detect.scn"));
    EXPECT_EQ(detect.seeds.size(), 100u);
}

TEST(Scenario, RoundTrip) {
    for (const char* name : {"fixed_topology.scn", "grid4x4.scn", "grid4x4_multi.scn", "overload_detect.scn"}) {
        ScenarioConfig a = load_scenario(fixtures::scenario_path(name));
        std::string text = scenario_to_string(a);
        ScenarioConfig b = parse_scenario(text);
        EXPECT_EQ(a, b) << name;
        EXPECT_EQ(text, scenario_to_string(b)) << name;
    }
    ScenarioConfig tiny = parse_scenario(kMinimal);
    tiny.lfbp.thresholds = {kNoThreshold, 40.0};
    tiny.lfbp.delta = Rational(1, 7);
    auto path = std::filesystem::temp_directory_path() / "loopfree_roundtrip.scn";
    write_scenario(path, tiny);
    EXPECT_EQ(load_scenario(path), tiny);
    std::filesystem::remove(path);
}

TEST(Scenario, Defaults) {
    ScenarioConfig c = parse_scenario(kMinimal);
    EXPECT_EQ(c.edges[1].capacity, Rational(1, 2));
    EXPECT_EQ(c.initial_dag.kind, InitialDagKind::ById);
    EXPECT_EQ(c.loads, std::vector<double>{1.0});
    EXPECT_EQ(c.lfbp, LfbpParams{});
}

TEST(Scenario, ErrorsNameTheField) {
    EXPECT_EQ(field_of(with("[2, 3, \"1/2\"]", "[2, 3, -4]")), "network.edges[1].capacity");
    try {
        parse_scenario(with("[2, 3, \"1/2\"]", "[2, 3, -4]"));
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("{2,3}"), std::string::npos) << e.what();
    }
    EXPECT_EQ(field_of(with("\"name\": \"tiny\",", "\"name\": \"tiny\", \"colour\": 1,")), "colour");
    EXPECT_EQ(field_of(with("\"rate\": 2", "\"rate\": 2, \"burst\": 1")), "commodities[0].burst");
    EXPECT_EQ(field_of(with("\"rate\": 2", "\"rate\": -2")), "commodities[0].rate");
    EXPECT_EQ(field_of(with("\"destination\": 3, \"rate\"", "\"destination\": 9, \"rate\"")), "commodities[0].destination");
    EXPECT_EQ(field_of(with("\"schema_version\": 1", "\"schema_version\": 2")), "schema_version");
    EXPECT_EQ(field_of(with("[[1, 2, 3],", "[[1, 2],")), "network.edges[0]");
    EXPECT_EQ(field_of(with("}]\n}", "}], \"loads\": [0.5, 0]\n}")), "loads[1]");
    EXPECT_EQ(field_of(with("}]\n}", "}], \"topology\": {\"fail_prob\": 2}\n}")), "topology.fail_prob");
    EXPECT_EQ(field_of(with("}]\n}", "}], \"lfbp\": {\"periods\": [0]}\n}")), "lfbp.periods[0]");
    EXPECT_EQ(field_of("{\"schema_version\": 1,"), "<file>");
    EXPECT_THROW(load_scenario("/nonexistent/x.scn"), ValidationError);
}

TEST(Scenario, ExplicitArcsChecked) {
    std::string valid = with("}]\n}", "}], \"initial_dag\": {\"kind\": \"explicit\", \"arcs\": [[1, 2], [2, 3]]}\n}");
    EXPECT_EQ(field_of(valid), "<accepted>");
    auto net_text = with("[[1, 2, 3], [2, 3, \"1/2\"]]", "[[1, 2, 3], [2, 3, 1], [1, 3, 1]]");
    std::string loop = net_text;
    loop.replace(loop.rfind("}"), 1, ", \"initial_dag\": {\"kind\": \"explicit\", \"arcs\": [[1, 2], [2, 3], [3, 1]]}}");
    EXPECT_EQ(field_of(loop), "initial_dag.arcs");
    std::string partial = net_text;
    partial.replace(partial.rfind("}"), 1, ", \"initial_dag\": {\"kind\": \"explicit\", \"arcs\": [[1, 2]]}}");
    EXPECT_EQ(field_of(partial), "initial_dag.arcs");
}

TEST(Scenario, SimConfigScalesLoadAndDummies) {
    ScenarioConfig multi = load_scenario(fixtures::scenario_path("grid4x4_multi.scn"));
    SimConfig lfbp = make_sim_config(multi, 0.3, 9, Policy::Lfbp);
    EXPECT_DOUBLE_EQ(lfbp.commodities[0].rate, 0.3 * 7.18);
    EXPECT_EQ(lfbp.commodities[0].dummy_packets, 1666u);  // floor(500 / 0.3)
    EXPECT_EQ(lfbp.seed, 9u);
    SimConfig bp = make_sim_config(multi, 0.3, 9, Policy::Bp);
    EXPECT_EQ(bp.commodities[0].dummy_packets, 0u);
    EXPECT_EQ(make_sim_config(multi, 0.5, 1, Policy::Lfbp).commodities[1].dummy_packets, 1000u);
}
