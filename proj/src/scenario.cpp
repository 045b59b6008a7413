#include "loopfree/scenario.hpp"

#include "loopfree/flow.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace loopfree {

using nlohmann::json;

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    if (a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        const Edge& x = a.edges[i];
        const Edge& y = b.edges[i];
        if (x.u != y.u || x.v != y.v || x.capacity != y.capacity) return false;
    }
    return a.name == b.name && a.nodes == b.nodes && a.source == b.source && a.destination == b.destination &&
           a.commodities == b.commodities && a.initial_dag == b.initial_dag && a.lfbp == b.lfbp &&
           a.topology == b.topology && a.loads == b.loads && a.horizon == b.horizon && a.seeds == b.seeds &&
           a.bucket_slots == b.bucket_slots;
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) known = known || it.key() == key;
        if (!known) throw ValidationError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(field, "missing");
    return *it;
}

std::int64_t as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) throw ValidationError(field, "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t as_uint(const json& v, const std::string& field) {
    std::int64_t x = as_int(v, field);
    if (x < 0) throw ValidationError(field, "must not be negative");
    return static_cast<std::uint64_t>(x);
}

double as_double(const json& v, const std::string& field) {
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) return kNoThreshold;
    if (!v.is_number()) throw ValidationError(field, "expected a number");
    return v.get<double>();
}

Rational as_rational(const json& v, const std::string& field) {
    try {
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_number_float()) return parse_rational(v.dump());
        if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(field, e.what());
    }
    throw ValidationError(field, "expected a number or a \"p/q\" string");
}

const json& as_array(const json& v, const std::string& field) {
    if (!v.is_array()) throw ValidationError(field, "expected an array");
    return v;
}

json rational_json(const Rational& x) {
    if (is_integer(x)) return json(numerator(x).convert_to<std::int64_t>());
    return json(to_string(x));
}

json double_json(double x) {
    if (std::isinf(x)) return json("inf");
    return json(x);
}

const char* kind_name(InitialDagKind kind) {
    switch (kind) {
        case InitialDagKind::ById: return "by_id";
        case InitialDagKind::Explicit: return "explicit";
        case InitialDagKind::Optimal: return "optimal";
    }
    return "by_id";
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("<file>", e.what());
    }
    check_keys(root, "", {"schema_version", "name", "network", "commodities", "initial_dag", "lfbp", "topology",
                          "loads", "horizon", "seeds", "bucket_slots"});
    if (as_int(require(root, "schema_version", "schema_version"), "schema_version") != kScenarioSchemaVersion) {
        throw ValidationError("schema_version", "unsupported version");
    }

    ScenarioConfig cfg;
    if (root.contains("name")) {
        if (!root["name"].is_string()) throw ValidationError("name", "expected a string");
        cfg.name = root["name"].get<std::string>();
    }

    const json& network = require(root, "network", "network");
    check_keys(network, "network", {"nodes", "edges", "source", "destination"});
    const json& nodes = as_array(require(network, "nodes", "network.nodes"), "network.nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        cfg.nodes.push_back(as_int(nodes[i], "network.nodes[" + std::to_string(i) + "]"));
    }
    const json& edges = as_array(require(network, "edges", "network.edges"), "network.edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        std::string field = "network.edges[" + std::to_string(i) + "]";
        if (!edges[i].is_array() || edges[i].size() != 3) throw ValidationError(field, "expected [u, v, capacity]");
        cfg.edges.push_back(
            Edge{as_int(edges[i][0], field), as_int(edges[i][1], field), as_rational(edges[i][2], field + ".capacity")});
    }
    cfg.source = as_int(require(network, "source", "network.source"), "network.source");
    cfg.destination = as_int(require(network, "destination", "network.destination"), "network.destination");

    const json& commodities = as_array(require(root, "commodities", "commodities"), "commodities");
    for (std::size_t i = 0; i < commodities.size(); ++i) {
        std::string field = "commodities[" + std::to_string(i) + "]";
        const json& c = commodities[i];
        check_keys(c, field, {"source", "destination", "rate", "dummy_packets", "dummy_inverse_load", "dummies_for_bp"});
        ScenarioCommodity sc;
        sc.source = as_int(require(c, "source", field + ".source"), field + ".source");
        sc.destination = as_int(require(c, "destination", field + ".destination"), field + ".destination");
        sc.rate = as_double(require(c, "rate", field + ".rate"), field + ".rate");
        if (c.contains("dummy_packets")) sc.dummy_packets = as_uint(c["dummy_packets"], field + ".dummy_packets");
        if (c.contains("dummy_inverse_load")) {
            sc.dummy_inverse_load = as_double(c["dummy_inverse_load"], field + ".dummy_inverse_load");
        }
        if (c.contains("dummies_for_bp")) {
            if (!c["dummies_for_bp"].is_boolean()) throw ValidationError(field + ".dummies_for_bp", "expected a boolean");
            sc.dummies_for_bp = c["dummies_for_bp"].get<bool>();
        }
        cfg.commodities.push_back(sc);
    }

    if (root.contains("initial_dag")) {
        const json& d = root["initial_dag"];
        check_keys(d, "initial_dag", {"kind", "arcs"});
        const json& kind = require(d, "kind", "initial_dag.kind");
        std::string k = kind.is_string() ? kind.get<std::string>() : "";
        if (k == "by_id") {
            cfg.initial_dag.kind = InitialDagKind::ById;
        } else if (k == "explicit") {
            cfg.initial_dag.kind = InitialDagKind::Explicit;
        } else if (k == "optimal") {
            cfg.initial_dag.kind = InitialDagKind::Optimal;
        } else {
            throw ValidationError("initial_dag.kind", "expected by_id, explicit or optimal");
        }
        if (d.contains("arcs")) {
            const json& arcs = as_array(d["arcs"], "initial_dag.arcs");
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                std::string field = "initial_dag.arcs[" + std::to_string(i) + "]";
                if (!arcs[i].is_array() || arcs[i].size() != 2) throw ValidationError(field, "expected [tail, head]");
                cfg.initial_dag.arcs.emplace_back(as_int(arcs[i][0], field), as_int(arcs[i][1], field));
            }
        }
    }

    if (root.contains("lfbp")) {
        const json& l = root["lfbp"];
        check_keys(l, "lfbp", {"thresholds", "periods", "rescale_every", "delta"});
        if (l.contains("thresholds")) {
            cfg.lfbp.thresholds.clear();
            const json& th = as_array(l["thresholds"], "lfbp.thresholds");
            for (std::size_t i = 0; i < th.size(); ++i) {
                cfg.lfbp.thresholds.push_back(as_double(th[i], "lfbp.thresholds[" + std::to_string(i) + "]"));
            }
        }
        if (l.contains("periods")) {
            cfg.lfbp.periods.clear();
            const json& pe = as_array(l["periods"], "lfbp.periods");
            for (std::size_t i = 0; i < pe.size(); ++i) {
                cfg.lfbp.periods.push_back(as_uint(pe[i], "lfbp.periods[" + std::to_string(i) + "]"));
            }
        }
        if (l.contains("rescale_every")) {
            cfg.lfbp.rescale_every = static_cast<std::uint32_t>(as_uint(l["rescale_every"], "lfbp.rescale_every"));
        }
        if (l.contains("delta")) cfg.lfbp.delta = as_rational(l["delta"], "lfbp.delta");
    }

    if (root.contains("topology")) {
        const json& t = root["topology"];
        check_keys(t, "topology", {"fail_prob", "recover_prob"});
        if (t.contains("fail_prob")) cfg.topology.fail_prob = as_double(t["fail_prob"], "topology.fail_prob");
        if (t.contains("recover_prob")) cfg.topology.recover_prob = as_double(t["recover_prob"], "topology.recover_prob");
    }

    if (root.contains("loads")) {
        cfg.loads.clear();
        const json& loads = as_array(root["loads"], "loads");
        for (std::size_t i = 0; i < loads.size(); ++i) {
            cfg.loads.push_back(as_double(loads[i], "loads[" + std::to_string(i) + "]"));
        }
    }
    if (root.contains("horizon")) cfg.horizon = as_uint(root["horizon"], "horizon");
    if (root.contains("seeds")) {
        cfg.seeds.clear();
        const json& seeds = as_array(root["seeds"], "seeds");
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            cfg.seeds.push_back(as_uint(seeds[i], "seeds[" + std::to_string(i) + "]"));
        }
    }
    if (root.contains("bucket_slots")) cfg.bucket_slots = as_uint(root["bucket_slots"], "bucket_slots");

    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("<file>", "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::string scenario_to_string(const ScenarioConfig& config) {
    json root;
    root["schema_version"] = kScenarioSchemaVersion;
    root["name"] = config.name;
    json edges = json::array();
    for (const Edge& e : config.edges) edges.push_back(json::array({e.u, e.v, rational_json(e.capacity)}));
    root["network"] = {{"nodes", config.nodes},
                       {"edges", edges},
                       {"source", config.source},
                       {"destination", config.destination}};
    json commodities = json::array();
    for (const ScenarioCommodity& c : config.commodities) {
        commodities.push_back({{"source", c.source},
                               {"destination", c.destination},
                               {"rate", c.rate},
                               {"dummy_packets", c.dummy_packets},
                               {"dummy_inverse_load", c.dummy_inverse_load},
                               {"dummies_for_bp", c.dummies_for_bp}});
    }
    root["commodities"] = commodities;
    json arcs = json::array();
    for (auto [t, h] : config.initial_dag.arcs) arcs.push_back(json::array({t, h}));
    root["initial_dag"] = {{"kind", kind_name(config.initial_dag.kind)}, {"arcs", arcs}};
    json thresholds = json::array();
    for (double r : config.lfbp.thresholds) thresholds.push_back(double_json(r));
    root["lfbp"] = {{"thresholds", thresholds},
                    {"periods", config.lfbp.periods},
                    {"rescale_every", config.lfbp.rescale_every}};
    if (config.lfbp.delta) root["lfbp"]["delta"] = rational_json(*config.lfbp.delta);
    root["topology"] = {{"fail_prob", config.topology.fail_prob}, {"recover_prob", config.topology.recover_prob}};
    json loads = json::array();
    for (double x : config.loads) loads.push_back(double_json(x));
    root["loads"] = loads;
    root["horizon"] = config.horizon;
    root["seeds"] = config.seeds;
    root["bucket_slots"] = config.bucket_slots;
    return root.dump(2) + "\n";
}

void write_scenario(const std::filesystem::path& path, const ScenarioConfig& config) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << scenario_to_string(config);
}

std::shared_ptr<const Network> scenario_network(const ScenarioConfig& config) {
    try {
        return std::make_shared<const Network>(config.nodes, config.edges, config.source, config.destination);
    } catch (const std::invalid_argument& e) {
        throw ValidationError("network", e.what());
    }
}

DagOrientation scenario_initial_dag(const ScenarioConfig& config, std::size_t commodity) {
    auto base = scenario_network(config);
    const ScenarioCommodity& c = config.commodities.at(commodity);
    auto view = std::make_shared<const Network>(base->with_endpoints(c.source, c.destination));
    switch (config.initial_dag.kind) {
        case InitialDagKind::ById: return initial_dag(view);
        case InitialDagKind::Optimal: return optimal_dag(view);
        case InitialDagKind::Explicit:
            try {
                return dag_from_arcs(view, config.initial_dag.arcs);
            } catch (const std::invalid_argument& e) {
                throw ValidationError("initial_dag.arcs", e.what());
            }
    }
    return initial_dag(view);
}

void validate(const ScenarioConfig& config) {
    for (std::size_t i = 0; i < config.edges.size(); ++i) {
        const Edge& e = config.edges[i];
        if (e.capacity < 0) {
            throw ValidationError("network.edges[" + std::to_string(i) + "].capacity",
                                  "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                      "} has negative capacity " + to_string(e.capacity));
        }
    }
    auto net = scenario_network(config);
    if (config.commodities.empty()) throw ValidationError("commodities", "at least one commodity required");
    for (std::size_t i = 0; i < config.commodities.size(); ++i) {
        const ScenarioCommodity& c = config.commodities[i];
        std::string field = "commodities[" + std::to_string(i) + "]";
        if (!net->has_node(c.source)) throw ValidationError(field + ".source", "unknown node");
        if (!net->has_node(c.destination)) throw ValidationError(field + ".destination", "unknown node");
        if (c.source == c.destination) throw ValidationError(field, "source equals destination");
        if (!(c.rate >= 0.0) || std::isinf(c.rate)) throw ValidationError(field + ".rate", "must be finite and >= 0");
        if (!(c.dummy_inverse_load >= 0.0) || std::isinf(c.dummy_inverse_load)) {
            throw ValidationError(field + ".dummy_inverse_load", "must be finite and >= 0");
        }
    }
    for (std::size_t i = 0; i < config.lfbp.thresholds.size(); ++i) {
        if (!(config.lfbp.thresholds[i] > 0.0)) {
            throw ValidationError("lfbp.thresholds[" + std::to_string(i) + "]", "must be positive");
        }
    }
    if (config.lfbp.thresholds.empty()) throw ValidationError("lfbp.thresholds", "empty");
    if (config.lfbp.periods.empty()) throw ValidationError("lfbp.periods", "empty");
    for (std::size_t i = 0; i < config.lfbp.periods.size(); ++i) {
        if (config.lfbp.periods[i] < 1) throw ValidationError("lfbp.periods[" + std::to_string(i) + "]", "must be >= 1");
    }
    if (config.lfbp.delta && *config.lfbp.delta <= 0) throw ValidationError("lfbp.delta", "must be positive");
    for (auto [name, p] : {std::pair{"topology.fail_prob", config.topology.fail_prob},
                           std::pair{"topology.recover_prob", config.topology.recover_prob}}) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(name, "must lie in [0, 1]");
    }
    if (config.loads.empty()) throw ValidationError("loads", "empty");
    for (std::size_t i = 0; i < config.loads.size(); ++i) {
        double x = config.loads[i];
        if (!(x > 0.0) || std::isinf(x)) throw ValidationError("loads[" + std::to_string(i) + "]", "must be positive");
    }
    if (config.seeds.empty()) throw ValidationError("seeds", "empty");
    if (config.initial_dag.kind == InitialDagKind::Explicit) {
        for (std::size_t y = 0; y < config.commodities.size(); ++y) scenario_initial_dag(config, y);
    } else if (!config.initial_dag.arcs.empty()) {
        throw ValidationError("initial_dag.arcs", "only allowed with kind explicit");
    }
}

SimConfig make_sim_config(const ScenarioConfig& config, double load, std::uint64_t seed, Policy policy) {
    SimConfig sim;
    sim.network = scenario_network(config);
    for (std::size_t y = 0; y < config.commodities.size(); ++y) {
        const ScenarioCommodity& c = config.commodities[y];
        CommoditySpec spec{c.source, c.destination, load * c.rate, 0};
        if (policy == Policy::Lfbp || c.dummies_for_bp) {
            spec.dummy_packets = c.dummy_inverse_load > 0.0
                                     ? static_cast<std::uint64_t>(std::floor(c.dummy_inverse_load / load + 1e-9))
                                     : c.dummy_packets;
        }
        sim.commodities.push_back(spec);
        if (policy == Policy::Lfbp) sim.initial_dags.push_back(scenario_initial_dag(config, y));
    }
    sim.topology = config.topology;
    sim.lfbp = config.lfbp;
    sim.seed = seed;
    sim.bucket_slots = config.bucket_slots;
    sim.load = load;
    return sim;
}

}  // namespace loopfree
