#include "loopfree/sim.hpp"

#include "loopfree/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace loopfree {

std::string to_string(Policy policy) {
    return policy == Policy::Bp ? "bp" : "lfbp";
}

Policy parse_policy(const std::string& name) {
    if (name == "bp") return Policy::Bp;
    if (name == "lfbp") return Policy::Lfbp;
    throw ValidationError("policy", "expected bp or lfbp, got '" + name + "'");
}

std::int64_t SimState::total_backlog() const {
    std::int64_t total = 0;
    for (const auto& q : queues) {
        for (std::int64_t x : q) total += x;
    }
    return total;
}

std::int64_t SimState::total_dummies() const {
    std::int64_t total = 0;
    for (const auto& q : dummies) {
        for (std::int64_t x : q) total += x;
    }
    return total;
}

namespace {

constexpr double kMaxRate = 500.0;

double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
    return std::mt19937_64(seq);
}

void fnv_mix(std::uint64_t& hash, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        hash ^= (value >> (8 * i)) & 0xffu;
        hash *= 1099511628211ULL;
    }
}

}  // namespace

std::uint64_t poisson_inverse(double mean, double uniform) {
    if (!(mean > 0.0)) return 0;
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (uniform > cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        if (p == 0.0 && static_cast<double>(k) > mean) break;
        cdf += p;
    }
    return k;
}

SimState make_state(const SimConfig& config, Policy policy) {
    if (!config.network) throw ValidationError("network", "missing");
    const Network& net = *config.network;
    if (config.commodities.empty()) throw ValidationError("commodities", "at least one commodity required");
    if (!(config.topology.fail_prob >= 0.0 && config.topology.fail_prob <= 1.0)) {
        throw ValidationError("topology.fail_prob", "must lie in [0, 1]");
    }
    if (!(config.topology.recover_prob >= 0.0 && config.topology.recover_prob <= 1.0)) {
        throw ValidationError("topology.recover_prob", "must lie in [0, 1]");
    }

    SimState state;
    state.network = config.network;
    state.commodities = config.commodities;
    state.policy = policy;
    state.topology = config.topology;
    state.live.assign(net.edge_count(), true);
    for (const Edge& edge : net.edges()) {
        state.link_capacity.push_back(floor(edge.capacity).convert_to<std::int64_t>());
        state.link_u.push_back(net.index_of(edge.u));
        state.link_v.push_back(net.index_of(edge.v));
    }

    for (std::size_t y = 0; y < config.commodities.size(); ++y) {
        const CommoditySpec& c = config.commodities[y];
        std::string field = "commodities[" + std::to_string(y) + "]";
        if (!net.has_node(c.source)) throw ValidationError(field + ".source", "unknown node");
        if (!net.has_node(c.destination)) throw ValidationError(field + ".destination", "unknown node");
        if (c.source == c.destination) throw ValidationError(field, "source equals destination");
        if (!(c.rate >= 0.0 && c.rate <= kMaxRate)) {
            throw ValidationError(field + ".rate", "must lie in [0, " + std::to_string(kMaxRate) + "]");
        }
        state.source_index.push_back(net.index_of(c.source));
        state.destination_index.push_back(net.index_of(c.destination));
        state.queues.emplace_back(net.node_count(), 0);
        state.dummies.emplace_back(net.node_count(), 0);
        auto dummies = static_cast<std::int64_t>(c.dummy_packets);
        state.queues[y][state.source_index[y]] = dummies;
        state.dummies[y][state.source_index[y]] = dummies;
    }

    if (policy == Policy::Lfbp) {
        const LfbpParams& p = config.lfbp;
        if (p.thresholds.empty()) throw ValidationError("lfbp.thresholds", "empty");
        if (p.periods.empty()) throw ValidationError("lfbp.periods", "empty");
        for (double r : p.thresholds) {
            if (!(r > 0.0)) throw ValidationError("lfbp.thresholds", "must be positive");
        }
        for (std::uint64_t t : p.periods) {
            if (t < 1) throw ValidationError("lfbp.periods", "must be at least 1");
        }
        if (p.delta && *p.delta <= 0) throw ValidationError("lfbp.delta", "must be positive");
        if (config.initial_dags.size() != config.commodities.size()) {
            throw ValidationError("initial_dag", "one orientation per commodity required");
        }
        for (std::size_t y = 0; y < config.commodities.size(); ++y) {
            DagOrientation dag = config.initial_dags[y];
            const Network& view = dag.network();
            if (view.nodes() != net.nodes() || view.edge_count() != net.edge_count() ||
                view.source() != config.commodities[y].source ||
                view.destination() != config.commodities[y].destination) {
                throw ValidationError("initial_dag", "orientation " + std::to_string(y) + " does not match its commodity");
            }
            if (!is_acyclic(dag)) throw ValidationError("initial_dag", "orientation contains a cycle");
            if (p.delta) dag.set_states(dag.states(), *p.delta, dag.state_round());
            dag.set_rescale_every(p.rescale_every);
            for (EdgeId e = 0; e < net.edge_count(); ++e) dag.set_live(e, true);
            state.dags.push_back(std::move(dag));
        }
        state.marks.assign(config.commodities.size(), std::vector<bool>(net.node_count(), false));
        state.epoch_remaining = p.period(0);
    }

    state.arrival_rng = seeded_stream(config.seed, 0xA441u);
    state.topology_rng = seeded_stream(config.seed, 0x7090u);
    return state;
}

void arrivals_step(SimState& state) {
    for (std::size_t y = 0; y < state.commodities.size(); ++y) {
        double u = uniform53(state.arrival_rng);
        std::uint64_t k = poisson_inverse(state.commodities[y].rate, u);
        state.queues[y][state.source_index[y]] += static_cast<std::int64_t>(k);
        state.injected += k;
        fnv_mix(state.arrival_checksum, k);
    }
}

namespace {

struct Transmission {
    EdgeId edge;
    std::size_t from;
    std::size_t to;
    std::size_t commodity;
    std::int64_t differential;
};

}  // namespace

void bp_step(SimState& state) {
    const std::size_t n = state.network->node_count();
    const std::size_t m = state.network->edge_count();
    const std::size_t commodities = state.commodities.size();
    const bool constrained = state.policy == Policy::Lfbp;

    auto backlog = [&](std::size_t y, std::size_t i) -> std::int64_t {
        return i == state.destination_index[y] ? 0 : state.queues[y][i];
    };

    // Each link serves at most one commodity in one direction per slot.
    std::vector<std::vector<Transmission>> outgoing(n);
    for (EdgeId e = 0; e < m; ++e) {
        if (!state.live[e] || state.link_capacity[e] <= 0) continue;
        bool chosen = false;
        Transmission best{e, 0, 0, 0, 0};
        for (std::size_t y = 0; y < commodities; ++y) {
            for (int dir = 0; dir < 2; ++dir) {
                bool forward = dir == 0;
                if (constrained && state.dags[y].is_forward(e) != forward) continue;
                std::size_t i = forward ? state.link_u[e] : state.link_v[e];
                std::size_t j = forward ? state.link_v[e] : state.link_u[e];
                std::int64_t diff = backlog(y, i) - backlog(y, j);
                if (diff > 0 && (!chosen || diff > best.differential)) {
                    best = {e, i, j, y, diff};
                    chosen = true;
                }
            }
        }
        if (chosen) outgoing[best.from].push_back(best);
    }

    std::vector<std::vector<std::int64_t>> available = state.queues;
    std::vector<std::vector<std::int64_t>> dummy_available = state.dummies;
    struct Move {
        std::size_t to;
        std::size_t commodity;
        std::int64_t packets;
        std::int64_t dummy;
    };
    std::vector<Move> moves;
    for (std::size_t i = 0; i < n; ++i) {
        auto& list = outgoing[i];
        std::sort(list.begin(), list.end(), [](const Transmission& a, const Transmission& b) {
            if (a.differential != b.differential) return a.differential > b.differential;
            if (a.to != b.to) return a.to < b.to;
            return a.commodity < b.commodity;
        });
        for (const Transmission& tx : list) {
            std::int64_t& avail = available[tx.commodity][i];
            std::int64_t packets = std::min(state.link_capacity[tx.edge], avail);
            if (packets <= 0) continue;
            avail -= packets;
            std::int64_t& dummy_avail = dummy_available[tx.commodity][i];
            std::int64_t dummy = std::min(dummy_avail, packets);
            dummy_avail -= dummy;
            state.queues[tx.commodity][i] -= packets;
            state.dummies[tx.commodity][i] -= dummy;
            moves.push_back({tx.to, tx.commodity, packets, dummy});
        }
    }
    for (const Move& mv : moves) {
        if (mv.to == state.destination_index[mv.commodity]) {
            state.delivered += static_cast<std::uint64_t>(mv.packets - mv.dummy);
            state.delivered_dummy += static_cast<std::uint64_t>(mv.dummy);
        } else {
            state.queues[mv.commodity][mv.to] += mv.packets;
            state.dummies[mv.commodity][mv.to] += mv.dummy;
        }
    }
}

void topology_step(SimState& state) {
    const std::size_t m = state.network->edge_count();
    for (EdgeId e = 0; e < m; ++e) {
        double u = uniform53(state.topology_rng);
        TopologyEventKind kind;
        if (state.live[e]) {
            if (!(u < state.topology.fail_prob)) continue;
            kind = TopologyEventKind::Remove;
        } else {
            if (!(u < state.topology.recover_prob)) continue;
            kind = TopologyEventKind::Add;
        }
        state.live[e] = kind == TopologyEventKind::Add;
        ++state.topology_events;
        for (DagOrientation& dag : state.dags) dag = apply_topology_event(dag, {kind, e});
    }
}

MetricsReport run(const SimConfig& config, Policy policy, std::uint64_t horizon) {
    SimState state = make_state(config, policy);
    const double m = static_cast<double>(state.network->edge_count());

    MetricsReport report;
    report.policy = policy;
    report.load = config.load;
    report.seed = config.seed;
    report.horizon = horizon;

    const std::uint64_t width = config.bucket_slots == 0 ? horizon + 1 : config.bucket_slots;
    double backlog_sum = 0.0;
    double real_sum = 0.0;
    double live_sum = 0.0;
    std::uint64_t last_delivered = 0;
    std::uint64_t last_reversals = 0;

    auto sample = [&](std::uint64_t t) {
        auto backlog = static_cast<double>(state.total_backlog());
        auto live = static_cast<double>(std::count(state.live.begin(), state.live.end(), true));
        backlog_sum += backlog;
        real_sum += backlog - static_cast<double>(state.total_dummies());
        live_sum += m > 0 ? live / m : 1.0;

        std::uint64_t index = t / width;
        if (report.buckets.size() <= index) {
            report.buckets.push_back(Bucket{index * width, 0, 0.0, 0, 0, 0.0});
        }
        Bucket& bucket = report.buckets.back();
        ++bucket.slots;
        bucket.backlog_sum += backlog;
        bucket.live_sum += live;
        bucket.delivered += state.delivered - last_delivered;
        bucket.reversals += state.reversed_links - last_reversals;
        last_delivered = state.delivered;
        last_reversals = state.reversed_links;
    };

    sample(0);
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        arrivals_step(state);
        bp_step(state);
        if (policy == Policy::Lfbp) {
            mark_step(state, config.lfbp);
            epoch_tick(state, config.lfbp);
        }
        topology_step(state);
        state.t = t;
        sample(t);
    }

    const double samples = static_cast<double>(horizon + 1);
    report.average_backlog = backlog_sum / samples;
    report.average_backlog_real = real_sum / samples;
    report.live_fraction = live_sum / samples;
    report.injected = state.injected;
    report.delivered = state.delivered;
    report.delivered_dummy = state.delivered_dummy;
    report.final_backlog = static_cast<std::uint64_t>(state.total_backlog());
    report.reversal_epochs = state.reversal_epochs;
    report.reversed_links = state.reversed_links;
    report.topology_events = state.topology_events;
    report.arrival_checksum = state.arrival_checksum;
    report.reversal_log = std::move(state.reversal_log);
    report.final_dags = std::move(state.dags);
    return report;
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report, bool header) {
    if (header) out << "slot_bucket,policy,load,total_backlog_avg,delivered,reversals,live_edges\n";
    for (const Bucket& b : report.buckets) {
        double slots = b.slots == 0 ? 1.0 : static_cast<double>(b.slots);
        out << b.start << ',' << to_string(report.policy) << ',' << std::fixed << std::setprecision(4) << report.load
            << ',' << std::setprecision(6) << b.backlog_sum / slots << ',' << b.delivered << ',' << b.reversals << ','
            << std::setprecision(6) << b.live_sum / slots << '\n';
    }
    out << std::defaultfloat;
}

void write_reversal_log_csv(std::ostream& out, const MetricsReport& report) {
    out << "slot,commodity,edges_reversed,marks\n";
    for (const ReversalEvent& ev : report.reversal_log) {
        out << ev.slot << ',' << ev.commodity << ',' << ev.edges_reversed << ',' << ev.marked << '\n';
    }
}

}  // namespace loopfree
