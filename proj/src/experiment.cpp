#include "loopfree/experiment.hpp"

#include "loopfree/flow.hpp"
#include "loopfree/reversal.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace loopfree {

namespace {

// Calls job(i) for i in [0, count) on up to `jobs` threads. The first
// exception thrown by any job is rethrown after all workers stop.
template <class Job>
void parallel_for(std::size_t count, std::size_t jobs, Job job) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<MetricsReport> sweep(const ScenarioConfig& config, const SweepOptions& options) {
    validate(config);
    const std::vector<std::uint64_t>& seeds = options.seeds ? *options.seeds : config.seeds;
    const std::uint64_t horizon = options.horizon ? *options.horizon : config.horizon;

    struct Cell {
        double load;
        std::uint64_t seed;
        Policy policy;
    };
    std::vector<Cell> cells;
    for (double load : config.loads) {
        for (std::uint64_t seed : seeds) {
            for (Policy policy : options.policies) cells.push_back({load, seed, policy});
        }
    }
    std::vector<MetricsReport> results(cells.size());
    parallel_for(cells.size(), options.jobs, [&](std::size_t i) {
        const Cell& cell = cells[i];
        results[i] = run(make_sim_config(config, cell.load, cell.seed, cell.policy), cell.policy, horizon);
    });
    return results;
}

void write_summary_csv(std::ostream& out, const std::string& scenario, const std::vector<MetricsReport>& runs) {
    out << "scenario,policy,load,seed,horizon,total_backlog_avg,real_backlog_avg,injected,delivered,"
           "delivered_dummy,final_backlog,reversal_epochs,reversed_links,topology_events,live_fraction,"
           "arrival_checksum\n";
    for (const MetricsReport& r : runs) {
        out << scenario << ',' << to_string(r.policy) << ',' << std::fixed << std::setprecision(4) << r.load << ','
            << r.seed << ',' << r.horizon << ',' << std::setprecision(6) << r.average_backlog << ','
            << r.average_backlog_real << ',' << r.injected << ',' << r.delivered << ',' << r.delivered_dummy << ','
            << r.final_backlog << ',' << r.reversal_epochs << ',' << r.reversed_links << ',' << r.topology_events
            << ',' << r.live_fraction << ',' << std::hex << r.arrival_checksum << std::dec << '\n';
    }
    out << std::defaultfloat;
}

void write_sweep(const std::filesystem::path& dir, const std::string& scenario, const std::vector<MetricsReport>& runs) {
    std::filesystem::create_directories(dir);
    std::ofstream summary(dir / "summary.csv");
    write_summary_csv(summary, scenario, runs);

    std::ofstream buckets(dir / "buckets.csv");
    buckets << "seed,slot_bucket,policy,load,total_backlog_avg,delivered,reversals,live_edges\n";
    for (const MetricsReport& r : runs) {
        std::ostringstream rows;
        write_metrics_csv(rows, r, false);
        std::istringstream lines(rows.str());
        for (std::string line; std::getline(lines, line);) buckets << r.seed << ',' << line << '\n';
    }

    std::ofstream reversals(dir / "reversals.csv");
    reversals << "policy,load,seed,slot,commodity,edges_reversed,marks\n";
    for (const MetricsReport& r : runs) {
        for (const ReversalEvent& ev : r.reversal_log) {
            reversals << to_string(r.policy) << ',' << std::fixed << std::setprecision(4) << r.load << ',' << r.seed
                      << ',' << ev.slot << ',' << ev.commodity << ',' << ev.edges_reversed << ',' << ev.marked << '\n';
        }
    }
    if (!summary || !buckets || !reversals) throw std::runtime_error("failed writing results to " + dir.string());
}

namespace {

bool connected(const Network& net, NodeId a, NodeId b) {
    std::vector<bool> seen(net.node_count(), false);
    std::vector<std::size_t> stack{net.index_of(a)};
    seen[stack.back()] = true;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (EdgeId e : net.incident(x)) {
            const Edge& edge = net.edges()[e];
            std::size_t y = net.index_of(net.id_of(x) == edge.u ? edge.v : edge.u);
            if (!seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return seen[net.index_of(b)];
}

}  // namespace

Network random_er_network(std::size_t n, double p, std::int64_t cap_min, std::int64_t cap_max, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("random_er_network: need at least two nodes");
    if (cap_min < 1 || cap_max < cap_min) throw std::invalid_argument("random_er_network: bad capacity range");
    std::bernoulli_distribution link(p);
    std::uniform_int_distribution<std::int64_t> cap(cap_min, cap_max);
    std::vector<NodeId> nodes(n);
    std::iota(nodes.begin(), nodes.end(), NodeId{1});
    for (;;) {
        std::vector<Edge> edges;
        for (std::size_t a = 1; a <= n; ++a) {
            for (std::size_t b = a + 1; b <= n; ++b) {
                if (link(rng)) edges.push_back(Edge{NodeId(a), NodeId(b), Rational(cap(rng))});
            }
        }
        Network net(nodes, std::move(edges), 1, static_cast<NodeId>(n));
        if (connected(net, 1, static_cast<NodeId>(n))) return net;
    }
}

DagOrientation random_initial_dag(std::shared_ptr<const Network> net, std::mt19937_64& rng) {
    std::vector<std::size_t> priority(net->node_count());
    std::iota(priority.begin(), priority.end(), std::size_t{0});
    std::shuffle(priority.begin(), priority.end(), rng);
    std::vector<bool> forward;
    for (const Edge& e : net->edges()) forward.push_back(priority[net->index_of(e.u)] < priority[net->index_of(e.v)]);
    return dag_from_directions(std::move(net), std::move(forward));
}

ErBatchResult er_batch(const ErBatchOptions& options) {
    if (options.samples < 1) throw std::invalid_argument("er_batch: samples must be at least 1");
    if (options.min_nodes < 2 || options.max_nodes < options.min_nodes) {
        throw std::invalid_argument("er_batch: bad node range");
    }
    ErBatchResult result;
    result.samples.resize(options.samples);
    parallel_for(options.samples, options.jobs, [&](std::size_t i) {
        ErSample& sample = result.samples[i];
        sample.index = i;
        sample.seed = splitmix64(options.seed ^ splitmix64(i));
        std::mt19937_64 rng(sample.seed);
        std::uniform_int_distribution<std::size_t> size(options.min_nodes, options.max_nodes);
        std::size_t n = size(rng);
        auto net = std::make_shared<const Network>(random_er_network(n, options.p, options.cap_min, options.cap_max, rng));
        DagOrientation dag0 = random_initial_dag(net, rng);

        sample.nodes = net->node_count();
        sample.edges = net->edge_count();
        sample.max_flow = max_flow_undirected(*net, net->source(), net->destination());
        sample.initial_flow = max_flow(dag0, net->source(), net->destination()).value;
        sample.bound = iteration_bound(*net);
        sample.bound_exact = delta_bound(*net).exact;
        ReversalTrace trace = converge(dag0, sample.max_flow);
        sample.iterations = trace.iterations();
    });

    double total = 0.0;
    for (const ErSample& s : result.samples) {
        total += static_cast<double>(s.iterations);
        result.max_iterations = std::max(result.max_iterations, s.iterations);
        if (s.bound > 0) {
            result.max_bound_ratio =
                std::max(result.max_bound_ratio, static_cast<double>(s.iterations) / static_cast<double>(s.bound));
        }
    }
    result.mean_iterations = total / static_cast<double>(result.samples.size());
    return result;
}

void write_er_csv(std::ostream& out, const ErBatchResult& result) {
    out << "index,seed,nodes,edges,max_flow,initial_flow,iterations,bound,bound_exact\n";
    for (const ErSample& s : result.samples) {
        out << s.index << ',' << s.seed << ',' << s.nodes << ',' << s.edges << ',' << to_string(s.max_flow) << ','
            << to_string(s.initial_flow) << ',' << s.iterations << ',' << s.bound << ',' << (s.bound_exact ? 1 : 0)
            << '\n';
    }
}

}  // namespace loopfree
