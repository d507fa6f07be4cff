#include "perckit/balance_sim.hpp"

#include "perckit/errors.hpp"
#include "perckit/io_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_set>

namespace perckit {

std::string schedule(const std::vector<NodeStatus>& statuses) {
    if (statuses.empty())
        throw DomainError("schedule: no node statuses known");
    const NodeStatus* best = nullptr;
    double best_expected = 0.0;
    for (const auto& st : statuses) {
        double expected = static_cast<double>(st.queue_length + 1) / st.throughput;
        if (!best || expected < best_expected ||
            (expected == best_expected && st.node < best->node)) {
            best = &st;
            best_expected = expected;
        }
    }
    return best->node;
}

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw FormatError(path + ": unknown key \"" + it.key() + "\"");
    }
}

double positive_number(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError(path + ": missing required key \"" + key + "\"");
    if (!it->is_number() || !(it->get<double>() > 0.0))
        throw FormatError(path + "." + key + ": expected a number > 0");
    return it->get<double>();
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

struct Event {
    double time = 0.0;
    int kind = 0; // 0 completion, 1 broadcast, 2 arrival; order at equal time
    std::uint64_t seq = 0;
    int node = -1;
    double frame_arrival = 0.0;

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (kind != other.kind) return kind > other.kind;
        return seq > other.seq;
    }
};

struct NodeState {
    std::string id;
    double throughput = 0.0;
    std::deque<double> waiting; // frame arrival times
    bool busy = false;
    double service_start = 0.0;
    double frame_arrival = 0.0;
    std::uint64_t completed = 0;
    double busy_time = 0.0;
    double latency_sum = 0.0;

    std::uint64_t pending() const { return waiting.size() + (busy ? 1 : 0); }
};

} // namespace

SimConfig parse_sim_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("sim config: malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("sim config: top level must be an object");
    check_keys(doc, {"nodes", "sources", "broadcast_interval", "horizon", "seed"},
               "sim config");

    SimConfig cfg;
    auto nodes_it = doc.find("nodes");
    if (nodes_it == doc.end() || !nodes_it->is_array())
        throw FormatError("sim config: \"nodes\" must be an array");
    std::unordered_set<std::string> node_ids;
    for (std::size_t i = 0; i < nodes_it->size(); ++i) {
        std::string path = "nodes[" + std::to_string(i) + "]";
        const json& n = (*nodes_it)[i];
        if (!n.is_object()) throw FormatError(path + ": expected an object");
        check_keys(n, {"id", "throughput"}, path);
        NodeSpec spec;
        auto id_it = n.find("id");
        if (id_it == n.end() || !id_it->is_string())
            throw FormatError(path + ".id: expected a string");
        spec.id = id_it->get<std::string>();
        spec.throughput = positive_number(n, "throughput", path);
        if (!node_ids.insert(spec.id).second)
            throw FormatError(path + ".id: duplicate node id \"" + spec.id + "\"");
        cfg.nodes.push_back(std::move(spec));
    }

    auto sources_it = doc.find("sources");
    if (sources_it == doc.end() || !sources_it->is_array())
        throw FormatError("sim config: \"sources\" must be an array");
    std::unordered_set<std::string> source_ids;
    for (std::size_t i = 0; i < sources_it->size(); ++i) {
        std::string path = "sources[" + std::to_string(i) + "]";
        const json& s = (*sources_it)[i];
        if (!s.is_object()) throw FormatError(path + ": expected an object");
        check_keys(s, {"id", "frame_rate", "arrival"}, path);
        SourceSpec spec;
        auto id_it = s.find("id");
        if (id_it == s.end() || !id_it->is_string())
            throw FormatError(path + ".id: expected a string");
        spec.id = id_it->get<std::string>();
        spec.frame_rate = positive_number(s, "frame_rate", path);
        if (s.contains("arrival")) {
            std::string kind = s["arrival"].is_string() ? s["arrival"].get<std::string>() : "";
            if (kind == "deterministic")
                spec.arrival = ArrivalKind::Deterministic;
            else if (kind == "poisson")
                spec.arrival = ArrivalKind::Poisson;
            else
                throw FormatError(path + ".arrival: expected \"deterministic\" or \"poisson\"");
        }
        if (!source_ids.insert(spec.id).second)
            throw FormatError(path + ".id: duplicate source id \"" + spec.id + "\"");
        cfg.sources.push_back(std::move(spec));
    }

    if (doc.contains("broadcast_interval"))
        cfg.broadcast_interval = positive_number(doc, "broadcast_interval", "sim config");
    cfg.horizon = positive_number(doc, "horizon", "sim config");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0)
            throw FormatError("sim config.seed: expected an integer >= 0");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    return cfg;
}

SimMetrics run_sim(const SimConfig& cfg, SimTrace* trace) {
    if (!(cfg.horizon > 0.0)) throw FormatError("sim config: horizon must be > 0");
    if (!(cfg.broadcast_interval > 0.0))
        throw FormatError("sim config: broadcast_interval must be > 0");
    for (const auto& n : cfg.nodes)
        if (!(n.throughput > 0.0))
            throw FormatError("sim config: node throughput must be > 0");
    for (const auto& s : cfg.sources)
        if (!(s.frame_rate > 0.0))
            throw FormatError("sim config: source frame_rate must be > 0");
    if (!cfg.sources.empty() && cfg.nodes.empty())
        throw FormatError("sim config: sources present but no nodes");

    std::vector<NodeState> nodes;
    for (const auto& spec : cfg.nodes) {
        NodeState st;
        st.id = spec.id;
        st.throughput = spec.throughput;
        nodes.push_back(std::move(st));
    }

    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
    std::uint64_t seq = 0;
    std::uint64_t arrived = 0;

    // All frame arrivals are generated up front; randomness is confined to
    // per-source streams so adding a source does not disturb the others.
    std::uint64_t seed_state = cfg.seed;
    for (const auto& src : cfg.sources) {
        std::uint64_t sub_seed = splitmix64(seed_state);
        if (src.arrival == ArrivalKind::Deterministic) {
            for (std::uint64_t k = 0;; ++k) {
                double t = static_cast<double>(k) / src.frame_rate;
                if (t >= cfg.horizon) break;
                events.push({t, 2, seq++, -1, t});
                ++arrived;
            }
        } else {
            std::mt19937_64 rng(sub_seed);
            double t = -std::log1p(-uniform01(rng)) / src.frame_rate;
            while (t < cfg.horizon) {
                events.push({t, 2, seq++, -1, t});
                ++arrived;
                t += -std::log1p(-uniform01(rng)) / src.frame_rate;
            }
        }
    }

    for (std::uint64_t k = 0;; ++k) {
        double t = static_cast<double>(k) * cfg.broadcast_interval;
        if (t > cfg.horizon) break;
        events.push({t, 1, seq++, -1, 0.0});
    }

    std::vector<NodeStatus> statuses;

    auto start_service = [&](int ni, double now, double frame_arrival) {
        NodeState& node = nodes[ni];
        node.busy = true;
        node.service_start = now;
        node.frame_arrival = frame_arrival;
        events.push({now + 1.0 / node.throughput, 0, seq++, ni, frame_arrival});
    };

    while (!events.empty() && events.top().time <= cfg.horizon) {
        Event ev = events.top();
        events.pop();
        switch (ev.kind) {
            case 0: { // service completion
                NodeState& node = nodes[ev.node];
                node.completed += 1;
                node.busy_time += 1.0 / node.throughput;
                node.latency_sum += ev.time - node.frame_arrival;
                node.busy = false;
                if (!node.waiting.empty()) {
                    double next_arrival = node.waiting.front();
                    node.waiting.pop_front();
                    start_service(ev.node, ev.time, next_arrival);
                }
                break;
            }
            case 1: { // status broadcast tick
                statuses.clear();
                for (const auto& node : nodes)
                    statuses.push_back({node.id, node.pending(), node.throughput, ev.time});
                break;
            }
            case 2: { // frame arrival -> dispatch on last-known statuses
                std::string chosen = schedule(statuses);
                int ni = 0;
                for (std::size_t i = 0; i < nodes.size(); ++i)
                    if (nodes[i].id == chosen) { ni = static_cast<int>(i); break; }
                if (trace) {
                    double st_time = 0.0;
                    for (const auto& st : statuses)
                        if (st.node == chosen) st_time = st.timestamp;
                    trace->push_back({ev.time, chosen, st_time});
                }
                NodeState& node = nodes[ni];
                if (node.busy)
                    node.waiting.push_back(ev.frame_arrival);
                else
                    start_service(ni, ev.time, ev.frame_arrival);
                break;
            }
        }
    }

    SimMetrics metrics;
    metrics.arrived = arrived;
    metrics.dropped = 0;
    double min_util = 0.0, max_util = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        NodeState& node = nodes[i];
        if (node.busy) node.busy_time += cfg.horizon - node.service_start;
        NodeMetrics nm;
        nm.id = node.id;
        nm.frames_completed = node.completed;
        nm.utilization = node.busy_time / cfg.horizon;
        nm.mean_latency = node.completed > 0
                              ? node.latency_sum / static_cast<double>(node.completed)
                              : 0.0;
        metrics.completed += node.completed;
        metrics.queued_at_end += node.pending();
        if (i == 0) {
            min_util = max_util = nm.utilization;
        } else {
            min_util = std::min(min_util, nm.utilization);
            max_util = std::max(max_util, nm.utilization);
        }
        metrics.nodes.push_back(std::move(nm));
    }
    metrics.imbalance = metrics.nodes.empty() ? 0.0 : max_util - min_util;
    return metrics;
}

std::string metrics_to_csv(const SimMetrics& m) {
    std::ostringstream out;
    out << "row,id,frames_completed,utilization,mean_latency,"
           "arrived,completed,queued_at_end,dropped,imbalance\n";
    for (const auto& n : m.nodes)
        out << "node," << n.id << ',' << n.frames_completed << ','
            << format_fixed(n.utilization, 6) << ',' << format_fixed(n.mean_latency, 6)
            << ",,,,,\n";
    out << "total,,,,," << m.arrived << ',' << m.completed << ',' << m.queued_at_end << ','
        << m.dropped << ',' << format_fixed(m.imbalance, 6) << '\n';
    return out.str();
}

} // namespace perckit
