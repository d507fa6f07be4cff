#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace perckit {

// A node's last broadcast load report, as the dispatcher knows it.
struct NodeStatus {
    std::string node;
    std::uint64_t queue_length = 0; // waiting + in service
    double throughput = 0.0;        // frames/second
    double timestamp = 0.0;         // simulated seconds
};

enum class ArrivalKind { Deterministic, Poisson };

struct NodeSpec {
    std::string id;
    double throughput = 0.0;
};

struct SourceSpec {
    std::string id;
    double frame_rate = 0.0;
    ArrivalKind arrival = ArrivalKind::Deterministic;
};

struct SimConfig {
    std::vector<NodeSpec> nodes;
    std::vector<SourceSpec> sources;
    double broadcast_interval = 0.5;
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

struct NodeMetrics {
    std::string id;
    std::uint64_t frames_completed = 0;
    double utilization = 0.0;
    double mean_latency = 0.0;
};

struct SimMetrics {
    std::vector<NodeMetrics> nodes;
    std::uint64_t arrived = 0;
    std::uint64_t completed = 0;
    std::uint64_t queued_at_end = 0;
    std::uint64_t dropped = 0; // no drop model; always 0
    double imbalance = 0.0;    // max - min node utilization
};

// One dispatch decision, for inspecting status staleness.
struct DispatchRecord {
    double time = 0.0;
    std::string node;
    double status_timestamp = 0.0;
};
using SimTrace = std::vector<DispatchRecord>;

// Least expected completion time (queue_length + 1) / throughput over the
// last-known statuses; ties go to the ascending node id. Requires at least
// one status.
std::string schedule(const std::vector<NodeStatus>& statuses);

SimConfig parse_sim_config(const std::string& text);

// Virtual-clock event loop: per-source frame arrivals, dispatch on the
// last broadcast snapshot, deterministic 1/throughput service, broadcasts
// every broadcast_interval. Same config (incl. seed) gives identical
// metrics.
SimMetrics run_sim(const SimConfig& cfg, SimTrace* trace = nullptr);

// One row per node plus a totals row.
std::string metrics_to_csv(const SimMetrics& m);

} // namespace perckit
