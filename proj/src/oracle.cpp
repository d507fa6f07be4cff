#include "perckit/oracle.hpp"

#include "perckit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>

namespace perckit {

bool score_better(const Score& a, const Score& b) {
    if (a.assigned_count != b.assigned_count) return a.assigned_count > b.assigned_count;
    if (a.inversions != b.inversions) return a.inversions < b.inversions;
    return a.relays_used < b.relays_used;
}

namespace {

// nullopt ranks strictly below every value; two nullopts are equal.
template <typename T>
bool rank_below(const std::optional<T>& a, const std::optional<T>& b) {
    if (!b) return false;
    if (!a) return true;
    return *a < *b;
}

} // namespace

Score score_assignment(const Topology& t, const Assignment& a) {
    Score score;
    score.assigned_count = static_cast<int>(a.configurations.size());
    for (const auto& c : a.configurations)
        if (c.relay) ++score.relays_used;

    // Rank value each sensor ends up with, and each device ends up serving.
    std::map<std::string, std::optional<double>> sensor_power;   // processor power
    std::map<std::string, std::optional<long long>> device_size; // processed pixels
    for (const auto& s : t.sensors) sensor_power[s.id] = std::nullopt;
    for (const auto& d : t.devices) device_size[d.id] = std::nullopt;
    for (const auto& c : a.configurations) {
        const Device* proc = t.find_device(c.processor);
        const Sensor* sensor = t.find_sensor(c.sensor);
        if (proc) sensor_power[c.sensor] = proc->power;
        if (sensor) device_size[c.processor] = sensor->pixels();
    }

    for (std::size_t i = 0; i < t.sensors.size(); ++i)
        for (std::size_t j = 0; j < t.sensors.size(); ++j) {
            const Sensor& big = t.sensors[i];
            const Sensor& small = t.sensors[j];
            if (big.pixels() > small.pixels() &&
                rank_below(sensor_power[big.id], sensor_power[small.id]))
                ++score.inversions;
        }
    for (std::size_t i = 0; i < t.devices.size(); ++i)
        for (std::size_t j = 0; j < t.devices.size(); ++j) {
            const Device& strong = t.devices[i];
            const Device& weak = t.devices[j];
            if (strong.power > weak.power &&
                rank_below(device_size[strong.id], device_size[weak.id]))
                ++score.inversions;
        }
    return score;
}

Score score_selection(const Topology& t, const SelectionResult& r) {
    Assignment a;
    a.configurations = r.configurations;
    std::sort(a.configurations.begin(), a.configurations.end());
    return score_assignment(t, a);
}

namespace {

struct EnumContext {
    std::vector<Sensor> sensors;  // sort_sensors order
    std::vector<Device> devices;  // sort_devices order
    std::vector<std::vector<bool>> direct; // [sensor][device]
    std::vector<std::vector<bool>> reach;  // [device][device] over enet_dd
    std::vector<bool> device_used;
    std::vector<bool> sensor_skipped;
    std::vector<Configuration> current;
    std::vector<Assignment> out;
};

bool any_feasible_addition(const EnumContext& ctx) {
    for (std::size_t si = 0; si < ctx.sensors.size(); ++si) {
        if (!ctx.sensor_skipped[si]) continue;
        for (std::size_t di = 0; di < ctx.devices.size(); ++di) {
            if (ctx.device_used[di]) continue;
            if (ctx.direct[si][di]) return true;
        }
        for (std::size_t pi = 0; pi < ctx.devices.size(); ++pi) {
            if (ctx.device_used[pi]) continue;
            for (std::size_t ri = 0; ri < ctx.devices.size(); ++ri) {
                if (ri == pi || ctx.device_used[ri]) continue;
                if (ctx.direct[si][ri] && ctx.reach[ri][pi]) return true;
            }
        }
    }
    return false;
}

void dfs(EnumContext& ctx, std::size_t si) {
    if (si == ctx.sensors.size()) {
        if (!any_feasible_addition(ctx)) {
            Assignment a;
            a.configurations = ctx.current;
            std::sort(a.configurations.begin(), a.configurations.end());
            ctx.out.push_back(std::move(a));
        }
        return;
    }
    const std::string& sid = ctx.sensors[si].id;

    for (std::size_t di = 0; di < ctx.devices.size(); ++di) {
        if (ctx.device_used[di] || !ctx.direct[si][di]) continue;
        ctx.device_used[di] = true;
        ctx.current.push_back({sid, ctx.devices[di].id, std::nullopt});
        dfs(ctx, si + 1);
        ctx.current.pop_back();
        ctx.device_used[di] = false;
    }
    for (std::size_t pi = 0; pi < ctx.devices.size(); ++pi) {
        if (ctx.device_used[pi]) continue;
        for (std::size_t ri = 0; ri < ctx.devices.size(); ++ri) {
            if (ri == pi || ctx.device_used[ri]) continue;
            if (!ctx.direct[si][ri] || !ctx.reach[ri][pi]) continue;
            ctx.device_used[pi] = ctx.device_used[ri] = true;
            ctx.current.push_back({sid, ctx.devices[pi].id, ctx.devices[ri].id});
            dfs(ctx, si + 1);
            ctx.current.pop_back();
            ctx.device_used[pi] = ctx.device_used[ri] = false;
        }
    }
    ctx.sensor_skipped[si] = true;
    dfs(ctx, si + 1);
    ctx.sensor_skipped[si] = false;
}

} // namespace

std::vector<Assignment> enumerate_assignments(const Topology& t) {
    if (t.sensors.size() > 6 || t.devices.size() > 6)
        throw DomainError("oracle: instance too large (at most 6 sensors and 6 devices)");

    EnumContext ctx;
    ctx.sensors = sort_sensors(t.sensors);
    ctx.devices = sort_devices(t.devices);
    ctx.direct.assign(ctx.sensors.size(), std::vector<bool>(ctx.devices.size(), false));
    ctx.reach.assign(ctx.devices.size(), std::vector<bool>(ctx.devices.size(), false));
    for (std::size_t si = 0; si < ctx.sensors.size(); ++si)
        for (std::size_t di = 0; di < ctx.devices.size(); ++di)
            ctx.direct[si][di] = t.links.direct_linked(ctx.sensors[si].id, ctx.devices[di].id);
    for (std::size_t i = 0; i < ctx.devices.size(); ++i)
        for (std::size_t j = 0; j < ctx.devices.size(); ++j)
            ctx.reach[i][j] = t.enet_reachable(ctx.devices[i].id, ctx.devices[j].id);
    ctx.device_used.assign(ctx.devices.size(), false);
    ctx.sensor_skipped.assign(ctx.sensors.size(), false);

    dfs(ctx, 0);
    return std::move(ctx.out);
}

std::pair<Assignment, Score> best_assignment(const Topology& t) {
    std::vector<Assignment> all = enumerate_assignments(t);
    const Assignment* best = nullptr;
    Score best_score;
    for (const auto& a : all) {
        Score s = score_assignment(t, a);
        if (!best || score_better(s, best_score) ||
            (s == best_score && a.configurations < best->configurations)) {
            best = &a;
            best_score = s;
        }
    }
    if (!best) return {Assignment{}, Score{}}; // unreachable: empty assignment always enumerated
    return {*best, best_score};
}

std::string serialize_assignment(const Assignment& a, const Score& s) {
    nlohmann::ordered_json doc;
    doc["configurations"] = nlohmann::ordered_json::array();
    for (const auto& c : a.configurations) {
        nlohmann::ordered_json obj;
        obj["sensor"] = c.sensor;
        obj["processor"] = c.processor;
        if (c.relay) obj["relay"] = *c.relay;
        doc["configurations"].push_back(obj);
    }
    doc["score"]["assigned_count"] = s.assigned_count;
    doc["score"]["inversions"] = s.inversions;
    doc["score"]["relays_used"] = s.relays_used;
    return doc.dump(2) + "\n";
}

} // namespace perckit
