#include "perckit/selection.hpp"

#include <json.hpp>

#include <algorithm>

namespace perckit {

std::vector<Sensor> sort_sensors(std::vector<Sensor> sensors) {
    std::stable_sort(sensors.begin(), sensors.end(),
                     [](const Sensor& a, const Sensor& b) {
                         if (a.pixels() != b.pixels()) return a.pixels() > b.pixels();
                         if (a.frame_rate != b.frame_rate) return a.frame_rate > b.frame_rate;
                         return a.id < b.id;
                     });
    return sensors;
}

std::vector<Device> sort_devices(std::vector<Device> devices) {
    std::stable_sort(devices.begin(), devices.end(),
                     [](const Device& a, const Device& b) {
                         if (a.power != b.power) return a.power > b.power;
                         return a.id < b.id;
                     });
    return devices;
}

std::optional<Device> find_connected(const Sensor& s,
                                     const std::vector<Device>& candidates,
                                     const LinkSet& links) {
    std::vector<Device> ranked = sort_devices(candidates);
    for (const auto& d : ranked)
        if (links.direct_linked(s.id, d.id)) return d;
    return std::nullopt;
}

namespace {

// One recursion level of the selection algorithm: place the head sensor,
// remove whatever was consumed, recurse on the remainder.
void assign_step(const Topology& t,
                 std::vector<Sensor>& sensors,
                 std::vector<Device>& devices,
                 SelectionResult& result) {
    if (sensors.empty()) return;
    if (devices.empty()) {
        for (const auto& s : sensors)
            result.unassigned_sensors.push_back({s.id, "no devices left"});
        sensors.clear();
        return;
    }

    const Sensor sensor = sensors.front();
    sensors.erase(sensors.begin());
    const Device head = devices.front();

    if (t.links.direct_linked(sensor.id, head.id)) {
        result.configurations.push_back({sensor.id, head.id, std::nullopt});
        devices.erase(devices.begin());
    } else {
        // Relay candidates: remaining devices that can actually share the
        // stream with the processor over device Ethernet.
        std::vector<Device> candidates;
        for (std::size_t i = 1; i < devices.size(); ++i)
            if (t.enet_reachable(devices[i].id, head.id))
                candidates.push_back(devices[i]);
        std::optional<Device> relay = find_connected(sensor, candidates, t.links);
        if (relay) {
            result.configurations.push_back({sensor.id, head.id, relay->id});
            devices.erase(std::remove_if(devices.begin(), devices.end(),
                                         [&](const Device& d) {
                                             return d.id == head.id || d.id == relay->id;
                                         }),
                          devices.end());
        } else {
            result.unassigned_sensors.push_back({sensor.id, "no connectivity"});
        }
    }

    assign_step(t, sensors, devices, result);
}

} // namespace

SelectionResult select(const Topology& t) {
    SelectionResult result;
    std::vector<Sensor> sensors = sort_sensors(t.sensors);
    std::vector<Device> devices = sort_devices(t.devices);
    assign_step(t, sensors, devices, result);
    for (const auto& d : devices) result.idle_devices.push_back(d.id);
    return result;
}

bool configuration_feasible(const Topology& t, const Configuration& c) {
    if (!t.find_sensor(c.sensor) || !t.find_device(c.processor)) return false;
    if (!c.relay)
        return t.links.direct_linked(c.sensor, c.processor);
    if (!t.find_device(*c.relay)) return false;
    if (*c.relay == c.processor) return false;
    return t.links.direct_linked(c.sensor, *c.relay) &&
           t.enet_reachable(*c.relay, c.processor);
}

std::string serialize_selection(const SelectionResult& r) {
    nlohmann::ordered_json doc;
    doc["configurations"] = nlohmann::ordered_json::array();
    for (const auto& c : r.configurations) {
        nlohmann::ordered_json obj;
        obj["sensor"] = c.sensor;
        obj["processor"] = c.processor;
        if (c.relay) obj["relay"] = *c.relay;
        doc["configurations"].push_back(obj);
    }
    doc["unassigned_sensors"] = nlohmann::ordered_json::array();
    for (const auto& u : r.unassigned_sensors) {
        nlohmann::ordered_json obj;
        obj["id"] = u.id;
        obj["reason"] = u.reason;
        doc["unassigned_sensors"].push_back(obj);
    }
    doc["idle_devices"] = r.idle_devices;
    return doc.dump(2) + "\n";
}

} // namespace perckit
