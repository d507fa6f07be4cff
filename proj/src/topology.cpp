#include "perckit/topology.hpp"

#include "perckit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace perckit {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(DeviceClass c) {
    switch (c) {
        case DeviceClass::CPU: return "CPU";
        case DeviceClass::ONBOARD_GPU: return "ONBOARD_GPU";
        case DeviceClass::VPU: return "VPU";
    }
    return "CPU";
}

std::optional<DeviceClass> device_class_from_string(const std::string& s) {
    if (s == "CPU") return DeviceClass::CPU;
    if (s == "ONBOARD_GPU") return DeviceClass::ONBOARD_GPU;
    if (s == "VPU") return DeviceClass::VPU;
    return std::nullopt;
}

void LinkSet::add_enet_dd(const std::string& a, const std::string& b) {
    if (a < b)
        enet_dd.emplace(a, b);
    else
        enet_dd.emplace(b, a);
}

bool LinkSet::usb_linked(const std::string& sensor, const std::string& device) const {
    return usb.count({sensor, device}) > 0;
}

bool LinkSet::enet_sd_linked(const std::string& sensor, const std::string& device) const {
    return enet_sd.count({sensor, device}) > 0;
}

bool LinkSet::direct_linked(const std::string& sensor, const std::string& device) const {
    return usb_linked(sensor, device) || enet_sd_linked(sensor, device);
}

const Sensor* Topology::find_sensor(const std::string& id) const {
    for (const auto& s : sensors)
        if (s.id == id) return &s;
    return nullptr;
}

const Device* Topology::find_device(const std::string& id) const {
    for (const auto& d : devices)
        if (d.id == id) return &d;
    return nullptr;
}

namespace {

// Union-find over device ids.
class Components {
public:
    void add(const std::string& id) { parent_.emplace(id, id); }

    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra != rb) parent_[ra] = rb;
    }

    std::string find(const std::string& id) {
        std::string root = id;
        while (parent_.at(root) != root) root = parent_.at(root);
        // path compression
        std::string cur = id;
        while (parent_.at(cur) != root) {
            std::string next = parent_.at(cur);
            parent_[cur] = root;
            cur = next;
        }
        return root;
    }

private:
    std::unordered_map<std::string, std::string> parent_;
};

Components device_components(const Topology& t) {
    Components comp;
    for (const auto& d : t.devices) comp.add(d.id);
    for (const auto& [a, b] : t.links.enet_dd) comp.unite(a, b);
    return comp;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw FormatError(path + ": unknown key \"" + it.key() + "\"");
    }
}

const json& require_key(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw FormatError(path + ": missing required key \"" + key + "\"");
    return *it;
}

std::string require_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw FormatError(path + ": expected a string");
    return v.get<std::string>();
}

int require_positive_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw FormatError(path + ": expected an integer >= 1");
    return static_cast<int>(v.get<long long>());
}

double require_positive_number(const json& v, const std::string& path) {
    if (!v.is_number() || !(v.get<double>() > 0.0))
        throw FormatError(path + ": expected a number > 0");
    return v.get<double>();
}

} // namespace

Topology parse_topology(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("topology: malformed document: ") + e.what());
    }
    if (!doc.is_object())
        throw FormatError("topology: top level must be an object");
    reject_unknown_keys(doc, {"sensors", "devices", "links"}, "topology");

    Topology t;
    std::unordered_set<std::string> sensor_ids, device_ids;

    const json& sensors = require_key(doc, "sensors", "topology");
    if (!sensors.is_array()) throw FormatError("sensors: expected an array");
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        std::string path = "sensors[" + std::to_string(i) + "]";
        const json& s = sensors[i];
        if (!s.is_object()) throw FormatError(path + ": expected an object");
        reject_unknown_keys(s, {"id", "width", "height", "fps"}, path);
        Sensor sensor;
        sensor.id = require_string(require_key(s, "id", path), path + ".id");
        sensor.width = require_positive_int(require_key(s, "width", path), path + ".width");
        sensor.height = require_positive_int(require_key(s, "height", path), path + ".height");
        if (s.contains("fps"))
            sensor.frame_rate = require_positive_number(s["fps"], path + ".fps");
        if (!sensor_ids.insert(sensor.id).second)
            throw FormatError(path + ".id: duplicate sensor id \"" + sensor.id + "\"");
        t.sensors.push_back(std::move(sensor));
    }

    const json& devices = require_key(doc, "devices", "topology");
    if (!devices.is_array()) throw FormatError("devices: expected an array");
    for (std::size_t i = 0; i < devices.size(); ++i) {
        std::string path = "devices[" + std::to_string(i) + "]";
        const json& d = devices[i];
        if (!d.is_object()) throw FormatError(path + ": expected an object");
        reject_unknown_keys(d, {"id", "class", "power"}, path);
        Device device;
        device.id = require_string(require_key(d, "id", path), path + ".id");
        std::string cls = require_string(require_key(d, "class", path), path + ".class");
        auto parsed = device_class_from_string(cls);
        if (!parsed)
            throw FormatError(path + ".class: unknown device class \"" + cls +
                              "\" (expected CPU, ONBOARD_GPU, or VPU)");
        device.cls = *parsed;
        device.power = require_positive_number(require_key(d, "power", path), path + ".power");
        if (!device_ids.insert(device.id).second)
            throw FormatError(path + ".id: duplicate device id \"" + device.id + "\"");
        t.devices.push_back(std::move(device));
    }

    if (doc.contains("links")) {
        const json& links = doc["links"];
        if (!links.is_object()) throw FormatError("links: expected an object");
        reject_unknown_keys(links, {"usb", "enet_sd", "enet_dd"}, "links");

        auto parse_pairs = [&](const char* key, bool sensor_device) {
            if (!links.contains(key)) return;
            const json& arr = links[key];
            std::string base = std::string("links.") + key;
            if (!arr.is_array()) throw FormatError(base + ": expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                std::string path = base + "[" + std::to_string(i) + "]";
                const json& pair = arr[i];
                if (!pair.is_array() || pair.size() != 2)
                    throw FormatError(path + ": expected a [from, to] pair");
                std::string a = require_string(pair[0], path + "[0]");
                std::string b = require_string(pair[1], path + "[1]");
                if (sensor_device) {
                    if (!sensor_ids.count(a))
                        throw FormatError(path + "[0]: unknown sensor \"" + a + "\"");
                    if (!device_ids.count(b))
                        throw FormatError(path + "[1]: unknown device \"" + b + "\"");
                    if (std::string(key) == "usb")
                        t.links.usb.emplace(a, b);
                    else
                        t.links.enet_sd.emplace(a, b);
                } else {
                    if (!device_ids.count(a))
                        throw FormatError(path + "[0]: unknown device \"" + a + "\"");
                    if (!device_ids.count(b))
                        throw FormatError(path + "[1]: unknown device \"" + b + "\"");
                    if (a == b)
                        throw FormatError(path + ": self-pair \"" + a + "\" not allowed");
                    t.links.add_enet_dd(a, b);
                }
            }
        };
        parse_pairs("usb", true);
        parse_pairs("enet_sd", true);
        parse_pairs("enet_dd", false);
    }

    return t;
}

std::string serialize_topology(const Topology& t) {
    ordered_json doc;
    doc["sensors"] = ordered_json::array();
    for (const auto& s : t.sensors) {
        ordered_json obj;
        obj["id"] = s.id;
        obj["width"] = s.width;
        obj["height"] = s.height;
        obj["fps"] = s.frame_rate;
        doc["sensors"].push_back(obj);
    }
    doc["devices"] = ordered_json::array();
    for (const auto& d : t.devices) {
        ordered_json obj;
        obj["id"] = d.id;
        obj["class"] = to_string(d.cls);
        obj["power"] = d.power;
        doc["devices"].push_back(obj);
    }
    ordered_json links;
    links["usb"] = ordered_json::array();
    for (const auto& [s, d] : t.links.usb) links["usb"].push_back({s, d});
    links["enet_sd"] = ordered_json::array();
    for (const auto& [s, d] : t.links.enet_sd) links["enet_sd"].push_back({s, d});
    links["enet_dd"] = ordered_json::array();
    for (const auto& [a, b] : t.links.enet_dd) links["enet_dd"].push_back({a, b});
    doc["links"] = links;
    return doc.dump(2) + "\n";
}

bool Topology::enet_reachable(const std::string& a, const std::string& b) const {
    if (a == b) return true;
    Components comp = device_components(*this);
    return comp.find(a) == comp.find(b);
}

std::vector<Violation> validate(const Topology& t) {
    std::vector<Violation> violations;

    for (const auto& s : t.sensors) {
        bool linked = false;
        for (const auto& [sid, did] : t.links.usb)
            if (sid == s.id) { linked = true; break; }
        if (!linked)
            for (const auto& [sid, did] : t.links.enet_sd)
                if (sid == s.id) { linked = true; break; }
        if (!linked)
            violations.push_back({2, s.id, "sensor \"" + s.id +
                                  "\" has no usb or ethernet link to any device"});
    }

    if (t.devices.size() > 1) {
        Components comp = device_components(t);
        std::map<std::string, std::vector<std::string>> groups; // root -> members
        for (const auto& d : t.devices) groups[comp.find(d.id)].push_back(d.id);
        if (groups.size() > 1) {
            // Components ordered by their smallest member; the first one is
            // treated as the main partition.
            std::vector<std::vector<std::string>> parts;
            for (auto& [root, members] : groups) {
                std::sort(members.begin(), members.end());
                parts.push_back(members);
            }
            std::sort(parts.begin(), parts.end());
            std::ostringstream detail;
            detail << "ethernet partition isolates device groups: ";
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) detail << " | ";
                detail << "{";
                for (std::size_t j = 0; j < parts[i].size(); ++j) {
                    if (j) detail << ",";
                    detail << parts[i][j];
                }
                detail << "}";
            }
            violations.push_back({3, parts[1].front(), detail.str()});
        }
    }

    std::sort(violations.begin(), violations.end(),
              [](const Violation& a, const Violation& b) {
                  return std::tie(a.constraint, a.subject) < std::tie(b.constraint, b.subject);
              });
    return violations;
}

} // namespace perckit
