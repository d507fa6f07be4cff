#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace perckit {

struct Sensor {
    std::string id;
    int width = 0;        // pixels
    int height = 0;       // pixels
    double frame_rate = 30.0;

    long long pixels() const { return static_cast<long long>(width) * height; }

    bool operator==(const Sensor&) const = default;
};

enum class DeviceClass { CPU, ONBOARD_GPU, VPU };

std::string to_string(DeviceClass c);
std::optional<DeviceClass> device_class_from_string(const std::string& s);

struct Device {
    std::string id;
    DeviceClass cls = DeviceClass::CPU;
    double power = 0.0;   // relative computational-power rank

    bool operator==(const Device&) const = default;
};

using SensorDeviceLink = std::pair<std::string, std::string>; // (sensor, device)
using DevicePair = std::pair<std::string, std::string>;       // stored normalized, first < second

struct LinkSet {
    std::set<SensorDeviceLink> usb;
    std::set<SensorDeviceLink> enet_sd;
    std::set<DevicePair> enet_dd;

    // Normalizes the unordered device pair; self-pairs are the caller's
    // responsibility to reject.
    void add_enet_dd(const std::string& a, const std::string& b);

    bool usb_linked(const std::string& sensor, const std::string& device) const;
    bool enet_sd_linked(const std::string& sensor, const std::string& device) const;
    bool direct_linked(const std::string& sensor, const std::string& device) const;

    bool operator==(const LinkSet&) const = default;
};

struct Topology {
    std::vector<Sensor> sensors;
    std::vector<Device> devices;
    LinkSet links;

    const Sensor* find_sensor(const std::string& id) const;
    const Device* find_device(const std::string& id) const;

    // True when a and b sit in the same connected component of the
    // device-to-device Ethernet graph (a == b counts as reachable).
    bool enet_reachable(const std::string& a, const std::string& b) const;

    bool operator==(const Topology&) const = default;
};

struct Violation {
    int constraint = 0;       // 2: sensor with no link, 3: ethernet partition
    std::string subject;      // offending sensor/device id
    std::string detail;

    bool operator==(const Violation&) const = default;
};

// Parses the documented topology JSON document. Throws FormatError with a
// path to the offending element on malformed input, duplicate ids, links
// referencing unknown ids, or unknown keys.
Topology parse_topology(const std::string& text);

// Inverse of parse_topology: parse_topology(serialize_topology(t)) == t.
std::string serialize_topology(const Topology& t);

// Reports constraint breaches without failing: one violation per sensor
// lacking any usb/enet_sd link (constraint 2), and one violation listing
// the partition when the devices do not form a single Ethernet component
// (constraint 3, checked only when |D| > 1). Sorted by (constraint, subject).
std::vector<Violation> validate(const Topology& t);

} // namespace perckit
