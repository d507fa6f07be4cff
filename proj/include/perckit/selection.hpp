#pragma once

#include "perckit/topology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace perckit {

// One placement: a sensor bound to its processing device, optionally
// through a relay device that acquires the stream and shares it over
// device-to-device Ethernet.
struct Configuration {
    std::string sensor;
    std::string processor;
    std::optional<std::string> relay;

    bool operator==(const Configuration&) const = default;
    auto operator<=>(const Configuration&) const = default;
};

struct UnassignedSensor {
    std::string id;
    std::string reason;

    bool operator==(const UnassignedSensor&) const = default;
};

struct SelectionResult {
    std::vector<Configuration> configurations;     // in assignment order
    std::vector<UnassignedSensor> unassigned_sensors;
    std::vector<std::string> idle_devices;         // descending power order

    bool operator==(const SelectionResult&) const = default;
};

// Descending width*height; ties by higher frame_rate, then ascending id.
std::vector<Sensor> sort_sensors(std::vector<Sensor> sensors);

// Descending power; ties by ascending id.
std::vector<Device> sort_devices(std::vector<Device> devices);

// Highest-power candidate directly connected to s via usb or enet_sd.
// Power ties resolved by ascending id. Callers supply the candidate set
// (already excluding the prospective processor, plus any further filter).
std::optional<Device> find_connected(const Sensor& s,
                                     const std::vector<Device>& candidates,
                                     const LinkSet& links);

// Greedy best-fit assignment: sensors in sort_sensors order each take the
// head of the remaining sort_devices list, directly when linked, otherwise
// through the strongest relay that can reach that device over Ethernet.
SelectionResult select(const Topology& t);

// Checks a configuration against the link sets: direct configurations need
// a usb/enet_sd link, relayed ones need a sensor-relay link, distinct
// devices, and relay-processor Ethernet reachability.
bool configuration_feasible(const Topology& t, const Configuration& c);

std::string serialize_selection(const SelectionResult& r);

} // namespace perckit
