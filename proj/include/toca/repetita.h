#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "toca/topology.h"
#include "toca/traffic.h"

namespace toca {

// Repetita graph file: NODES/EDGES sections, one line per directed edge.
// Every directed edge needs a reverse twin with the same bandwidth; each pair
// becomes one BidirectedEdge with `connections` connections.
Topology parse_topology(std::string_view text, int connections = 5,
                        std::string name = "");

// Repetita demands file. Repeated (src,dest) pairs accumulate.
TrafficMatrix parse_demands(std::string_view text, int node_count);

std::string read_file(const std::filesystem::path& path);

Topology load_topology(const std::filesystem::path& path, int connections = 5);
TrafficMatrix load_demands(const std::filesystem::path& path, int node_count);

// Activation text: "<u> <v> <x_e>" per edge, sorted by (u,v).
std::string format_activation(const Topology& topo, const ActivationSolution& act);
ActivationSolution parse_activation(std::string_view text, const Topology& topo);

// Serialises back to the Repetita grammar (both directions per edge).
std::string format_topology(const Topology& topo);
std::string format_demands(const TrafficMatrix& t);

}  // namespace toca
