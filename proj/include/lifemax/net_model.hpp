#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace lifemax {

/// Stands in for "unbounded": sink energy and the lifetime of an idle node.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline constexpr int kSinkId = 0;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct SensorNode {
  int id = 0;
  Point position;
  double initial_energy = 1.0;  // joules; kInfinity for the sink
  double gen_rate = 1.0;        // bits/s; the sink carries -sum(g_i)
};

/// Undirected link, stored once with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  double distance = 0.0;
  double cost = 0.0;  // joules/bit, symmetric
};

struct RadioParams {
  double alpha = 0.5;   // electronics energy, joules/bit
  double beta = 0.001;   // amplifier energy, joules/bit/length^2
};

enum class SinkPlacement { Center, Random };

/// A neighbor as seen from one node: one directed "slot" of the graph.
struct Neighbor {
  int node = 0;
  std::size_t edge = 0;    // index into Topology::edges()
  std::size_t mirror = 0;  // slot index of the reverse direction
  double distance = 0.0;
  double cost = 0.0;
};

/// Transmission cost per bit for a link of length `distance`.
double edge_cost(double alpha, double beta, double distance);

/// Immutable sensor network graph.
///
/// Directed links are addressed by slot: node i owns slots
/// [slot_begin(i), slot_end(i)), one per neighbor in ascending neighbor id.
/// Neighbors with smaller id (predecessors) therefore form a prefix of each
/// node's slot range. Per-slot vectors (rates, flow differences) are indexed
/// by these slot numbers throughout the library.
class Topology {
 public:
  struct Metadata {
    double radius = 100.0;
    double comm_range = 40.0;
    std::uint64_t seed = 0;
    int attempts = 1;  // placements drawn before a connected one was found
  };

  /// Builds the graph from explicit nodes and undirected edges. Recomputes
  /// distances and costs from positions and validates every invariant
  /// (ids, energies, rates, sink balance, disk containment, connectivity).
  Topology(std::vector<SensorNode> nodes, std::vector<Edge> edges,
           RadioParams radio, Metadata meta);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t sensor_count() const { return nodes_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t slot_count() const { return slots_.size(); }

  const std::vector<SensorNode>& nodes() const { return nodes_; }
  const SensorNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const RadioParams& radio() const { return radio_; }
  const Metadata& metadata() const { return meta_; }

  std::size_t slot_begin(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  std::size_t slot_end(int i) const { return offsets_[static_cast<std::size_t>(i) + 1]; }
  const Neighbor& slot(std::size_t s) const { return slots_[s]; }
  /// Owner node of a slot.
  int slot_owner(std::size_t s) const { return owners_[s]; }

  std::span<const Neighbor> neighbors(int i) const;
  std::span<const Neighbor> predecessors(int i) const;
  std::span<const Neighbor> successors(int i) const;
  std::size_t degree(int i) const { return slot_end(i) - slot_begin(i); }
  std::size_t max_degree() const;

  /// Slot of the directed link i -> j, or slot_count() if not adjacent.
  std::size_t find_slot(int i, int j) const;

  double total_generation() const;  // sum of g_i over sensors

 private:
  std::vector<SensorNode> nodes_;
  std::vector<Edge> edges_;
  RadioParams radio_;
  Metadata meta_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> pred_end_;
  std::vector<Neighbor> slots_;
  std::vector<int> owners_;
};

struct GenerateParams {
  int sensors = 15;
  double radius = 100.0;
  double comm_range = 40.0;
  SinkPlacement sink_placement = SinkPlacement::Center;
  std::uint64_t seed = 0;
  RadioParams radio;
  double initial_energy = 1.0;
  double gen_rate = 1.0;
  int max_attempts = 200000;
};

/// Uniform placement in a disk centred at the origin, unit-disk links,
/// resampled with derived sub-seeds until the graph is connected.
Topology generate_topology(const GenerateParams& params);

/// Same graph with every sensor energy multiplied by `factor` (> 0).
Topology scale_energy(const Topology& topo, double factor);

/// Lifetime of one node given per-neighbor costs and outgoing rates.
double node_lifetime(double initial_energy, std::span<const double> costs,
                     std::span<const double> rates);
double node_lifetime(const Topology& topo, int i, std::span<const double> slot_rates);

/// Minimum sensor lifetime; the sink is excluded.
double network_lifetime(const Topology& topo, std::span<const double> slot_rates);

std::string to_json(const Topology& topo, int indent = 2);
/// Parses and revalidates a serialized topology (ParseError on mismatch).
Topology topology_from_json(const std::string& text);

}  // namespace lifemax
