#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lifemax/net_model.hpp"

namespace fixture {

struct Placed {
  double x = 0.0;
  double y = 0.0;
  double energy = 1.0;
  double gen = 1.0;
};

// Sink at the origin plus the given sensors, linked by `links` (pairs of ids).
inline lifemax::Topology build(const std::vector<Placed>& sensors,
                               const std::vector<std::pair<int, int>>& links, double alpha = 0.5,
                               double beta = 0.01, double radius = 100.0) {
  std::vector<lifemax::SensorNode> nodes;
  nodes.push_back({0, {0.0, 0.0}, 1.0, 0.0});
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    nodes.push_back({static_cast<int>(k + 1), {sensors[k].x, sensors[k].y}, sensors[k].energy,
                     sensors[k].gen});
  }
  std::vector<lifemax::Edge> edges;
  for (const auto& [i, j] : links) edges.push_back({i, j, 0.0, 0.0});
  lifemax::Topology::Metadata meta;
  meta.radius = radius;
  meta.comm_range = radius;
  return lifemax::Topology(std::move(nodes), std::move(edges), {alpha, beta}, meta);
}

// One sensor 10 away from the sink: C = 0.5 + 0.01 * 100 = 1.5.
inline lifemax::Topology single_sensor(double energy = 1.0, double gen = 1.0) {
  return build({{10.0, 0.0, energy, gen}}, {{0, 1}});
}

// Same graph with new per-sensor energies and rates.
inline lifemax::Topology with_params(const lifemax::Topology& topo, const std::vector<double>& energy,
                                     const std::vector<double>& gen) {
  std::vector<lifemax::SensorNode> nodes = topo.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    nodes[i].initial_energy = energy[i - 1];
    nodes[i].gen_rate = gen[i - 1];
  }
  std::vector<lifemax::Edge> edges = topo.edges();
  return lifemax::Topology(std::move(nodes), std::move(edges), topo.radio(), topo.metadata());
}

inline lifemax::Topology random_topology(int sensors, std::uint64_t seed, double comm_range = 40.0) {
  lifemax::GenerateParams p;
  p.sensors = sensors;
  p.seed = seed;
  p.comm_range = comm_range;
  return lifemax::generate_topology(p);
}

}  // namespace fixture
