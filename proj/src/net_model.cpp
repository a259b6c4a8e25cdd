#include "lifemax/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include "json.hpp"

#include "lifemax/error.hpp"

namespace lifemax {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::ConnectivityFailure: return "ConnectivityFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::DegenerateNode: return "DegenerateNode";
    case ErrorCode::NumericalDivergence: return "NumericalDivergence";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidParam, what);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// std::uniform_real_distribution is implementation-defined; this is not.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Point sample_disk(std::mt19937_64& rng, double radius) {
  const double rad = radius * std::sqrt(unit_uniform(rng));
  const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
  return {rad * std::cos(theta), rad * std::sin(theta)};
}

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool connected(std::size_t n, const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(kSinkId);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

}  // namespace

double edge_cost(double alpha, double beta, double d) { return alpha + beta * d * d; }

Topology::Topology(std::vector<SensorNode> nodes, std::vector<Edge> edges,
                   RadioParams radio, Metadata meta)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), radio_(radio), meta_(meta) {
  if (nodes_.size() < 2) invalid("topology needs a sink and at least one sensor");
  if (!(radio_.alpha >= 0.0) || !(radio_.beta >= 0.0)) invalid("radio constants must be >= 0");
  if (!(meta_.radius > 0.0) || !(meta_.comm_range > 0.0)) {
    invalid("radius and comm_range must be > 0");
  }
  const std::size_t n = nodes_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SensorNode& node = nodes_[i];
    if (node.id != static_cast<int>(i)) invalid("node ids must be 0..n-1 in order");
    const double rho = std::hypot(node.position.x, node.position.y);
    if (!std::isfinite(rho) || rho > meta_.radius * (1.0 + 1e-12)) {
      invalid("node " + std::to_string(i) + " lies outside the deployment disk");
    }
    if (i == 0) continue;
    if (!(node.initial_energy > 0.0) || !std::isfinite(node.initial_energy)) {
      invalid("sensor " + std::to_string(i) + " needs finite positive energy");
    }
    if (!(node.gen_rate >= 0.0) || !std::isfinite(node.gen_rate)) {
      invalid("sensor " + std::to_string(i) + " needs a finite non-negative rate");
    }
    total += node.gen_rate;
  }
  nodes_[0].initial_energy = kInfinity;
  nodes_[0].gen_rate = -total;

  std::vector<std::vector<int>> adj(n);
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || static_cast<std::size_t>(e.j) >= n || e.i == e.j) {
      invalid("edge endpoints out of range or self loop");
    }
    e.distance = lifemax::distance(nodes_[static_cast<std::size_t>(e.i)].position,
                                   nodes_[static_cast<std::size_t>(e.j)].position);
    e.cost = edge_cost(radio_.alpha, radio_.beta, e.distance);
    adj[static_cast<std::size_t>(e.i)].push_back(e.j);
    adj[static_cast<std::size_t>(e.j)].push_back(e.i);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      invalid("duplicate edge");
    }
  }
  if (!connected(n, adj)) {
    throw Error(ErrorCode::ConnectivityFailure, "topology is not connected");
  }

  std::vector<std::vector<Neighbor>> lists(n);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    lists[static_cast<std::size_t>(e.i)].push_back({e.j, k, 0, e.distance, e.cost});
    lists[static_cast<std::size_t>(e.j)].push_back({e.i, k, 0, e.distance, e.cost});
  }
  offsets_.assign(n + 1, 0);
  pred_end_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(lists[i].begin(), lists[i].end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    offsets_[i + 1] = offsets_[i] + lists[i].size();
    const auto split = std::find_if(lists[i].begin(), lists[i].end(), [i](const Neighbor& nb) {
      return nb.node > static_cast<int>(i);
    });
    pred_end_[i] = offsets_[i] + static_cast<std::size_t>(split - lists[i].begin());
    for (const Neighbor& nb : lists[i]) {
      slots_.push_back(nb);
      owners_.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    slots_[s].mirror = find_slot(slots_[s].node, owners_[s]);
  }
}

std::span<const Neighbor> Topology::neighbors(int i) const {
  return {slots_.data() + slot_begin(i), degree(i)};
}

std::span<const Neighbor> Topology::predecessors(int i) const {
  return {slots_.data() + slot_begin(i), pred_end_[static_cast<std::size_t>(i)] - slot_begin(i)};
}

std::span<const Neighbor> Topology::successors(int i) const {
  const std::size_t b = pred_end_[static_cast<std::size_t>(i)];
  return {slots_.data() + b, slot_end(i) - b};
}

std::size_t Topology::max_degree() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) best = std::max(best, degree(static_cast<int>(i)));
  return best;
}

std::size_t Topology::find_slot(int i, int j) const {
  const auto nbrs = neighbors(i);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                                   [](const Neighbor& nb, int id) { return nb.node < id; });
  if (it == nbrs.end() || it->node != j) return slots_.size();
  return slot_begin(i) + static_cast<std::size_t>(it - nbrs.begin());
}

double Topology::total_generation() const { return -nodes_[0].gen_rate; }

Topology scale_energy(const Topology& topo, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) invalid("energy scale factor must be > 0");
  std::vector<SensorNode> nodes = topo.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) nodes[i].initial_energy *= factor;
  return Topology(std::move(nodes), topo.edges(), topo.radio(), topo.metadata());
}

Topology generate_topology(const GenerateParams& p) {
  if (p.sensors < 1) invalid("sensor count must be >= 1");
  if (!(p.radius > 0.0)) invalid("radius must be > 0");
  if (!(p.comm_range > 0.0)) invalid("comm_range must be > 0");
  if (!(p.initial_energy > 0.0)) invalid("initial energy must be > 0");
  if (!(p.gen_rate >= 0.0)) invalid("generation rate must be >= 0");
  if (!(p.radio.alpha >= 0.0) || !(p.radio.beta >= 0.0)) invalid("radio constants must be >= 0");
  if (p.max_attempts < 1) invalid("max_attempts must be >= 1");

  const std::size_t n = static_cast<std::size_t>(p.sensors) + 1;
  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    std::mt19937_64 rng(splitmix64(p.seed ^ splitmix64(static_cast<std::uint64_t>(attempt))));
    std::vector<SensorNode> nodes(n);
    nodes[0].id = kSinkId;
    nodes[0].position = p.sink_placement == SinkPlacement::Center ? Point{}
                                                                  : sample_disk(rng, p.radius);
    for (std::size_t i = 1; i < n; ++i) {
      nodes[i] = {static_cast<int>(i), sample_disk(rng, p.radius), p.initial_energy, p.gen_rate};
    }
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (distance(nodes[i].position, nodes[j].position) <= p.comm_range) {
          edges.push_back({static_cast<int>(i), static_cast<int>(j), 0.0, 0.0});
          adj[i].push_back(static_cast<int>(j));
          adj[j].push_back(static_cast<int>(i));
        }
      }
    }
    if (!connected(n, adj)) continue;
    return Topology(std::move(nodes), std::move(edges), p.radio,
                    {p.radius, p.comm_range, p.seed, attempt + 1});
  }
  throw Error(ErrorCode::ConnectivityFailure,
              "no connected placement after " + std::to_string(p.max_attempts) + " attempts");
}

double node_lifetime(double initial_energy, std::span<const double> costs,
                     std::span<const double> rates) {
  double load = 0.0;
  for (std::size_t k = 0; k < costs.size() && k < rates.size(); ++k) load += costs[k] * rates[k];
  if (load <= 0.0) return kInfinity;
  return initial_energy / load;
}

double node_lifetime(const Topology& topo, int i, std::span<const double> slot_rates) {
  double load = 0.0;
  for (std::size_t s = topo.slot_begin(i); s < topo.slot_end(i); ++s) {
    load += topo.slot(s).cost * slot_rates[s];
  }
  if (load <= 0.0) return kInfinity;
  return topo.node(i).initial_energy / load;
}

double network_lifetime(const Topology& topo, std::span<const double> slot_rates) {
  double best = kInfinity;
  for (std::size_t i = 1; i < topo.node_count(); ++i) {
    best = std::min(best, node_lifetime(topo, static_cast<int>(i), slot_rates));
  }
  return best;
}

std::string to_json(const Topology& topo, int indent) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["alpha"] = topo.radio().alpha;
  doc["beta"] = topo.radio().beta;
  doc["radius"] = topo.metadata().radius;
  doc["comm_range"] = topo.metadata().comm_range;
  doc["seed"] = topo.metadata().seed;
  doc["attempts"] = topo.metadata().attempts;
  ordered_json nodes = ordered_json::array();
  for (const SensorNode& n : topo.nodes()) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["x"] = n.position.x;
    jn["y"] = n.position.y;
    if (std::isinf(n.initial_energy)) {
      jn["e"] = nullptr;
    } else {
      jn["e"] = n.initial_energy;
    }
    jn["g"] = n.gen_rate;
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const Edge& e : topo.edges()) {
    edges.push_back({{"i", e.i}, {"j", e.j}, {"d", e.distance}, {"c", e.cost}});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(indent) + "\n";
}

namespace {

bool close(double stored, double recomputed) {
  return std::abs(stored - recomputed) <= 1e-9 * std::max(1.0, std::abs(recomputed));
}

}  // namespace

Topology topology_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("topology JSON: ") + e.what());
  }
  try {
    RadioParams radio{doc.at("alpha").get<double>(), doc.at("beta").get<double>()};
    Topology::Metadata meta;
    meta.radius = doc.at("radius").get<double>();
    meta.comm_range = doc.at("comm_range").get<double>();
    meta.seed = doc.at("seed").get<std::uint64_t>();
    meta.attempts = doc.value("attempts", 1);
    std::vector<SensorNode> nodes;
    for (const auto& jn : doc.at("nodes")) {
      SensorNode n;
      n.id = jn.at("id").get<int>();
      n.position = {jn.at("x").get<double>(), jn.at("y").get<double>()};
      n.initial_energy = jn.at("e").is_null() ? kInfinity : jn.at("e").get<double>();
      n.gen_rate = jn.at("g").get<double>();
      nodes.push_back(n);
    }
    if (!nodes.empty() && !std::isinf(nodes[0].initial_energy)) {
      throw Error(ErrorCode::ParseError, "sink energy must be null (unbounded)");
    }
    std::vector<Edge> edges;
    std::vector<std::pair<double, double>> stored;
    for (const auto& je : doc.at("edges")) {
      edges.push_back({je.at("i").get<int>(), je.at("j").get<int>(), 0.0, 0.0});
      stored.emplace_back(je.at("d").get<double>(), je.at("c").get<double>());
    }
    const double sink_g = nodes.empty() ? 0.0 : nodes[0].gen_rate;
    // Revalidate redundant fields against the geometry before trusting them.
    std::vector<Edge> original = edges;
    Topology topo(std::move(nodes), std::move(edges), radio, meta);
    for (std::size_t k = 0; k < original.size(); ++k) {
      const int lo = std::min(original[k].i, original[k].j);
      const int hi = std::max(original[k].i, original[k].j);
      const std::size_t s = topo.find_slot(lo, hi);
      const Neighbor& nb = topo.slot(s);
      if (!close(stored[k].first, nb.distance) || !close(stored[k].second, nb.cost)) {
        throw Error(ErrorCode::ParseError, "edge (" + std::to_string(lo) + "," +
                                               std::to_string(hi) +
                                               ") distance/cost disagree with positions");
      }
    }
    if (!close(sink_g, topo.node(0).gen_rate)) {
      throw Error(ErrorCode::ParseError, "sink rate must equal -sum(g_i)");
    }
    return topo;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("topology JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, std::string("invalid topology: ") + e.what());
  }
}

}  // namespace lifemax
