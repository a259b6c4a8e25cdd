#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "lifemax/error.hpp"
#include "lifemax/net_model.hpp"
#include "support/fixtures.hpp"

using namespace lifemax;

namespace {

GenerateParams params(int n, std::uint64_t seed, double comm = 40.0) {
  GenerateParams p;
  p.sensors = n;
  p.seed = seed;
  p.comm_range = comm;
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no lifemax::Error thrown");
  return ErrorCode::InvalidParam;
}

}  // namespace

TEST_SUITE("net_model") {

TEST_CASE("edge cost follows alpha + beta d^2") {
  CHECK(edge_cost(0.5, 0.01, 10.0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(edge_cost(0.5, 0.01, 0.0) == 0.5);
  CHECK(edge_cost(0.0, 0.0, 75.0) == 0.0);
}

TEST_CASE("node lifetime examples") {
  const std::vector<double> c1{2.0}, r1{0.25};
  CHECK(node_lifetime(1.0, c1, r1) == 2.0);
  const std::vector<double> c2{1.0, 2.0}, r2{1.0, 1.0};
  CHECK(node_lifetime(3.0, c2, r2) == 1.0);
  const std::vector<double> idle{0.0, 0.0};
  CHECK(std::isinf(node_lifetime(3.0, c2, idle)));
}

TEST_CASE("network lifetime is the weakest sensor") {
  // Three sensors each one hop from the sink, costs 1.5; energies give tau = 2, 5, 3.
  const Topology t = fixture::build(
      {{10, 0, 3.0, 1.0}, {0, 10, 7.5, 1.0}, {-10, 0, 4.5, 1.0}}, {{0, 1}, {0, 2}, {0, 3}});
  std::vector<double> rates(t.slot_count(), 0.0);
  for (int i = 1; i <= 3; ++i) rates[t.find_slot(i, 0)] = 1.0;
  CHECK(node_lifetime(t, 1, rates) == doctest::Approx(2.0));
  CHECK(node_lifetime(t, 2, rates) == doctest::Approx(5.0));
  CHECK(node_lifetime(t, 3, rates) == doctest::Approx(3.0));
  CHECK(network_lifetime(t, rates) == doctest::Approx(2.0));
  CHECK(std::isinf(network_lifetime(t, std::vector<double>(t.slot_count(), 0.0))));

  const Topology one = fixture::single_sensor();
  std::vector<double> r(one.slot_count(), 0.0);
  r[one.find_slot(1, 0)] = 1.0;
  CHECK(network_lifetime(one, r) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("single sensor within range always links to the sink") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Topology t = generate_topology(params(1, seed, 200.0));
    CHECK(t.node_count() == 2);
    CHECK(t.edge_count() == 1);
    CHECK(t.metadata().attempts == 1);
  }
}

TEST_CASE("generated graphs are exactly the unit-disk graph") {
  const Topology t = generate_topology(params(15, 42));
  REQUIRE(t.node_count() == 16);
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    const Point p = t.node(static_cast<int>(i)).position;
    CHECK(std::hypot(p.x, p.y) <= 100.0);
    for (std::size_t j = i + 1; j < t.node_count(); ++j) {
      const Point q = t.node(static_cast<int>(j)).position;
      const bool linked = t.find_slot(static_cast<int>(i), static_cast<int>(j)) < t.slot_count();
      CHECK(linked == (std::hypot(p.x - q.x, p.y - q.y) <= 40.0));
    }
  }
  for (const Edge& e : t.edges()) CHECK(e.distance <= 40.0);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK(code_of([] { generate_topology(params(0, 1)); }) == ErrorCode::InvalidParam);
  CHECK(code_of([] { generate_topology(params(5, 1, -1.0)); }) == ErrorCode::InvalidParam);
  GenerateParams tight = params(10, 3, 1.0);
  tight.max_attempts = 5;
  CHECK(code_of([&] { generate_topology(tight); }) == ErrorCode::ConnectivityFailure);
  CHECK(code_of([] { fixture::build({{10, 0, 1, 1}, {20, 0, 1, 1}}, {{0, 1}}); }) ==
        ErrorCode::ConnectivityFailure);
  CHECK(code_of([] { fixture::build({{10, 0, 0.0, 1}}, {{0, 1}}); }) == ErrorCode::InvalidParam);
  CHECK(code_of([] { fixture::build({{10, 0, 1, -1}}, {{0, 1}}); }) == ErrorCode::InvalidParam);
  CHECK(code_of([] { fixture::build({{10, 0, 1, 1}}, {{0, 1}, {1, 0}}); }) ==
        ErrorCode::InvalidParam);
  CHECK(code_of([] { fixture::build({{200, 0, 1, 1}}, {{0, 1}}); }) == ErrorCode::InvalidParam);
}

TEST_CASE("generation is deterministic per seed") {
  for (std::uint64_t seed : {0ULL, 7ULL, 42ULL, 123456789ULL}) {
    const std::string a = to_json(generate_topology(params(15, seed)));
    const std::string b = to_json(generate_topology(params(15, seed)));
    CHECK(a == b);
  }
  CHECK(to_json(generate_topology(params(15, 1))) != to_json(generate_topology(params(15, 2))));
}

TEST_CASE("slot structure: symmetry, mirrors and predecessor prefix") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Topology t = generate_topology(params(5 + static_cast<int>(seed % 20), seed));
    CHECK(t.slot_count() == 2 * t.edge_count());
    for (std::size_t s = 0; s < t.slot_count(); ++s) {
      const Neighbor& nb = t.slot(s);
      const Neighbor& back = t.slot(nb.mirror);
      CHECK(back.mirror == s);
      CHECK(back.node == t.slot_owner(s));
      CHECK(back.cost == nb.cost);
      CHECK(back.distance == nb.distance);
      CHECK(back.edge == nb.edge);
    }
    for (std::size_t i = 0; i < t.node_count(); ++i) {
      const int id = static_cast<int>(i);
      CHECK(t.predecessors(id).size() + t.successors(id).size() == t.degree(id));
      for (const Neighbor& nb : t.predecessors(id)) CHECK(nb.node < id);
      for (const Neighbor& nb : t.successors(id)) CHECK(nb.node > id);
    }
  }
}

TEST_CASE("sink carries minus the total generation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenerateParams p = params(12, seed);
    const Topology base = generate_topology(p);
    std::vector<double> e(base.sensor_count()), g(base.sensor_count());
    for (std::size_t k = 0; k < g.size(); ++k) {
      e[k] = 1.0 + 0.37 * static_cast<double>(k);
      g[k] = 0.1 + 0.013 * static_cast<double>(k * k);
    }
    const Topology t = fixture::with_params(base, e, g);
    double sensors = 0.0;
    for (std::size_t i = 1; i < t.node_count(); ++i) sensors += t.node(static_cast<int>(i)).gen_rate;
    CHECK(sensors + t.node(0).gen_rate == 0.0);
  }
}

TEST_CASE("json round trip and revalidation") {
  const Topology t = generate_topology(params(15, 42));
  const std::string text = to_json(t);
  const Topology back = topology_from_json(text);
  CHECK(to_json(back) == text);
  CHECK(back.metadata().attempts == t.metadata().attempts);
  CHECK(std::isinf(back.node(0).initial_energy));

  std::string tampered = text;
  const auto pos = tampered.find("\"c\": ");
  REQUIRE(pos != std::string::npos);
  tampered.insert(pos + 5, "9");
  CHECK(code_of([&] { topology_from_json(tampered); }) == ErrorCode::ParseError);
  CHECK(code_of([] { topology_from_json("{not json"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { topology_from_json("{\"alpha\": 1}"); }) == ErrorCode::ParseError);
}

TEST_CASE("energy scaling touches only sensor energies") {
  const Topology t = generate_topology(params(10, 9));
  const Topology s = scale_energy(t, 10.0);
  for (std::size_t i = 1; i < t.node_count(); ++i) {
    CHECK(s.node(static_cast<int>(i)).initial_energy == 10.0 * t.node(static_cast<int>(i)).initial_energy);
  }
  CHECK(s.edge_count() == t.edge_count());
  CHECK(code_of([&] { scale_energy(t, 0.0); }) == ErrorCode::InvalidParam);
}

}
