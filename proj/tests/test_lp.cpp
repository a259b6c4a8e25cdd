#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "lifemax/lp_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lifemax;

namespace {

// Random edge/energy/rate variant of a generated graph.
Topology randomised(int sensors, std::uint64_t seed) {
  const Topology base = fixture::random_topology(sensors, seed);
  std::mt19937_64 rng(seed * 31 + 7);
  std::uniform_real_distribution<double> ue(2.5, 10.0), ug(0.5, 2.0);
  std::vector<double> e(base.sensor_count()), g(base.sensor_count());
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = ue(rng);
    g[k] = ug(rng);
  }
  return fixture::with_params(base, e, g);
}

Topology with_extra_edge(const Topology& t, int a, int b) {
  std::vector<Edge> edges = t.edges();
  edges.push_back({a, b, 0.0, 0.0});
  return Topology(t.nodes(), edges, t.radio(), t.metadata());
}

}  // namespace

TEST_SUITE("lp_oracle") {

TEST_CASE("problem shape") {
  const Topology one = fixture::single_sensor();
  const LpProblem lp = build_lp(one);
  CHECK(lp.eq_rows.size() == 2);
  CHECK(lp.le_rows.size() == 1);
  CHECK(lp.num_vars == 3);

  const Topology t = fixture::random_topology(15, 42);
  const LpProblem big = build_lp(t);
  CHECK(big.eq_rows.size() == 16);
  CHECK(big.le_rows.size() == 15);
  CHECK(big.num_vars == 1 + 2 * t.edge_count());

  std::vector<double> zeros(t.sensor_count(), 0.0), ones(t.sensor_count(), 1.0);
  const LpProblem idle = build_lp(fixture::with_params(t, ones, zeros));
  for (double b : idle.eq_rhs) CHECK(b == 0.0);
}

TEST_CASE("single sensor optimum is C g / e") {
  const LpSolution s = solve_lifetime_lp(fixture::single_sensor());
  CHECK(s.status == LpStatus::Optimal);
  CHECK(std::abs(s.q_star - 1.5) <= 1e-9);
  CHECK(std::abs(s.lifetime - 2.0 / 3.0) <= 1e-9);
  const Topology t = fixture::single_sensor();
  CHECK(std::abs(s.rates[t.find_slot(1, 0)] - 1.0) <= 1e-9);
  CHECK(std::abs(s.rates[t.find_slot(0, 1)]) <= 1e-9);

  const LpSolution s2 = solve_lifetime_lp(fixture::single_sensor(4.0, 3.0));
  CHECK(std::abs(s2.q_star - 1.5 * 3.0 / 4.0) <= 1e-9);
}

TEST_CASE("line network bottleneck") {
  // S2 -- S1 -- sink, both links of length 10 (C = 1.5).
  const Topology t = fixture::build({{10, 0, 1, 1}, {20, 0, 1, 1}}, {{0, 1}, {1, 2}});
  const LpSolution s = solve_lifetime_lp(t);
  CHECK(std::abs(s.q_star - 1.5 * 2.0 / 1.0) <= 1e-9);
  CHECK(std::abs(s.q_star - oracle::GridLp(t).solve()) <= 2e-3);
}

TEST_CASE("no traffic means q* = 0 and no flow") {
  const Topology base = fixture::random_topology(10, 5);
  std::vector<double> zeros(base.sensor_count(), 0.0), ones(base.sensor_count(), 1.0);
  const LpSolution s = solve_lifetime_lp(fixture::with_params(base, ones, zeros));
  CHECK(s.q_star == doctest::Approx(0.0));
  CHECK(std::isinf(s.lifetime));
  for (double r : s.rates) CHECK(std::abs(r) <= 1e-12);
}

TEST_CASE("agrees with grid search on tiny networks") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Topology t = randomised(1 + static_cast<int>(seed % 3), seed);
    const double q_lp = solve_lifetime_lp(t).q_star;
    const double q_grid = oracle::GridLp(t).solve();
    CAPTURE(seed);
    CHECK(q_grid >= q_lp - 1e-9);
    CHECK(std::abs(q_lp - q_grid) <= 2e-3);
  }
}

TEST_CASE("energy scaling scales the lifetime") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Topology t = randomised(10, seed);
    for (double s : {0.1, 3.0, 10.0}) {
      const double a = solve_lifetime_lp(t).lifetime;
      const double b = solve_lifetime_lp(scale_energy(t, s)).lifetime;
      CHECK(std::abs(b - s * a) <= 1e-9 * s * a);
    }
  }
}

TEST_CASE("adding a link never shortens the lifetime") {
  int tried = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Topology t = randomised(8, seed);
    const double before = solve_lifetime_lp(t).lifetime;
    for (int a = 0; a < static_cast<int>(t.node_count()) && tried < 40; ++a) {
      for (int b = a + 1; b < static_cast<int>(t.node_count()); ++b) {
        if (t.find_slot(a, b) < t.slot_count()) continue;
        const double after = solve_lifetime_lp(with_extra_edge(t, a, b)).lifetime;
        CHECK(after >= before * (1.0 - 1e-9));
        ++tried;
        break;
      }
    }
  }
  CHECK(tried > 0);
}

TEST_CASE("optimal flows conserve, and duals certify optimality") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Topology t = randomised(6 + static_cast<int>(seed), seed);
    const LpProblem lp = build_lp(t);
    const LpSolution s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);

    double into_sink = 0.0;
    for (std::size_t k = t.slot_begin(0); k < t.slot_end(0); ++k) {
      into_sink += s.x[rate_column(t.slot(k).mirror)] - s.x[rate_column(k)];
    }
    CHECK(std::abs(into_sink - t.total_generation()) <= 1e-9);

    // Primal feasibility.
    for (double v : s.x) CHECK(v >= -1e-9);
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) {
      double lhs = 0.0;
      for (std::size_t c = 0; c < lp.num_vars; ++c) lhs += lp.eq_rows[r][c] * s.x[c];
      CHECK(std::abs(lhs - lp.eq_rhs[r]) <= 1e-9);
    }
    // Dual feasibility, complementary slackness and zero duality gap.
    std::vector<double> reduced(lp.objective);
    double dual_obj = 0.0;
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) {
      dual_obj += s.eq_duals[r] * lp.eq_rhs[r];
      for (std::size_t c = 0; c < lp.num_vars; ++c) reduced[c] -= s.eq_duals[r] * lp.eq_rows[r][c];
    }
    for (std::size_t r = 0; r < lp.le_rows.size(); ++r) {
      CHECK(s.le_duals[r] <= 1e-9);
      double lhs = 0.0;
      for (std::size_t c = 0; c < lp.num_vars; ++c) {
        lhs += lp.le_rows[r][c] * s.x[c];
        reduced[c] -= s.le_duals[r] * lp.le_rows[r][c];
      }
      CHECK(lhs <= lp.le_rhs[r] + 1e-9);
      CHECK(std::abs(s.le_duals[r] * (lhs - lp.le_rhs[r])) <= 1e-8);
      dual_obj += s.le_duals[r] * lp.le_rhs[r];
    }
    for (std::size_t c = 0; c < lp.num_vars; ++c) {
      CHECK(reduced[c] >= -1e-8);
      CHECK(std::abs(reduced[c] * s.x[c]) <= 1e-8);
    }
    CHECK(std::abs(dual_obj - s.objective) <= 1e-8);
  }
}

TEST_CASE("repeated solves are bit-identical") {
  const Topology t = randomised(15, 3);
  const LpSolution a = solve_lifetime_lp(t);
  const LpSolution b = solve_lifetime_lp(t);
  CHECK(a.q_star == b.q_star);
  CHECK(a.rates == b.rates);
  CHECK(a.pivots == b.pivots);
}

TEST_CASE("generic LP statuses") {
  LpProblem infeasible;
  infeasible.num_vars = 1;
  infeasible.objective = {1.0};
  infeasible.eq_rows = {{1.0}};
  infeasible.eq_rhs = {-1.0};
  CHECK(solve_lp(infeasible).status == LpStatus::Infeasible);

  LpProblem unbounded;
  unbounded.num_vars = 2;
  unbounded.objective = {-1.0, 0.0};
  unbounded.eq_rows = {{1.0, -1.0}};
  unbounded.eq_rhs = {0.0};
  CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);
}

}
