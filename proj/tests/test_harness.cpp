#include "doctest.h"

#include <cmath>
#include <vector>

#include "lifemax/error.hpp"
#include "lifemax/harness.hpp"
#include "lifemax/lp_oracle.hpp"
#include "support/fixtures.hpp"

using namespace lifemax;

namespace {

bool same_cells(const SweepCell& a, const SweepCell& b) {
  return a.rho == b.rho && a.failed == b.failed && a.error == b.error && a.gap == b.gap &&
         a.primal_norm == b.primal_norm && a.dual_norm == b.dual_norm &&
         a.iterations == b.iterations;
}

IterationTrace row(int iter, double q) {
  IterationTrace r;
  r.iter = iter;
  r.q_estimate = q;
  return r;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("message ledger counts one bundle per neighbor per round") {
  const Topology t = fixture::random_topology(15, 42);
  const MessageLedger none = count_messages(t, 0);
  CHECK(none.total == 0);
  const MessageLedger one = count_messages(t, 1);
  CHECK(one.total == 2 * t.edge_count());
  std::uint64_t sum = 0;
  for (std::uint64_t v : one.per_node) sum += v;
  CHECK(sum == one.total);
  const MessageLedger many = count_messages(t, 1246, kSubgradBundleFloats);
  CHECK(many.total == 1246 * one.total);
  CHECK(many.total_floats == 2 * many.total);
  CHECK(count_messages(t, 1246).total / count_messages(t, 14).total == 1246 / 14);
  CHECK_THROWS_AS(count_messages(t, -1), Error);
}

TEST_CASE("equal rounds give identical ledgers for both solvers") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Topology t = fixture::random_topology(8 + static_cast<int>(seed), seed);
    AdmmConfig a;
    a.max_iter = 25;
    a.early_stop = false;
    SubgradConfig s;
    s.max_iter = 25;
    s.early_stop = false;
    const AdmmResult ra = run_admm(t, a);
    const SubgradResult rs = run_subgradient(t, s);
    REQUIRE(ra.report.iterations == rs.report.iterations);
    const MessageLedger la = count_messages(t, ra.report.iterations);
    const MessageLedger ls = count_messages(t, rs.report.iterations);
    CHECK(la == ls);
    CHECK(ra.report.messages == la.total);
    CHECK(rs.report.messages == ls.total);
    CHECK(ra.trace.back().messages_cum == rs.trace.back().messages_cum);
  }
}

TEST_CASE("iterations to target needs the gap to stay within it") {
  const std::vector<IterationTrace> trace{row(1, 2.0), row(2, 1.02), row(3, 1.2), row(4, 1.04),
                                          row(5, 0.97)};
  CHECK(iterations_to_target(trace, 1.0, 0.05) == 4);
  CHECK(iterations_to_target(trace, 1.0, 0.25) == 2);
  CHECK_FALSE(iterations_to_target(trace, 1.0, 0.01).has_value());
  const std::vector<IterationTrace> zero{row(1, 0.0)};
  CHECK(iterations_to_target(zero, 0.0, 0.05) == 1);
}

TEST_CASE("sweep: singleton, determinism and thread count") {
  const Topology t = fixture::random_topology(10, 11);
  const double q_star = solve_lifetime_lp(t).q_star;
  const std::vector<double> one{7.0};
  const SweepResult single = rho_sweep(t, one, 30, AdmmConfig{}, q_star);
  REQUIRE(single.cells.size() == 1);
  CHECK(single.best == 0);
  CHECK(single.cells[0].iterations == 30);

  const std::vector<double> grid{0.1, 1.0, 7.0, 50.0, 500.0};
  const SweepResult a = rho_sweep(t, grid, 40, AdmmConfig{}, q_star, 1);
  const SweepResult b = rho_sweep(t, grid, 40, AdmmConfig{}, q_star, 1);
  const SweepResult c = rho_sweep(t, grid, 40, AdmmConfig{}, q_star, 4);
  REQUIRE(a.cells.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(same_cells(a.cells[i], b.cells[i]));
    CHECK(same_cells(a.cells[i], c.cells[i]));
    CHECK(a.cells[i].rho == grid[i]);
  }
  CHECK(a.best == b.best);
  CHECK(a.best == c.best);
  for (const SweepCell& cell : a.cells) {
    CHECK(cell.gap >= a.cells[static_cast<std::size_t>(a.best)].gap);
    CHECK(cell.norm_gap >= 0.0);
    CHECK(cell.norm_gap <= 1.0);
  }
  CHECK_THROWS_AS(rho_sweep(t, std::vector<double>{}, 10, AdmmConfig{}, q_star), Error);
  CHECK_THROWS_AS(rho_sweep(t, std::vector<double>{-1.0}, 10, AdmmConfig{}, q_star), Error);
}

TEST_CASE("a diverging cell leaves the others untouched") {
  const Topology t = fixture::random_topology(10, 11);
  const double q_star = solve_lifetime_lp(t).q_star;
  AdmmConfig base;
  base.divergence_bound = 1e4;
  const std::vector<double> grid{1.0, 1e7, 7.0};
  const SweepResult mixed = rho_sweep(t, grid, 30, base, q_star, 3);
  REQUIRE(mixed.cells[1].failed);
  CHECK(std::isnan(mixed.cells[1].norm_gap));
  CHECK(mixed.best != 1);
  for (std::size_t i : {0u, 2u}) {
    const std::vector<double> alone{grid[i]};
    const SweepResult solo = rho_sweep(t, alone, 30, base, q_star);
    CHECK_FALSE(mixed.cells[i].failed);
    CHECK(same_cells(mixed.cells[i], solo.cells[0]));
  }
}

TEST_CASE("compare on trivial instances") {
  const Topology base = fixture::random_topology(6, 8);
  std::vector<double> zeros(base.sensor_count(), 0.0), ones(base.sensor_count(), 1.0);
  AdmmConfig a;
  a.init.kind = AdmmInit::Kind::Zero;
  const CompareRecord idle = compare(fixture::with_params(base, ones, zeros), a, SubgradConfig{}, 0.0);
  REQUIRE(idle.admm.iterations_to_target.has_value());
  CHECK(idle.subgrad.iterations_to_target == 1);
  REQUIRE(idle.ratio.has_value());
  CHECK(*idle.ratio == doctest::Approx(1.0 / *idle.admm.iterations_to_target));
  CHECK_FALSE(idle.ratio_is_lower_bound);

  SubgradConfig s;
  s.max_iter = 20000;
  const CompareRecord one = compare(fixture::single_sensor(), AdmmConfig{}, s, 1.5);
  CHECK(one.admm.iterations_to_target.has_value());
  CHECK(one.subgrad.iterations_to_target.has_value());
  CHECK(one.admm.final_gap <= 0.05);
  CHECK(one.subgrad.final_gap <= 0.05);
  CHECK(one.admm.messages_to_target == 2u * static_cast<std::uint64_t>(*one.admm.iterations_to_target));
}

TEST_CASE("a subgradient timeout yields a lower bound") {
  const Topology t = fixture::random_topology(15, 42);
  const double q_star = solve_lifetime_lp(t).q_star;
  AdmmConfig a;
  a.rho = 7.0;
  a.max_iter = 3000;
  SubgradConfig s;
  s.max_iter = 200;
  const CompareRecord rec = compare(t, a, s, q_star);
  if (rec.admm.iterations_to_target && !rec.subgrad.iterations_to_target) {
    REQUIRE(rec.ratio.has_value());
    CHECK(rec.ratio_is_lower_bound);
    CHECK(*rec.ratio == doctest::Approx(200.0 / *rec.admm.iterations_to_target));
    CHECK(rec.subgrad.timed_out);
  }
  CHECK(rec.subgrad.iterations_run <= 200);
}

}
