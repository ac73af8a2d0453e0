#include <doctest.h>

#include <cmath>
#include <random>

#include "rsm/errors.hpp"
#include "rsm/lp.hpp"

using namespace rsm;

namespace {

ExactRational Q(const char* s) { return ExactRational::parse(s); }

Constraint le(std::vector<ExactRational> a, ExactRational b) { return {std::move(a), Relation::kLessEqual, std::move(b)}; }
Constraint ge(std::vector<ExactRational> a, ExactRational b) { return {std::move(a), Relation::kGreaterEqual, std::move(b)}; }

bool feasible(const LinearProgram& lp, const std::vector<ExactRational>& x) {
  for (const auto& c : lp.constraints) {
    ExactRational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += c.coeffs[i] * x[i];
    if (c.relation == Relation::kLessEqual ? s > c.rhs : s < c.rhs) return false;
  }
  return true;
}

const MomentTable& free_table() {
  static const MomentTable t = moment_table(TetraCase::kFree, 7);
  return t;
}
const MomentTable& fixed_table() {
  static const MomentTable t = moment_table(TetraCase::kFixedCentroid, 15);
  return t;
}

}  // namespace

TEST_CASE("tiny programs") {
  LinearProgram a{Sense::kMaximize, {1}, {le({1}, 1)}};
  auto s = solve_simplex(a);
  REQUIRE(s.status == LPStatus::kOptimal);
  CHECK(s.values[0] == 1);
  CHECK(s.objective == 1);

  LinearProgram b{Sense::kMaximize, {1, 1}, {le({1, 0}, 1), le({0, 1}, 2), le({1, 1}, Q("5/2"))}};
  s = solve_simplex(b);
  REQUIRE(s.status == LPStatus::kOptimal);
  CHECK(s.objective == Q("5/2"));
  CHECK(verify_optimality(b, s));

  LinearProgram c{Sense::kMinimize, {2, 3}, {ge({1, 1}, 4), ge({1, 0}, 1), ge({0, 1}, 1), le({1, 0}, 10)}};
  s = solve_simplex(c);
  REQUIRE(s.status == LPStatus::kOptimal);
  CHECK(s.objective == 9);
  CHECK(s.values == std::vector<ExactRational>{3, 1});
}

TEST_CASE("unbounded and infeasible programs") {
  LinearProgram u{Sense::kMaximize, {1, 0}, {le({0, 1}, 1)}};
  CHECK(solve_simplex(u).status == LPStatus::kUnbounded);
  LinearProgram i{Sense::kMaximize, {1}, {le({1}, 0), ge({1}, 1)}};
  CHECK(solve_simplex(i).status == LPStatus::kInfeasible);
  LinearProgram j{Sense::kMinimize, {0, 0}, {ge({1, 1}, 3), le({1, 1}, 2)}};
  CHECK(solve_simplex(j).status == LPStatus::kInfeasible);
}

TEST_CASE("malformed programs") {
  CHECK_THROWS_AS(solve_simplex(LinearProgram{Sense::kMaximize, {}, {}}), UsageError);
  CHECK_THROWS_AS(solve_simplex(LinearProgram{Sense::kMaximize, {1, 1}, {le({1}, 1)}}), UsageError);
}

TEST_CASE("random programs: exact feasibility and duality") {
  std::mt19937_64 rng(53);
  int optimal = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const unsigned n = 2 + trial % 4, m = n + 2 + trial % 5;
    LinearProgram lp;
    lp.sense = trial % 2 ? Sense::kMaximize : Sense::kMinimize;
    for (unsigned i = 0; i < n; ++i) lp.objective.push_back(static_cast<long>(rng() % 11) - 5);
    for (unsigned r = 0; r < m; ++r) {
      std::vector<ExactRational> a;
      for (unsigned i = 0; i < n; ++i) a.push_back(ExactRational(static_cast<long>(rng() % 13) - 6, BigInt(1 + rng() % 3)));
      const ExactRational rhs(static_cast<long>(rng() % 20), BigInt(1 + rng() % 4));
      lp.constraints.push_back(rng() % 4 ? le(a, rhs) : ge(a, -rhs));
    }
    // Box rows keep most instances bounded.
    for (unsigned i = 0; i < n; ++i) {
      std::vector<ExactRational> e(n, 0);
      e[i] = 1;
      lp.constraints.push_back(le(e, 7));
      lp.constraints.push_back(ge(e, -7));
    }
    const auto s = solve_simplex(lp);
    if (s.status != LPStatus::kOptimal) continue;
    ++optimal;
    CHECK(feasible(lp, s.values));
    CHECK(verify_optimality(lp, s));
    ExactRational obj = 0;
    for (unsigned i = 0; i < n; ++i) obj += lp.objective[i] * s.values[i];
    CHECK(obj == s.objective);
    for (const auto& d : s.dual) CHECK(d.sign() >= 0);
    // A tampered objective must be rejected.
    LPSolution bad = s;
    bad.objective += ExactRational(1, 1000);
    CHECK_FALSE(verify_optimality(lp, bad));
  }
  CHECK(optimal > 40);
}

TEST_CASE("rationalize") {
  CHECK(rationalize(0.10526, 50) == Q("2/19"));
  CHECK(rationalize(0.5, 10) == Q("1/2"));
  CHECK(rationalize(0.25925, 30) == Q("7/27"));
  CHECK(rationalize(M_PI, 100) == Q("22/7"));
  CHECK(rationalize(-0.75, 10) == Q("-3/4"));
  CHECK(rationalize(3.0, 5) == 3);
  CHECK_THROWS_AS(rationalize(0.3, 0), UsageError);
  CHECK_THROWS_AS(rationalize(std::nan(""), 10), UsageError);
}

TEST_CASE("degree-one node search is a chord of the square root") {
  const auto r = node_search(free_table(), 1, 50, Q("7/8"), BoundSide::kLower);
  CHECK(r.lp.status == LPStatus::kOptimal);
  REQUIRE(r.coefficients.size() == 2);
  // P(x) <= sqrt(x) on the t-grid: the optimum touches the graph at the ends of an interval.
  CHECK(r.active_grid.size() >= 1);
  for (unsigned l : r.active_grid) {
    const ExactRational t = Q("7/8") * ExactRational(l, 50);
    CHECK(r.coefficients[0] + r.coefficients[1] * t * t == t);
  }
}

TEST_CASE("degree-6 lower program stays below 0.04647") {
  const auto r = node_search(free_table(), 6, 200, Q("7/8"), BoundSide::kLower);
  REQUIRE(r.lp.status == LPStatus::kOptimal);
  CHECK(r.objective < Q("4647/100000"));
  CHECK(r.objective > Q("46/1000"));
}

TEST_CASE("degree-14 upper program stays above 0.04699") {
  const auto r = node_search(fixed_table(), 14, 200, Q("3/10"), BoundSide::kUpper);
  REQUIRE(r.lp.status == LPStatus::kOptimal);
  CHECK(r.objective > Q("4699/100000"));
}

TEST_CASE("LP constraints hold exactly on the grid") {
  const ExactRational E = Q("7/8");
  const auto r = node_search(free_table(), 5, 100, E, BoundSide::kLower);
  for (unsigned l = 0; l <= 100; ++l) {
    const ExactRational t = E * ExactRational(l, 100);
    ExactRational p = 0, x = 1;
    for (const auto& a : r.coefficients) {
      p += a * x;
      x *= t * t;
    }
    CHECK(p <= t);
  }
}

TEST_CASE("objectives are monotone in the degree") {
  ExactRational prev_lo = -1;
  for (unsigned n = 2; n <= 7; ++n) {
    const auto r = node_search(free_table(), n, 100, Q("7/8"), BoundSide::kLower);
    CHECK(r.objective >= prev_lo);
    prev_lo = r.objective;
  }
  ExactRational prev_up = 1;
  for (unsigned l = 2; l <= 10; l += 2) {
    const auto r = node_search(fixed_table(), l, 100, Q("3/10"), BoundSide::kUpper);
    CHECK(r.objective <= prev_up);
    prev_up = r.objective;
  }
}

TEST_CASE("degree-7 nodes rationalize to 2/19, 4/15, 8/17") {
  const auto r = node_search(free_table(), 7, 1000, Q("7/8"), BoundSide::kLower);
  REQUIRE(r.candidate_nodes.size() == 3);
  CHECK(rationalize(r.candidate_nodes[0], 20) == Q("2/19"));
  CHECK(rationalize(r.candidate_nodes[1], 20) == Q("4/15"));
  CHECK(rationalize(r.candidate_nodes[2], 20) == Q("8/17"));
}

TEST_CASE("short table is a capacity error") {
  const MomentTable t = moment_table(TetraCase::kFree, 3);
  CHECK_THROWS_AS(node_search(t, 4, 50, Q("7/8"), BoundSide::kLower), CapacityError);
}
