#include <doctest.h>

#include <cmath>

#include "rsm/errors.hpp"
#include "rsm/lifting.hpp"

using namespace rsm;

namespace {

SweepOptions opts(std::uint64_t samples = 200000, std::uint64_t seed = 3) {
  SweepOptions o;
  o.samples = samples;
  o.seed = seed;
  o.threads = 4;
  return o;
}

const std::vector<double> kEps{0.5, 0.125, 1.0 / 32};

}  // namespace

TEST_CASE("lifted bodies") {
  const Body K = Body::triangle_t2().with_fixed_point({0.5, 0.5});
  const Body L = lift_body(K, 0.25);
  CHECK(L.dim() == 3);
  REQUIRE(L.fixed_point());
  CHECK(*L.fixed_point() == Point{0.5, 0.5, 0.0});
  CHECK(body_measures(L).volume == doctest::Approx(0.125));
  CHECK_THROWS_AS(lift_body(K, 0.0), UsageError);
}

TEST_CASE("reference values") {
  CHECK(reference_moment(Body::triangle_t2(), 2, 2.0, 1000, 1, 1).value == doctest::Approx(2.0 / 9));
  CHECK(reference_moment(Body::parse("segment"), 2, 1.0, 1000, 1, 1).value == doctest::Approx(1.0 / 3));
  CHECK(reference_moment(Body::triangle_t2(), 4, 1.0, 1000, 1, 1).value == 0.0);
  CHECK(reference_moment(Body::tetrahedron_t3(), 3, 2.0, 1000, 1, 1).value == doctest::Approx(9.0 / 1600));
  const Body c2 = Body::triangle_t2().with_fixed_point({0.5, 0.5});
  CHECK(reference_moment(c2, 2, 2.0, 1000, 1, 1).value == doctest::Approx(1.0 / 6));
  CHECK(reference_moment(Body::cube(2), 2, 1.0, 20000, 1, 1).source == "monte-carlo");
}

TEST_CASE("interior sweep approaches the base moment") {
  const SweepResult r = interior_convergence_sweep(Body::triangle_t2(), 2, 2.0, kEps, opts());
  CHECK(r.converged);
  CHECK(r.reference.value == doctest::Approx(2.0 / 9));
  CHECK(std::abs(r.rows.back().estimate.mean - 2.0 / 9) < std::abs(r.rows.front().estimate.mean - 2.0 / 9));
  // E|X-Y|^2 on the prism adds the variance term 2 eps^2 / 12 in the new coordinate.
  for (const auto& row : r.rows)
    CHECK(std::abs(row.estimate.mean - (2.0 / 9 + row.eps * row.eps / 6)) < 3 * row.estimate.std_error);
}

TEST_CASE("boundary sweep and mixture weights") {
  const SweepResult r = boundary_convergence_sweep(Body::triangle_t2(), 2, 2.0, kEps, opts());
  CHECK(r.converged);
  for (const auto& row : r.rows) CHECK(row.flat_within_3sigma);
  const SweepResult q = boundary_convergence_sweep(Body::triangle_t2(), 2, 2.0, {0.25}, opts(400000, 8));
  CHECK(q.rows[0].flat_within_3sigma);
  CHECK(mixture_weight(Body::triangle_t2(), 10.0, 2) < 1e-3);
  CHECK(mixture_weight(Body::triangle_t2(), 1e-9, 2) == doctest::Approx(1.0));
  const SweepResult in = interior_convergence_sweep(Body::triangle_t2(), 2, 2.0, kEps, opts());
  const auto& a = in.rows.back().estimate;
  const auto& b = r.rows.back().estimate;
  // Both sweeps approach 2/9; at the smallest eps they differ by the boundary-versus-interior term.
  CHECK(std::abs(a.mean - 2.0 / 9) < 0.05);
  CHECK(std::abs(b.mean - 2.0 / 9) < 0.05);
}

TEST_CASE("flat faces reproduce the base body") {
  // Boundary points conditioned on the two caps are uniform copies of K; for
  // small eps their distances equal distances in K up to eps.
  const Body prism = lift_body(Body::triangle_t2(), 1e-6);
  BoundarySampler s(prism);
  RngStream rng(4, 0);
  double sum = 0.0;
  std::uint64_t n = 0;
  double sum2 = 0.0;
  while (n < 200000) {
    auto a = s.sample(rng), b = s.sample(rng);
    if (!a.flat_cap || !b.flat_cap) continue;
    const double d2 = std::pow(a.x[0] - b.x[0], 2) + std::pow(a.x[1] - b.x[1], 2);
    sum += d2;
    sum2 += d2 * d2;
    ++n;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 2.0 / 9) < 3 * se);
}

TEST_CASE("lifted nesting is preserved") {
  const Body K = Body::triangle_t2(), L = Body::cube(2);
  RngStream rng(2, 0);
  for (double eps : kEps) {
    const Body Ke = lift_body(K, eps), Le = lift_body(L, eps);
    for (int i = 0; i < 5000; ++i) CHECK(Le.contains(sample_uniform(Ke, rng)));
  }
}

TEST_CASE("epsilon search") {
  const Body K = Body::triangle_t2();
  const Body L = Body::triangle_t2().with_fixed_point({0.5, 0.5});
  const EpsilonSearch e = find_epsilon0(K, L, 2, 3.0, {0.25, 1.0 / 16, 1.0 / 64}, opts(100000));
  REQUIRE(e.eps0);
  CHECK(*e.eps0 == 0.25);
  CHECK_FALSE(e.inconclusive);
  const EpsilonSearch same = find_epsilon0(K, K, 2, 3.0, {0.25, 1.0 / 16}, opts(50000));
  CHECK(same.inconclusive);
  CHECK_FALSE(same.eps0);
  CHECK_THROWS_AS(find_epsilon0(K, K, 4, 3.0, {0.25}, opts(1000)), UsageError);
  CHECK_THROWS_AS(find_epsilon0(Body::cube(2, 2.0), K, 2, 1.0, {0.25}, opts(1000)), UsageError);
}

TEST_CASE("sweep argument checks") {
  CHECK_THROWS_AS(interior_convergence_sweep(Body::triangle_t2(), 2, 2.0, {0.1, 0.5}, opts(1000)), UsageError);
  CHECK_THROWS_AS(interior_convergence_sweep(Body::triangle_t2(), 5, 2.0, kEps, opts(1000)), UsageError);
  CHECK_THROWS_AS(boundary_convergence_sweep(Body::ball(2), 2, 2.0, kEps, opts(1000)), UsageError);
  CHECK_THROWS_AS(interior_convergence_sweep(Body::triangle_t2(), 2, 2.0, {}, opts(1000)), UsageError);
}

TEST_CASE("sweep reports") {
  const SweepResult r = boundary_convergence_sweep(Body::triangle_t2(), 2, 2.0, kEps, opts(20000));
  const auto j = r.to_json();
  CHECK(j["rows"].size() == 3);
  CHECK(j["mode"] == "boundary");
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("eps,mean,std_error,samples,reference,mixture_weight", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
