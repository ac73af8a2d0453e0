#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rsm/errors.hpp"
#include "rsm/geometry.hpp"

using namespace rsm;

namespace {

// Integral over T3 of x^l y^m z^n through the substitution
// z = t, y = s(1-t), x = r(1-s)(1-t): a product of three Beta integrals.
ExactRational beta_chain(unsigned l, unsigned m, unsigned n) {
  auto beta = [](unsigned a, unsigned b) {  // B(a+1, b+1) with integer a, b
    BigInt fa = 1, fb = 1, fab = 1;
    for (unsigned i = 2; i <= a; ++i) fa *= i;
    for (unsigned i = 2; i <= b; ++i) fb *= i;
    for (unsigned i = 2; i <= a + b + 1; ++i) fab *= i;
    return ExactRational(fa * fb, fab);
  };
  return beta(l, 0) * beta(m, l + 1) * beta(n, l + m + 2);
}

std::vector<Point> rotate(const std::vector<Point>& pts, double a, double b, const Point& shift) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    const double x1 = std::cos(a) * p[0] - std::sin(a) * p[1], y1 = std::sin(a) * p[0] + std::cos(a) * p[1];
    const double y2 = std::cos(b) * y1 - std::sin(b) * p[2], z2 = std::sin(b) * y1 + std::cos(b) * p[2];
    out.push_back({x1 + shift[0], y2 + shift[1], z2 + shift[2]});
  }
  return out;
}

}  // namespace

TEST_CASE("gram_volume small sets") {
  CHECK(gram_volume(std::vector<Point>{{0, 0}, {1, 0}}) == doctest::Approx(1.0));
  CHECK(gram_volume(std::vector<Point>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}) == doctest::Approx(0.5));
  CHECK(gram_volume(std::vector<Point>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gram_volume(std::vector<Point>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == doctest::Approx(1.0 / 6));
}

TEST_CASE("gram_volume under motions, scaling and permutation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const unsigned n = 2 + trial % 3;
    std::vector<Point> pts(n, Point(3));
    for (auto& p : pts)
      for (auto& x : p) x = u(rng);
    const double v = gram_volume(pts);
    CHECK(std::abs(gram_volume(rotate(pts, u(rng) * 3, u(rng) * 3, {u(rng), u(rng), u(rng)})) - v) < 1e-10);
    std::vector<Point> scaled = pts;
    for (auto& p : scaled)
      for (auto& x : p) x *= 2.5;
    CHECK(std::abs(gram_volume(scaled) - std::pow(2.5, n - 1) * v) < 1e-10);
    std::vector<Point> perm = pts;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(std::abs(gram_volume(perm) - v) < 1e-12);
  }
}

TEST_CASE("exact Gram determinant matches the float volume") {
  std::vector<std::vector<ExactRational>> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK(gram_determinant(pts) == 1);
  CHECK(gram_volume_exact(pts) == doctest::Approx(0.5));
}

TEST_CASE("monomial integral over T3") {
  CHECK(monomial_integral_T3(0, 0, 0) == ExactRational(1, 6));
  CHECK(monomial_integral_T3(1, 0, 0) == ExactRational(1, 24));
  CHECK(monomial_integral_T3(2, 1, 0) == ExactRational(1, 360));
  for (unsigned l = 0; l <= 10; ++l)
    for (unsigned m = 0; l + m <= 10; ++m)
      for (unsigned n = 0; l + m + n <= 10; ++n) {
        const ExactRational v = monomial_integral_T3(l, m, n);
        CHECK(v == beta_chain(l, m, n));
        CHECK(v == monomial_integral_T3(n, l, m));
        CHECK(v == monomial_integral_T3(m, n, l));
        CHECK(v == monomial_integral_T3(m, l, n));
      }
}

TEST_CASE("body measures") {
  auto t2 = body_measures(Body::triangle_t2());
  CHECK(t2.volume == doctest::Approx(0.5));
  CHECK(t2.surface == doctest::Approx(2 + std::sqrt(2.0)));
  auto cube = body_measures(Body::cube(3));
  CHECK(cube.volume == doctest::Approx(1.0));
  CHECK(cube.surface == doctest::Approx(6.0));
  const Body prism = Body::product(Body::triangle_t2(), 0.1);
  auto pr = body_measures(prism);
  CHECK(pr.volume == doctest::Approx(0.05));
  CHECK(pr.surface == doctest::Approx(1.0 + (2 + std::sqrt(2.0)) / 10));
  double face_sum = 0.0;
  for (const auto& f : boundary_faces(prism)) face_sum += f.measure;
  CHECK(face_sum == doctest::Approx(pr.surface));
  CHECK(body_measures(Body::ball(3)).volume == doctest::Approx(4.0 / 3 * M_PI));
  CHECK_THROWS_AS(boundary_faces(Body::ball(2)), UsageError);
}

TEST_CASE("membership and boundary tests") {
  const Body t2 = Body::triangle_t2();
  CHECK(t2.contains(Point{0.2, 0.2}));
  CHECK_FALSE(t2.contains(Point{0.7, 0.7}));
  CHECK(t2.on_boundary(Point{0.5, 0.5}));
  CHECK_FALSE(t2.on_boundary(Point{0.2, 0.2}));
  CHECK(Body::halfball(2).on_boundary(Point{0.3, 0.0}));
}

TEST_CASE("body parsing and JSON round trip") {
  for (const char* text : {"T2", "T3", "segment", "simplex:4", "cube:2:3", "ball:3", "halfball:2", "prism(T2,0.25)"}) {
    const Body b = Body::parse(text);
    const Body c = Body::from_json(b.to_json());
    CHECK(c.to_json() == b.to_json());
  }
  CHECK(Body::parse("cube:2:3").side() == doctest::Approx(3.0));
  CHECK_THROWS_AS(Body::parse("dodecahedron"), UsageError);
}

TEST_CASE("factorials") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(factorial(25) == BigInt("15511210043330985984000000"));
}
