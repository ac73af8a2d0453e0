#include <doctest.h>

#include <cmath>
#include <random>

#include "rsm/chord_moments.hpp"
#include "rsm/errors.hpp"

using namespace rsm;

namespace {

const double kAsinh1 = std::asinh(1.0);
const double kSqrt2 = std::sqrt(2.0);

struct Tri {
  Point2 A, B, C;
};

Tri placed(const TriangleSpec& t) { return {t.A(), t.B(), t.C()}; }

Point2 sample(const Tri& t, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  const double a = e(rng), b = e(rng), c = e(rng), s = a + b + c;
  return {(a * t.A.x + b * t.B.x + c * t.C.x) / s, (a * t.A.y + b * t.B.y + c * t.C.y) / s};
}

double dist(Point2 p, Point2 q) { return std::hypot(p.x - q.x, p.y - q.y); }

// Centroid rule on the uniform refinement of the triangle into m^2 congruent pieces.
double point_moment_quadrature(const Tri& t, Point2 p, int k, int m) {
  const Point2 u{(t.B.x - t.A.x) / m, (t.B.y - t.A.y) / m}, v{(t.C.x - t.A.x) / m, (t.C.y - t.A.y) / m};
  double sum = 0.0;
  long cells = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; i + j < m; ++j) {
      const Point2 o{t.A.x + i * u.x + j * v.x, t.A.y + i * u.y + j * v.y};
      sum += std::pow(dist({o.x + (u.x + v.x) / 3, o.y + (u.y + v.y) / 3}, p), k);
      ++cells;
      if (i + j + 1 < m) {
        sum += std::pow(dist({o.x + 2 * (u.x + v.x) / 3, o.y + 2 * (u.y + v.y) / 3}, p), k);
        ++cells;
      }
    }
  return sum / static_cast<double>(cells);
}

double simpson(double (*f)(double), double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

TriangleSpec random_triangle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 2.0);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (a + b > c * 1.05 && a + c > b * 1.05 && b + c > a * 1.05) return TriangleSpec::from_sides(a, b, c);
  }
}

}  // namespace

TEST_CASE("cosecant antiderivative") {
  CHECK(csc_power_antiderivative(2, M_PI / 2) - csc_power_antiderivative(2, M_PI / 4) == doctest::Approx(1.0));
  CHECK(std::abs(csc_power_antiderivative(1, M_PI / 2)) < 1e-15);
  const double quad = simpson([](double x) { return std::pow(1.0 / std::sin(x), 3); }, M_PI / 4, M_PI / 2, 2000);
  CHECK(std::abs(csc_power_antiderivative(3, M_PI / 2) - csc_power_antiderivative(3, M_PI / 4) - quad) < 1e-10);
  const double quad5 = simpson([](double x) { return std::pow(1.0 / std::sin(x), 5); }, 0.3, 2.5, 4000);
  CHECK(std::abs(csc_power_antiderivative(5, 2.5) - csc_power_antiderivative(5, 0.3) - quad5) < 1e-8);
}

TEST_CASE("T2 closed forms") {
  const TriangleSpec t2 = TriangleSpec::t2();
  CHECK(std::abs(vertex_moment(t2, TriangleVertex::kC, 2) - 1.0 / 3) < 1e-12);
  CHECK(std::abs(edgepoint_moment(t2, kSqrt2 / 2, 2) - 1.0 / 6) < 1e-12);
  CHECK(std::abs(edgepoint_moment(t2, kSqrt2 / 2, 4) - 7.0 / 180) < 1e-12);
  CHECK(std::abs(edgepoint_moment(t2, kSqrt2 / 2, 1) - (2 + kSqrt2 * kAsinh1) / (6 * kSqrt2)) < 1e-12);
  CHECK(std::abs(edgepoint_moment(t2, kSqrt2 / 2, 3) - (14 + 3 * kSqrt2 * kAsinh1) / (160 * kSqrt2)) < 1e-12);
  CHECK(std::abs(chord_moment(t2, 2) - 2.0 / 9) < 1e-12);
  CHECK(std::abs(chord_moment(t2, 4) - 0.1) < 1e-12);
  CHECK(std::abs(chord_moment(t2, 1) - (1 + 2 * kSqrt2) / 30 * (2 + kSqrt2 * kAsinh1)) < 1e-12);
  CHECK(std::abs(chord_moment(t2, 3) - (1 + 4 * kSqrt2) / 840 * (14 + 3 * kSqrt2 * kAsinh1)) < 1e-12);
}

TEST_CASE("exact even moments in T2 by polynomial integration") {
  // E|X - Y|^2 = 2 tr Cov(X); each coordinate of a uniform point in T2 has variance 1/18.
  CHECK(exact_even_chord_moment_t2(1) == ExactRational(2, 9));
  CHECK(exact_even_chord_moment_t2(2) == ExactRational(1, 10));
  CHECK(exact_even_point_moment_t2({ExactRational(1, 2), ExactRational(1, 2)}, 1) == ExactRational(1, 6));
  CHECK(exact_even_point_moment_t2({ExactRational(1, 2), ExactRational(1, 2)}, 2) == ExactRational(7, 180));
  CHECK(exact_even_point_moment_t2({0, 0}, 1) == ExactRational(1, 3));
  const TriangleSpec t2 = TriangleSpec::t2();
  for (unsigned j = 1; j <= 6; ++j) {
    CHECK(std::abs(exact_even_chord_moment_t2(j).to_double() - chord_moment(t2, 2 * j)) < 1e-12);
    CHECK(std::abs(exact_even_point_moment_t2({ExactRational(1, 2), ExactRational(1, 2)}, j).to_double() -
                   edgepoint_moment(t2, kSqrt2 / 2, 2 * j)) < 1e-12);
  }
}

TEST_CASE("ratio law") {
  CHECK(ratio_r(1) == doctest::Approx(20 / (16 + 4 * kSqrt2)));
  CHECK(ratio_r(1) < 1);
  CHECK(ratio_r(2) == doctest::Approx(0.75));
  const TriangleSpec t2 = TriangleSpec::t2();
  for (int k = 1; k <= 12; ++k)
    CHECK(std::abs(edgepoint_moment(t2, kSqrt2 / 2, k) / chord_moment(t2, k) - ratio_r(k)) < 1e-10);
  for (int k = 1; k <= 50; ++k) {
    CHECK(ratio_r(k + 1) < ratio_r(k));
    CHECK(edgepoint_moment(t2, kSqrt2 / 2, k) < chord_moment(t2, k));
  }
}

TEST_CASE("equilateral vertices agree") {
  const TriangleSpec eq = TriangleSpec::from_sides(1, 1, 1);
  for (int k = 1; k <= 5; ++k) {
    CHECK(vertex_moment(eq, TriangleVertex::kA, k) == doctest::Approx(vertex_moment(eq, TriangleVertex::kB, k)));
    CHECK(vertex_moment(eq, TriangleVertex::kA, k) == doctest::Approx(vertex_moment(eq, TriangleVertex::kC, k)));
  }
}

TEST_CASE("rigid motion invariance and scaling") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const TriangleSpec t = random_triangle(rng);
    const TriangleSpec s = TriangleSpec::from_sides(2 * t.a(), 2 * t.b(), 2 * t.c());
    // The same triangle placed with a rotation and a shift.
    const double th = 0.7 + trial;
    auto rot = [&](Point2 p) {
      return Point2{std::cos(th) * p.x - std::sin(th) * p.y + 3, std::sin(th) * p.x + std::cos(th) * p.y - 1};
    };
    const TriangleSpec r = TriangleSpec::from_vertices(rot(t.A()), rot(t.B()), rot(t.C()));
    for (int k = 1; k <= 4; ++k) {
      CHECK(std::abs(chord_moment(r, k) - chord_moment(t, k)) < 1e-10);
      CHECK(std::abs(vertex_moment(r, TriangleVertex::kB, k) - vertex_moment(t, TriangleVertex::kB, k)) < 1e-10);
      CHECK(std::abs(edgepoint_moment(r, 0.4 * t.c(), k) - edgepoint_moment(t, 0.4 * t.c(), k)) < 1e-10);
      const double f = std::pow(2.0, k);
      CHECK(std::abs(chord_moment(s, k) - f * chord_moment(t, k)) < 1e-10 * f);
      CHECK(std::abs(vertex_moment(s, TriangleVertex::kC, k) - f * vertex_moment(t, TriangleVertex::kC, k)) < 1e-10 * f);
      CHECK(std::abs(edgepoint_moment(s, 0.6 * s.c(), k) - f * edgepoint_moment(t, 0.3 * s.c(), k)) < 1e-10 * f);
    }
  }
}

TEST_CASE("edge point moment decomposes into vertex moments") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    const TriangleSpec t = random_triangle(rng);
    const double c1 = frac(rng) * t.c();
    const Point2 D{c1, 0.0};
    const TriangleSpec left = TriangleSpec::from_vertices(D, t.C(), t.A());
    const TriangleSpec right = TriangleSpec::from_vertices(D, t.B(), t.C());
    for (int k = 1; k <= 4; ++k) {
      const double mix = (left.area() * vertex_moment(left, TriangleVertex::kA, k) +
                          right.area() * vertex_moment(right, TriangleVertex::kA, k)) /
                         t.area();
      CHECK(std::abs(edgepoint_moment(t, c1, k) - mix) < 1e-10);
    }
  }
}

TEST_CASE("point moments match quadrature on random triangles") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const TriangleSpec t = random_triangle(rng);
    const Tri p = placed(t);
    const double c1 = 0.37 * t.c();
    for (int k = 1; k <= 3; ++k) {
      const double qv = point_moment_quadrature(p, p.A, k, 300);
      CHECK(std::abs(vertex_moment(t, TriangleVertex::kA, k) - qv) < 2e-5 * qv);
      const double qe = point_moment_quadrature(p, {c1, 0.0}, k, 300);
      CHECK(std::abs(edgepoint_moment(t, c1, k) - qe) < 2e-5 * qe);
    }
  }
}

TEST_CASE("chord moments match Monte Carlo on random triangles") {
  std::mt19937_64 rng(37);
  int misses = 0, checks = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const TriangleSpec t = random_triangle(rng);
    const Tri p = placed(t);
    const int N = 400000;
    for (int k = 1; k <= 3; ++k) {
      double s = 0, s2 = 0;
      for (int i = 0; i < N; ++i) {
        const double d = std::pow(dist(sample(p, rng), sample(p, rng)), k);
        s += d;
        s2 += d * d;
      }
      const double mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
      ++checks;
      if (std::abs(chord_moment(t, k) - mean) > 3 * se) ++misses;
      CHECK(std::abs(chord_moment(t, k) - mean) < 5 * se);
    }
  }
  // About 0.27% of 3-sigma checks miss by chance; 60 checks should see at most a few.
  CHECK(misses <= 3);
  MESSAGE(misses << " of " << checks << " outside 3 sigma");
}

TEST_CASE("3-4-5 triangle vertex moment against Monte Carlo") {
  const TriangleSpec t = TriangleSpec::from_sides(3, 4, 5);
  const Tri p = placed(t);
  std::mt19937_64 rng(41);
  const int N = 10000000;
  double s = 0, s2 = 0;
  for (int i = 0; i < N; ++i) {
    const double d = dist(sample(p, rng), p.A);
    s += d;
    s2 += d * d;
  }
  const double mean = s / N, se = std::sqrt((s2 / N - mean * mean) / N);
  CHECK(std::abs(vertex_moment(t, TriangleVertex::kA, 1) - mean) < 3 * se);
}

TEST_CASE("invalid triangles") {
  CHECK_THROWS_AS(TriangleSpec::from_sides(1, 1, 3), DomainError);
  CHECK_THROWS_AS(TriangleSpec::from_sides(-1, 1, 1), DomainError);
}
