#include "rsm/chord_moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsm/errors.hpp"
#include "rsm/geometry.hpp"
#include "rsm/mvpoly.hpp"

namespace rsm {

namespace {

constexpr double kPi = std::numbers::pi;

// Area from side lengths, Kahan's cancellation-free arrangement of Heron.
double kahan_area(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double x = s[0], y = s[1], z = s[2];
  const double p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return p > 0 ? 0.25 * std::sqrt(p) : 0.0;
}

void require_order(int k) {
  if (k < 0) throw UsageError("moment order must be a nonnegative integer, got " + std::to_string(k));
}

// Moment of the distance from the apex of a triangle whose apex angle is
// `apex`, whose edge of length `axis_len` leaves the apex towards a vertex
// with interior angle `far`, and whose side opposite the apex is `opposite`.
double apex_moment(int k, double apex, double axis_len, double far, double opposite) {
  const int m = k + 2;
  const double diff = csc_power_antiderivative(m, apex + far) - csc_power_antiderivative(m, far);
  return 2.0 * std::pow(axis_len * std::sin(far), k + 1) / ((k + 2) * opposite) * diff;
}

// Average over T2^blocks of a polynomial in consecutive (x, y) blocks.
ExactRational average_over_t2_blocks(const MVPoly& p) {
  const unsigned blocks = p.nvars() / 2;
  mpq_class total = 0;
  for (const auto& term : p.terms()) {
    mpq_class v = term.coeff.raw();
    for (unsigned b = 0; b < blocks; ++b) {
      const unsigned a = term.key[2 * b], c = term.key[2 * b + 1];
      v *= mpq_class(factorial(a) * factorial(c), factorial(a + c + 2));
    }
    total += v;
  }
  return ExactRational(total) * pow(ExactRational(2), blocks);
}

}  // namespace

TriangleSpec::TriangleSpec(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!(a > 0 && b > 0 && c > 0) || !std::isfinite(a + b + c))
    throw DomainError("triangle sides must be positive and finite");
  if (!(a + b > c && a + c > b && b + c > a)) throw DomainError("triangle inequality violated");
  const double area = kahan_area(a, b, c);
  if (!(area > 0)) throw DomainError("degenerate triangle");
  const double cx = (b * b + c * c - a * a) / (2.0 * c);
  const double cy = 2.0 * area / c;
  alpha_ = std::atan2(cy, cx);
  beta_ = std::atan2(cy, c - cx);
  gamma_ = kPi - alpha_ - beta_;
  if (!(gamma_ > 0)) throw DomainError("degenerate triangle");
}

TriangleSpec TriangleSpec::from_sides(double a, double b, double c) { return TriangleSpec(a, b, c); }

TriangleSpec TriangleSpec::from_vertices(Point2 A, Point2 B, Point2 C) {
  auto dist = [](Point2 p, Point2 q) { return std::hypot(p.x - q.x, p.y - q.y); };
  return TriangleSpec(dist(B, C), dist(C, A), dist(A, B));
}

TriangleSpec TriangleSpec::t2() { return TriangleSpec(1.0, 1.0, std::numbers::sqrt2); }

double TriangleSpec::area() const { return kahan_area(a_, b_, c_); }

Point2 TriangleSpec::C() const {
  return {(b_ * b_ + c_ * c_ - a_ * a_) / (2.0 * c_), 2.0 * area() / c_};
}

double csc_power_antiderivative(int m, double phi) {
  if (m < 1) throw UsageError("csc power must be >= 1");
  if (!(phi > 0.0 && phi < kPi)) throw DomainError("csc antiderivative needs 0 < phi < pi");
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  double value = (m % 2 == 1) ? std::log(std::tan(phi / 2.0)) : -c / s;
  for (int j = (m % 2 == 1) ? 3 : 4; j <= m; j += 2)
    value = -c * std::pow(s, 1 - j) / (j - 1) + static_cast<double>(j - 2) / (j - 1) * value;
  return value;
}

double vertex_moment(const TriangleSpec& t, TriangleVertex vertex, int k) {
  require_order(k);
  switch (vertex) {
    case TriangleVertex::kA:
      return apex_moment(k, t.alpha(), t.c(), t.beta(), t.a());
    case TriangleVertex::kB:
      return apex_moment(k, t.beta(), t.a(), t.gamma(), t.b());
    case TriangleVertex::kC:
      return apex_moment(k, t.gamma(), t.b(), t.alpha(), t.c());
  }
  return 0.0;
}

double edgepoint_split_angle(const TriangleSpec& t, double c1) {
  const Point2 C = t.C();
  return std::atan2(C.y, c1 - C.x);
}

double edgepoint_moment(const TriangleSpec& t, double c1, int k) {
  require_order(k);
  if (!(c1 >= 0.0 && c1 <= t.c())) throw DomainError("edge point must lie on AB (0 <= c1 <= c)");
  if (c1 == 0.0) return vertex_moment(t, TriangleVertex::kA, k);
  if (c1 == t.c()) return vertex_moment(t, TriangleVertex::kB, k);

  const int m = k + 2;
  const double delta = edgepoint_split_angle(t, c1);
  const double sa = std::sin(t.alpha());
  const double sb = std::sin(t.beta());
  const double left = std::pow(c1 * sa, m) *
                      (csc_power_antiderivative(m, t.alpha() + delta) -
                       csc_power_antiderivative(m, t.alpha()));
  const double right = std::pow((t.c() - c1) * sb, m) *
                       (csc_power_antiderivative(m, kPi - delta + t.beta()) -
                        csc_power_antiderivative(m, t.beta()));
  return 2.0 / ((k + 2) * t.b() * t.c() * sa) * (left + right);
}

double chord_moment(const TriangleSpec& t, int k) {
  require_order(k);
  const int m = k + 2;
  const std::array<double, 3> eta{t.alpha(), t.beta(), t.gamma()};
  const std::array<double, 3> edge{t.a(), t.b(), t.c()};
  std::array<double, 3> anti{};
  std::array<double, 3> csc_m{};
  for (int i = 0; i < 3; ++i) {
    anti[i] = csc_power_antiderivative(m, eta[i]);
    csc_m[i] = std::pow(1.0 / std::sin(eta[i]), m);
  }

  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double si = std::sin(eta[i]);
    const double ci = std::cos(eta[i]);
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      // integral over lines cutting off E_i whose far limit is set by E_j
      const double bracket = -ci * (anti[i] + anti[j]) + si / (k + 2) * (csc_m[j] - csc_m[i]);
      sum += std::pow(si, k + 3) * std::pow(edge[j], k + 4) * bracket;
    }
  }
  const double twice_area = 2.0 * t.area();
  return 8.0 / ((k + 2.0) * (k + 3.0) * (k + 4.0)) / (twice_area * twice_area) * sum;
}

double ratio_r(int k) {
  if (k < 1) throw UsageError("ratio_r needs k >= 1");
  return (k + 3.0) * (k + 4.0) / (std::pow(2.0, k + 3) + std::pow(2.0, k / 2.0 + 2.0));
}

ExactRational exact_even_chord_moment_t2(unsigned j) {
  const std::vector<std::string> vars{"x0", "y0", "x1", "y1"};
  const MVPoly dx = MVPoly::variable(vars, 0) - MVPoly::variable(vars, 2);
  const MVPoly dy = MVPoly::variable(vars, 1) - MVPoly::variable(vars, 3);
  return average_over_t2_blocks(mv_pow(mv_mul(dx, dx) + mv_mul(dy, dy), j));
}

ExactRational exact_even_point_moment_t2(const std::array<ExactRational, 2>& p, unsigned j) {
  const std::vector<std::string> vars{"x", "y"};
  const MVPoly dx = MVPoly::variable(vars, 0) - MVPoly::constant(vars, p[0]);
  const MVPoly dy = MVPoly::variable(vars, 1) - MVPoly::constant(vars, p[1]);
  return average_over_t2_blocks(mv_pow(mv_mul(dx, dx) + mv_mul(dy, dy), j));
}

}  // namespace rsm
