#pragma once

#include <array>

#include "rsm/rational.hpp"

namespace rsm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Triangle with vertices A, B, C; side a is opposite A, and so on. Angles are
// always derived from the side lengths, never supplied.
class TriangleSpec {
 public:
  static TriangleSpec from_sides(double a, double b, double c);
  static TriangleSpec from_vertices(Point2 A, Point2 B, Point2 C);
  // T2 labelled so that the hypotenuse is the edge AB: A = (1,0), B = (0,1), C = (0,0).
  static TriangleSpec t2();

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double area() const;
  // Canonical placement: A at the origin, B on the positive x-axis, C above it.
  Point2 A() const { return {0.0, 0.0}; }
  Point2 B() const { return {c_, 0.0}; }
  Point2 C() const;

 private:
  TriangleSpec(double a, double b, double c);
  double a_, b_, c_;
  double alpha_, beta_, gamma_;
};

enum class TriangleVertex { kA, kB, kC };

// Antiderivative of csc^m on (0, pi), normalized to vanish at pi/2:
//   I_1 = ln tan(phi/2), I_2 = -cot(phi),
//   I_m = -cos(phi) csc^{m-1}(phi) / (m-1) + (m-2)/(m-1) I_{m-2}.
double csc_power_antiderivative(int m, double phi);

// E |X - vertex|^k for X uniform in the triangle.
double vertex_moment(const TriangleSpec& t, TriangleVertex vertex, int k);

// E |X - D|^k where D lies on edge AB at distance c1 from A. The split angle
// at D between DA and DC is taken from the geometry with atan2.
double edgepoint_moment(const TriangleSpec& t, double c1, int k);
// Angle ADC for the point D at distance c1 from A along AB.
double edgepoint_split_angle(const TriangleSpec& t, double c1);

// E |X0 - X1|^k for two independent uniform points in the triangle.
double chord_moment(const TriangleSpec& t, int k);

// r(k) = (k+3)(k+4) / (2^{k+3} + 2^{k/2+2}): ratio of the midpoint-of-hypotenuse
// moment to the two-random-point moment in T2.
double ratio_r(int k);

// Exact even moments in T2 by polynomial integration (x^a y^b over T2 is
// a! b! / (a+b+2)!): E |X0 - X1|^{2j} and E |X - p|^{2j} for rational p.
ExactRational exact_even_chord_moment_t2(unsigned j);
ExactRational exact_even_point_moment_t2(const std::array<ExactRational, 2>& p, unsigned j);

}  // namespace rsm
