#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "rsm/lp.hpp"
#include "rsm/sturm.hpp"
#include "rsm/tetra_moments.hpp"
#include "rsm/unipoly.hpp"

namespace rsm {

// Interpolation nodes as t-values: the polynomial P in x = t^2 matches sqrt at
// x = t^2 for every node, and also matches the derivative 1/(2t) at double nodes.
struct CertificateNodes {
  std::vector<ExactRational> single;
  std::vector<ExactRational> dbl;
};

// Published node sets: lower {0, 47/54} + doubles {2/19, 4/15, 8/17};
// upper doubles {1/45, 1/17, 1/11, 1/8, 1/6, 1/5, 3/13, 7/27}.
CertificateNodes default_nodes(BoundSide side);
// x-domain bound for the verification interval: 3/4 (free), 1/12 (fixed).
ExactRational default_interval_B(TetraCase c);
TetraCase case_for_side(BoundSide side);
// Threshold separating the two bounds: 46942/1000000.
ExactRational separation_threshold();

// Unique polynomial of degree #single + 2 #double - 1 meeting the conditions,
// by exact Gaussian elimination. UsageError for repeated/negative nodes or a
// double node at 0.
UniPoly hermite_interpolate(const std::vector<ExactRational>& single, const std::vector<ExactRational>& dbl);

// Rational r >= sqrt(B): exact when B is a square, otherwise within 2^-40.
ExactRational sqrt_upper(const ExactRational& B);

struct BoundCheck {
  bool verified = false;
  // The t-interval actually certified is [0, t_end] with t_end^2 >= B.
  ExactRational t_end;
  // g(t) = t - P(t^2) (lower) or Q(t^2) - t (upper).
  UniPoly g;
  NonnegResult sturm;
};

BoundCheck verify_bound_polynomial(const UniPoly& poly, BoundSide side, const ExactRational& B);

// sum_i a_i mu_{2i}; CapacityError if the table is shorter than deg(poly).
ExactRational bound_from_moments(const UniPoly& poly, const MomentTable& table);

struct NodeMultiplicity {
  ExactRational node;
  unsigned expected = 0;
  unsigned actual = 0;
};

struct Certificate {
  BoundSide side = BoundSide::kLower;
  TetraCase tetra_case = TetraCase::kFree;
  UniPoly poly;
  CertificateNodes nodes;
  ExactRational interval_B;
  ExactRational t_end;
  ExactRational bound;
  bool verified = false;
  std::optional<ExactRational> witness;
  // Roots of g at the nodes: 1 at single nodes, 2 at double nodes.
  std::vector<NodeMultiplicity> multiplicities;
  bool interpolation_exact = false;

  bool multiplicities_ok() const;
  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
};

Certificate build_certificate(BoundSide side, const CertificateNodes& nodes, const ExactRational& B,
                              const MomentTable& table);

struct CounterexampleReport {
  ExactRational second_fixed;  // E V^2 with the fixed centroid vertex
  ExactRational second_free;   // E V^2 with three free vertices
  ExactRational second_gap;
  bool second_holds = false;
  Certificate lower;
  Certificate upper;
  ExactRational bound_gap;  // lower.bound - upper.bound
  bool lower_above_threshold = false;
  bool upper_below_threshold = false;
  bool verified = false;

  nlohmann::json to_json() const;
};

// Needs free moments to k = deg(lower) and fixed moments to k = deg(upper);
// a short table raises CapacityError naming every missing order.
CounterexampleReport verify_counterexample(const MomentTable& free_table, const MomentTable& fixed_table);

}  // namespace rsm
