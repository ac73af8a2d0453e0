#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsm/rational.hpp"
#include "rsm/tetra_moments.hpp"

namespace rsm {

enum class Relation { kLessEqual, kGreaterEqual };
enum class Sense { kMaximize, kMinimize };

struct Constraint {
  std::vector<ExactRational> coeffs;
  Relation relation = Relation::kLessEqual;
  ExactRational rhs;
};

// Variables are free (unbounded sign).
struct LinearProgram {
  Sense sense = Sense::kMaximize;
  std::vector<ExactRational> objective;
  std::vector<Constraint> constraints;

  // UsageError on empty or ragged input.
  void validate() const;
};

enum class LPStatus { kOptimal, kUnbounded, kInfeasible };
std::string to_string(LPStatus s);

struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  std::vector<ExactRational> values;
  ExactRational objective;
  // Rows whose slack is exactly zero at `values`.
  std::vector<std::size_t> active_rows;
  // One nonnegative multiplier per row; sum_r dual_r * s_r * row_r = objective direction,
  // where s_r = +1 for rows that bind from above in the primal sense, -1 otherwise.
  std::vector<ExactRational> dual;
  std::size_t pivots = 0;
};

// Exact simplex (Bland's rule). The LP is solved through its dual, whose
// equality system has one row per variable, and the primal point is recovered
// from the optimal basis. Primal feasibility, dual feasibility and equal
// objectives are checked exactly before returning.
LPSolution solve_simplex(const LinearProgram& lp);

// Exact check of the certificate carried by an optimal solution.
bool verify_optimality(const LinearProgram& lp, const LPSolution& sol);

// Last continued-fraction convergent of x with denominator <= max_den.
ExactRational rationalize(double x, long max_den = 20);

enum class BoundSide { kLower, kUpper };
std::string to_string(BoundSide s);

struct NodeSearchResult {
  BoundSide side = BoundSide::kLower;
  unsigned degree = 0;
  unsigned grid = 0;
  ExactRational interval_end;
  // Optimal sum a_i mu_{2i}.
  ExactRational objective;
  // Coefficients a_0..a_n of the optimal polynomial in x = t^2.
  std::vector<ExactRational> coefficients;
  // Grid indices l (x_l = l E / L) where the constraint is active.
  std::vector<unsigned> active_grid;
  // Interior active runs merged to their midpoints, as t-values.
  std::vector<double> candidate_nodes;
  LPSolution lp;
};

// Lower side: max sum a_i mu_{2i} s.t. P(x_l^2) <= x_l; upper side: min s.t.
// Q(x_l^2) >= x_l, over x_l = l E / L for l = 0..L. CapacityError if the
// table is shorter than the degree.
NodeSearchResult node_search(const MomentTable& table, unsigned degree, unsigned grid,
                             const ExactRational& interval_end, BoundSide side);

// 7/8 for the free case (covers sqrt(3)/2), 3/10 for the fixed case (covers sqrt(3)/6).
ExactRational default_interval_end(TetraCase c);

}  // namespace rsm
