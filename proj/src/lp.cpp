#include "rsm/lp.hpp"

#include <cmath>
#include <optional>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

using Q = mpq_class;

// Two-phase tableau for min cost.y s.t. M y = rhs, y >= 0, rhs >= 0.
// Artificial columns m..m+n-1 start basic and may never re-enter.
class Tableau {
 public:
  enum class Outcome { kOptimal, kInfeasible, kUnbounded };

  Tableau(const std::vector<std::vector<Q>>& M, const std::vector<Q>& rhs, std::vector<Q> cost)
      : n_(M.size()), m_(cost.size()), cost_(std::move(cost)), t_(n_, std::vector<Q>(m_ + n_ + 1)),
        basis_(n_) {
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t j = 0; j < m_; ++j) t_[r][j] = M[r][j];
      t_[r][m_ + r] = 1;
      t_[r][m_ + n_] = rhs[r];
      basis_[r] = m_ + r;
    }
  }

  Outcome run() {
    // Phase 1: minimize the sum of artificials.
    std::vector<Q> phase1(m_ + n_, 0);
    for (std::size_t r = 0; r < n_; ++r) phase1[m_ + r] = 1;
    if (optimize(phase1, m_ + n_) == Outcome::kUnbounded) throw std::logic_error("phase 1 unbounded");
    for (std::size_t r = 0; r < n_; ++r)
      if (basis_[r] >= m_ && sgn(rhs(r)) != 0) return Outcome::kInfeasible;
    // Drive zero-level artificials out where possible; rows with no
    // structural entry are redundant and keep their artificial at zero.
    for (std::size_t r = 0; r < n_; ++r) {
      if (basis_[r] < m_) continue;
      for (std::size_t j = 0; j < m_; ++j)
        if (sgn(t_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
    }
    std::vector<Q> phase2(m_ + n_, 0);
    for (std::size_t j = 0; j < m_; ++j) phase2[j] = cost_[j];
    return optimize(phase2, m_);
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t pivots() const { return pivots_; }
  std::vector<Q> solution() const {
    std::vector<Q> y(m_, 0);
    for (std::size_t r = 0; r < n_; ++r)
      if (basis_[r] < m_) y[basis_[r]] = rhs(r);
    return y;
  }

 private:
  const Q& rhs(std::size_t r) const { return t_[r][m_ + n_]; }

  // Bland's rule over columns [0, enterable).
  Outcome optimize(const std::vector<Q>& c, std::size_t enterable) {
    std::vector<Q> reduced(m_ + n_);
    auto refresh = [&] {
      for (std::size_t j = 0; j < m_ + n_; ++j) {
        Q v = c[j];
        for (std::size_t r = 0; r < n_; ++r)
          if (sgn(t_[r][j]) != 0 && sgn(c[basis_[r]]) != 0) v -= c[basis_[r]] * t_[r][j];
        reduced[j] = v;
      }
    };
    refresh();
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < enterable; ++j)
        if (sgn(reduced[j]) < 0) {
          enter = j;
          break;
        }
      if (!enter) return Outcome::kOptimal;
      std::optional<std::size_t> leave;
      Q best;
      for (std::size_t r = 0; r < n_; ++r) {
        if (sgn(t_[r][*enter]) <= 0) continue;
        Q ratio = rhs(r) / t_[r][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) return Outcome::kUnbounded;
      pivot(*leave, *enter);
      // Update reduced costs with the new pivot row.
      const Q f = reduced[*enter];
      for (std::size_t j = 0; j < m_ + n_; ++j)
        if (sgn(t_[*leave][j]) != 0) reduced[j] -= f * t_[*leave][j];
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    ++pivots_;
    const Q p = t_[row][col];
    for (auto& v : t_[row])
      if (sgn(v) != 0) v /= p;
    for (std::size_t r = 0; r < n_; ++r) {
      if (r == row || sgn(t_[r][col]) == 0) continue;
      const Q f = t_[r][col];
      for (std::size_t j = 0; j <= m_ + n_; ++j)
        if (sgn(t_[row][j]) != 0) t_[r][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  std::size_t n_, m_;
  std::vector<Q> cost_;
  std::vector<std::vector<Q>> t_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

// Exact solve of A z = b for square nonsingular A.
std::vector<Q> solve_square(std::vector<std::vector<Q>> A, std::vector<Q> b) {
  const std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(A[p][c]) == 0) ++p;
    if (p == n) throw std::logic_error("singular basis");
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(A[r][c]) == 0) continue;
      const Q f = A[r][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) b[c] /= A[c][c];
  return b;
}

// The primal in normalized form: max c.x s.t. rows[r].x <= b[r].
struct Normalized {
  std::vector<std::vector<Q>> rows;
  std::vector<Q> b;
  std::vector<Q> c;
  std::vector<int> row_sign;
};

Normalized normalize(const LinearProgram& lp) {
  Normalized out;
  const int osign = lp.sense == Sense::kMaximize ? 1 : -1;
  for (const auto& v : lp.objective) out.c.push_back(osign * v.raw());
  for (const auto& con : lp.constraints) {
    const int s = con.relation == Relation::kLessEqual ? 1 : -1;
    std::vector<Q> row;
    for (const auto& v : con.coeffs) row.push_back(s * v.raw());
    out.rows.push_back(std::move(row));
    out.b.push_back(s * con.rhs.raw());
    out.row_sign.push_back(s);
  }
  return out;
}

struct DualRun {
  Tableau::Outcome outcome;
  std::vector<Q> x;  // primal point (normalized variables); only when optimal
  std::vector<Q> y;
  std::size_t pivots;
};

DualRun run_dual(const Normalized& p, const std::vector<Q>& c) {
  const std::size_t n = c.size(), m = p.rows.size();
  std::vector<std::vector<Q>> M(n, std::vector<Q>(m));
  std::vector<Q> rhs(n);
  std::vector<int> flip(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    flip[i] = sgn(c[i]) < 0 ? -1 : 1;
    rhs[i] = flip[i] * c[i];
    for (std::size_t r = 0; r < m; ++r) M[i][r] = flip[i] * p.rows[r][i];
  }
  Tableau tab(M, rhs, p.b);
  DualRun out{tab.run(), {}, {}, 0};
  out.pivots = tab.pivots();
  if (out.outcome != Tableau::Outcome::kOptimal) return out;
  out.y = tab.solution();
  // Simplex multipliers: pi . column_j = cost_j for every basic column.
  std::vector<std::vector<Q>> BT(n, std::vector<Q>(n));
  std::vector<Q> cb(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = tab.basis()[k];
    for (std::size_t i = 0; i < n; ++i) BT[k][i] = j < m ? M[i][j] : Q(i == j - m ? 1 : 0);
    cb[k] = j < m ? p.b[j] : Q(0);
  }
  const auto pi = solve_square(BT, cb);
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = flip[i] * pi[i];
  return out;
}

}  // namespace

void LinearProgram::validate() const {
  if (objective.empty()) throw UsageError("linear program has no variables");
  if (constraints.empty()) throw UsageError("linear program has no constraints");
  for (const auto& c : constraints)
    if (c.coeffs.size() != objective.size()) throw UsageError("constraint width differs from objective length");
}

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kUnbounded: return "unbounded";
    case LPStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

std::string to_string(BoundSide s) { return s == BoundSide::kLower ? "lower" : "upper"; }

LPSolution solve_simplex(const LinearProgram& lp) {
  lp.validate();
  const Normalized p = normalize(lp);
  LPSolution sol;
  DualRun run = run_dual(p, p.c);
  sol.pivots = run.pivots;
  if (run.outcome == Tableau::Outcome::kUnbounded) {
    sol.status = LPStatus::kInfeasible;
    return sol;
  }
  if (run.outcome == Tableau::Outcome::kInfeasible) {
    // Primal is unbounded if it is feasible at all; the zero objective decides.
    DualRun probe = run_dual(p, std::vector<Q>(p.c.size(), 0));
    sol.pivots += probe.pivots;
    sol.status = probe.outcome == Tableau::Outcome::kOptimal ? LPStatus::kUnbounded : LPStatus::kInfeasible;
    return sol;
  }
  sol.status = LPStatus::kOptimal;
  for (const auto& v : run.x) sol.values.emplace_back(v);
  for (const auto& v : run.y) sol.dual.emplace_back(v);
  ExactRational obj = 0;
  for (std::size_t i = 0; i < sol.values.size(); ++i) obj += lp.objective[i] * sol.values[i];
  sol.objective = obj;
  for (std::size_t r = 0; r < lp.constraints.size(); ++r) {
    ExactRational lhs = 0;
    for (std::size_t i = 0; i < sol.values.size(); ++i) lhs += lp.constraints[r].coeffs[i] * sol.values[i];
    if (lhs == lp.constraints[r].rhs) sol.active_rows.push_back(r);
  }
  if (!verify_optimality(lp, sol)) throw std::logic_error("simplex produced an unverifiable optimum");
  return sol;
}

bool verify_optimality(const LinearProgram& lp, const LPSolution& sol) {
  if (sol.status != LPStatus::kOptimal) return false;
  const std::size_t n = lp.objective.size(), m = lp.constraints.size();
  if (sol.values.size() != n || sol.dual.size() != m) return false;
  const Normalized p = normalize(lp);
  std::vector<Q> combo(n, 0);
  Q dual_obj = 0, primal_obj = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const Q& y = sol.dual[r].raw();
    if (sgn(y) < 0) return false;
    Q lhs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += p.rows[r][i] * sol.values[i].raw();
      if (sgn(y)) combo[i] += y * p.rows[r][i];
    }
    if (lhs > p.b[r]) return false;
    dual_obj += y * p.b[r];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (combo[i] != p.c[i]) return false;
    primal_obj += p.c[i] * sol.values[i].raw();
  }
  const Q reported = lp.sense == Sense::kMaximize ? sol.objective.raw() : Q(-sol.objective.raw());
  return primal_obj == dual_obj && reported == primal_obj;
}

ExactRational rationalize(double x, long max_den) {
  if (max_den < 1) throw UsageError("rationalize needs max_den >= 1");
  if (!std::isfinite(x)) throw UsageError("rationalize needs a finite value");
  // Convergents h/k of the exact binary value of x.
  Q rest = ExactRational::from_double(x).raw();
  BigInt h2 = 0, h1 = 1, k2 = 1, k1 = 0;
  BigInt best_h = 0, best_k = 1;
  for (;;) {
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    const BigInt h = a * h1 + h2;
    const BigInt k = a * k1 + k2;
    if (k > max_den) break;
    best_h = h;
    best_k = k;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    const Q frac = rest - Q(a);
    if (sgn(frac) == 0) break;
    rest = 1 / frac;
  }
  return ExactRational(best_h, best_k);
}

ExactRational default_interval_end(TetraCase c) {
  return c == TetraCase::kFree ? ExactRational(7, 8) : ExactRational(3, 10);
}

NodeSearchResult node_search(const MomentTable& table, unsigned degree, unsigned grid,
                             const ExactRational& interval_end, BoundSide side) {
  if (grid < degree || grid == 0) throw UsageError("grid must have at least degree+1 points");
  if (interval_end.sign() <= 0) throw UsageError("interval end must be positive");
  if (degree > table.k_max())
    throw CapacityError("node search of degree " + std::to_string(degree) + " needs moments up to k=" +
                        std::to_string(degree) + ", table holds k <= " + std::to_string(table.k_max()));
  // Work in scaled coefficients a'_i = a_i (E/L)^{2i}: row l becomes sum a'_i l^{2i}.
  const ExactRational step = interval_end / ExactRational(static_cast<long>(grid));
  const ExactRational inv_sq = pow(ExactRational(1) / step, 2);
  LinearProgram lp;
  lp.sense = side == BoundSide::kLower ? Sense::kMaximize : Sense::kMinimize;
  ExactRational scale = 1;
  for (unsigned i = 0; i <= degree; ++i) {
    lp.objective.push_back(table.at(i) * scale);
    scale *= inv_sq;
  }
  for (unsigned l = 0; l <= grid; ++l) {
    Constraint c;
    c.relation = side == BoundSide::kLower ? Relation::kLessEqual : Relation::kGreaterEqual;
    const BigInt l2 = BigInt(l) * l;
    BigInt power = 1;
    for (unsigned i = 0; i <= degree; ++i) {
      c.coeffs.emplace_back(power);
      power *= l2;
    }
    c.rhs = step * ExactRational(static_cast<long>(l));
    lp.constraints.push_back(std::move(c));
  }

  NodeSearchResult out;
  out.side = side;
  out.degree = degree;
  out.grid = grid;
  out.interval_end = interval_end;
  out.lp = solve_simplex(lp);
  if (out.lp.status != LPStatus::kOptimal)
    throw std::logic_error("node-search LP is " + to_string(out.lp.status));
  out.objective = out.lp.objective;
  ExactRational unscale = 1;
  for (unsigned i = 0; i <= degree; ++i) {
    out.coefficients.push_back(out.lp.values[i] * unscale);
    unscale *= inv_sq;
  }
  for (auto r : out.lp.active_rows) out.active_grid.push_back(static_cast<unsigned>(r));
  const double h = step.to_double();
  for (std::size_t i = 0; i < out.active_grid.size();) {
    std::size_t j = i;
    while (j + 1 < out.active_grid.size() && out.active_grid[j + 1] == out.active_grid[j] + 1) ++j;
    const unsigned first = out.active_grid[i], last = out.active_grid[j];
    if (first > 0 && last < grid) out.candidate_nodes.push_back(0.5 * (first + last) * h);
    i = j + 1;
  }
  return out;
}

}  // namespace rsm
