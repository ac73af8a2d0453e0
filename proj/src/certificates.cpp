#include "rsm/certificates.hpp"

#include <algorithm>
#include <set>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

ExactRational q(long p, long d) { return ExactRational(BigInt(p), BigInt(d)); }

nlohmann::json to_strings(const std::vector<ExactRational>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

std::vector<ExactRational> from_strings(const nlohmann::json& a) {
  std::vector<ExactRational> out;
  for (const auto& x : a) out.push_back(ExactRational::parse(x.get<std::string>()));
  return out;
}

bool perfect_square(const BigInt& v, BigInt& root) {
  if (sgn(v) < 0) return false;
  mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
  return root * root == v;
}

}  // namespace

CertificateNodes default_nodes(BoundSide side) {
  if (side == BoundSide::kLower) return {{0, q(47, 54)}, {q(2, 19), q(4, 15), q(8, 17)}};
  return {{}, {q(1, 45), q(1, 17), q(1, 11), q(1, 8), q(1, 6), q(1, 5), q(3, 13), q(7, 27)}};
}

ExactRational default_interval_B(TetraCase c) { return c == TetraCase::kFree ? q(3, 4) : q(1, 12); }

TetraCase case_for_side(BoundSide side) {
  return side == BoundSide::kLower ? TetraCase::kFree : TetraCase::kFixedCentroid;
}

ExactRational separation_threshold() { return q(46942, 1000000); }

UniPoly hermite_interpolate(const std::vector<ExactRational>& single, const std::vector<ExactRational>& dbl) {
  std::set<ExactRational> seen;
  for (const auto* list : {&single, &dbl})
    for (const auto& s : *list) {
      if (s.sign() < 0) throw UsageError("interpolation node " + s.to_string() + " is negative");
      if (!seen.insert(s).second) throw UsageError("interpolation node " + s.to_string() + " is repeated");
    }
  for (const auto& s : dbl)
    if (s.is_zero()) throw UsageError("0 can only be a single node");
  const std::size_t n = single.size() + 2 * dbl.size();
  if (n == 0) throw UsageError("no interpolation nodes");

  // Rows [x^0 .. x^{n-1} | rhs] at x = s^2.
  std::vector<std::vector<mpq_class>> A;
  auto value_row = [&](const ExactRational& s) {
    std::vector<mpq_class> row(n + 1);
    const mpq_class x = (s * s).raw();
    mpq_class p = 1;
    for (std::size_t i = 0; i < n; ++i, p *= x) row[i] = p;
    row[n] = s.raw();
    A.push_back(std::move(row));
  };
  for (const auto& s : single) value_row(s);
  for (const auto& s : dbl) {
    value_row(s);
    std::vector<mpq_class> row(n + 1);
    const mpq_class x = (s * s).raw();
    mpq_class p = 1;
    for (std::size_t i = 1; i < n; ++i, p *= x) row[i] = static_cast<unsigned long>(i) * p;
    row[n] = 1 / (2 * s.raw());
    A.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(A[p][c]) == 0) ++p;
    if (p == n) throw UsageError("singular interpolation system");
    std::swap(A[p], A[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(A[r][c]) == 0) continue;
      const mpq_class f = A[r][c] / A[c][c];
      for (std::size_t j = c; j <= n; ++j) A[r][j] -= f * A[c][j];
    }
  }
  std::vector<ExactRational> coeffs;
  for (std::size_t c = 0; c < n; ++c) coeffs.emplace_back(mpq_class(A[c][n] / A[c][c]));
  return UniPoly(std::move(coeffs));
}

ExactRational sqrt_upper(const ExactRational& B) {
  if (B.sign() < 0) throw UsageError("sqrt_upper needs B >= 0");
  BigInt rn, rd;
  if (perfect_square(B.numerator(), rn) && perfect_square(B.denominator(), rd)) return ExactRational(rn, rd);
  BigInt scaled, two80 = 1;
  two80 <<= 80;
  const mpq_class t = B.raw() * mpq_class(two80);
  mpz_cdiv_q(scaled.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  BigInt s;
  mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
  BigInt two40 = 1;
  two40 <<= 40;
  return ExactRational(s + 1, two40);
}

BoundCheck verify_bound_polynomial(const UniPoly& poly, BoundSide side, const ExactRational& B) {
  if (B.sign() <= 0) throw UsageError("verification interval needs B > 0");
  BoundCheck out;
  out.t_end = sqrt_upper(B);
  const UniPoly t = UniPoly::monomial(1, 1);
  out.g = side == BoundSide::kLower ? t - poly.compose_square() : poly.compose_square() - t;
  out.sturm = sturm_nonneg_on_interval(out.g, 0, out.t_end);
  out.verified = out.sturm.nonnegative;
  return out;
}

ExactRational bound_from_moments(const UniPoly& poly, const MomentTable& table) {
  if (poly.degree() > static_cast<int>(table.k_max()))
    throw CapacityError("bound of degree " + std::to_string(poly.degree()) + " needs " + to_string(table.tetra_case()) +
                        " moments to k=" + std::to_string(poly.degree()) + ", table holds k <= " +
                        std::to_string(table.k_max()));
  ExactRational sum = 0;
  for (int i = 0; i <= poly.degree(); ++i) sum += poly.coeff(i) * table.at(i);
  return sum;
}

bool Certificate::multiplicities_ok() const {
  return std::all_of(multiplicities.begin(), multiplicities.end(),
                     [](const NodeMultiplicity& m) { return m.actual == m.expected; });
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json mult = nlohmann::json::array();
  for (const auto& m : multiplicities)
    mult.push_back({{"node", m.node.to_string()}, {"expected", m.expected}, {"actual", m.actual}});
  nlohmann::json j{
      {"side", to_string(side)},
      {"case", to_string(tetra_case)},
      {"degree", poly.degree()},
      {"coefficients", to_strings(poly.coeffs())},
      {"nodes", {{"single", to_strings(nodes.single)}, {"double", to_strings(nodes.dbl)}}},
      {"interval_B", interval_B.to_string()},
      {"t_end", t_end.to_string()},
      {"bound", bound.to_string()},
      {"bound_approx", approx_string(bound.to_double())},
      {"verified", verified},
      {"interpolation_exact", interpolation_exact},
      {"root_multiplicities", mult},
  };
  if (witness) j["witness"] = witness->to_string();
  return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    const auto side = j.at("side").get<std::string>();
    if (side != "lower" && side != "upper") throw UsageError("certificate side must be lower or upper");
    c.side = side == "lower" ? BoundSide::kLower : BoundSide::kUpper;
    c.tetra_case = j.contains("case") ? parse_tetra_case(j.at("case").get<std::string>()) : case_for_side(c.side);
    c.poly = UniPoly(from_strings(j.at("coefficients")));
    c.nodes.single = from_strings(j.at("nodes").at("single"));
    c.nodes.dbl = from_strings(j.at("nodes").at("double"));
    c.interval_B = ExactRational::parse(j.at("interval_B").get<std::string>());
    if (j.contains("t_end")) c.t_end = ExactRational::parse(j.at("t_end").get<std::string>());
    c.bound = ExactRational::parse(j.at("bound").get<std::string>());
    c.verified = j.at("verified").get<bool>();
    if (j.contains("witness")) c.witness = ExactRational::parse(j.at("witness").get<std::string>());
    c.interpolation_exact = j.value("interpolation_exact", false);
    for (const auto& m : j.value("root_multiplicities", nlohmann::json::array()))
      c.multiplicities.push_back({ExactRational::parse(m.at("node").get<std::string>()), m.at("expected").get<unsigned>(),
                                  m.at("actual").get<unsigned>()});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed certificate: ") + e.what());
  }
}

Certificate build_certificate(BoundSide side, const CertificateNodes& nodes, const ExactRational& B,
                              const MomentTable& table) {
  Certificate c;
  c.side = side;
  c.tetra_case = table.tetra_case();
  c.nodes = nodes;
  c.interval_B = B;
  c.poly = hermite_interpolate(nodes.single, nodes.dbl);
  // Fails fast on a short table before the Sturm work.
  c.bound = bound_from_moments(c.poly, table);

  const UniPoly dp = c.poly.derivative();
  c.interpolation_exact = true;
  for (const auto* list : {&nodes.single, &nodes.dbl})
    for (const auto& s : *list) c.interpolation_exact &= uni_eval(c.poly, s * s) == s;
  for (const auto& s : nodes.dbl) c.interpolation_exact &= uni_eval(dp, s * s) * (s * ExactRational(2)) == 1;

  const BoundCheck check = verify_bound_polynomial(c.poly, side, B);
  c.t_end = check.t_end;
  c.verified = check.verified;
  c.witness = check.sturm.witness;
  if (!check.g.is_zero()) {
    for (const auto& s : nodes.single) c.multiplicities.push_back({s, 1, root_multiplicity(check.g, s)});
    for (const auto& s : nodes.dbl) c.multiplicities.push_back({s, 2, root_multiplicity(check.g, s)});
  }
  return c;
}

nlohmann::json CounterexampleReport::to_json() const {
  return {
      {"second_moment",
       {{"fixed_centroid", second_fixed.to_string()},
        {"free", second_free.to_string()},
        {"gap", second_gap.to_string()},
        {"fixed_less_than_free", second_holds}}},
      {"lower_certificate", lower.to_json()},
      {"upper_certificate", upper.to_json()},
      {"threshold", separation_threshold().to_string()},
      {"lower_above_threshold", lower_above_threshold},
      {"upper_below_threshold", upper_below_threshold},
      {"bound_gap", bound_gap.to_string()},
      {"bound_gap_approx", approx_string(bound_gap.to_double())},
      {"verified", verified},
  };
}

CounterexampleReport verify_counterexample(const MomentTable& free_table, const MomentTable& fixed_table) {
  if (free_table.tetra_case() != TetraCase::kFree || fixed_table.tetra_case() != TetraCase::kFixedCentroid)
    throw UsageError("verify_counterexample needs a free table and a fixed-centroid table");
  const CertificateNodes lower_nodes = default_nodes(BoundSide::kLower);
  const CertificateNodes upper_nodes = default_nodes(BoundSide::kUpper);
  const unsigned need_free = static_cast<unsigned>(lower_nodes.single.size() + 2 * lower_nodes.dbl.size() - 1);
  const unsigned need_fixed = static_cast<unsigned>(upper_nodes.single.size() + 2 * upper_nodes.dbl.size() - 1);
  std::string missing;
  if (free_table.k_max() < need_free)
    missing += "free moments to k=" + std::to_string(need_free) + " (order " + std::to_string(2 * need_free) +
               "), have k<=" + std::to_string(free_table.k_max());
  if (fixed_table.k_max() < need_fixed) {
    if (!missing.empty()) missing += "; ";
    missing += "fixed-centroid moments to k=" + std::to_string(need_fixed) + " (order " +
               std::to_string(2 * need_fixed) + "), have k<=" + std::to_string(fixed_table.k_max());
  }
  if (!missing.empty()) throw CapacityError("moment tables too short: need " + missing);

  CounterexampleReport r;
  r.second_fixed = fixed_table.at(1);
  r.second_free = free_table.at(1);
  r.second_gap = r.second_free - r.second_fixed;
  r.second_holds = r.second_fixed < r.second_free;
  r.lower = build_certificate(BoundSide::kLower, lower_nodes, default_interval_B(TetraCase::kFree), free_table);
  r.upper = build_certificate(BoundSide::kUpper, upper_nodes, default_interval_B(TetraCase::kFixedCentroid),
                              fixed_table);
  r.bound_gap = r.lower.bound - r.upper.bound;
  r.lower_above_threshold = r.lower.bound > separation_threshold();
  r.upper_below_threshold = r.upper.bound < separation_threshold();
  r.verified = r.second_holds && r.lower.verified && r.upper.verified && r.lower_above_threshold &&
               r.upper_below_threshold && r.bound_gap.sign() > 0;
  return r;
}

}  // namespace rsm
