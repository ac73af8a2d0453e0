#include "rsm/mvpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "rsm/errors.hpp"

namespace rsm {

ExponentKey ExponentKey::from(std::span<const unsigned> exponents) {
  if (exponents.size() > kMaxVars) throw CapacityError("more than 9 variables in an exponent key");
  std::uint64_t raw = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > kMaxExponent) throw CapacityError("exponent exceeds 127");
    raw |= static_cast<std::uint64_t>(exponents[i]) << (kBitsPerVar * i);
  }
  return from_raw(raw);
}

unsigned ExponentKey::total(unsigned nvars) const {
  unsigned t = 0;
  for (unsigned i = 0; i < nvars; ++i) t += (*this)[i];
  return t;
}

MVPoly::MVPoly(std::vector<std::string> variables) : vars_(std::move(variables)) {
  if (vars_.size() > ExponentKey::kMaxVars) throw CapacityError("MVPoly supports at most 9 variables");
}

MVPoly MVPoly::constant(std::vector<std::string> variables, const ExactRational& c) {
  MVPoly p(std::move(variables));
  if (!c.is_zero()) p.terms_.push_back({ExponentKey{}, c});
  return p;
}

MVPoly MVPoly::variable(std::vector<std::string> variables, unsigned index) {
  MVPoly p(std::move(variables));
  if (index >= p.nvars()) throw UsageError("variable index out of range");
  std::vector<unsigned> e(p.nvars(), 0);
  e[index] = 1;
  p.terms_.push_back({ExponentKey::from(e), ExactRational(1)});
  return p;
}

MVPoly MVPoly::from_terms(std::vector<std::string> variables, std::vector<Term> terms) {
  MVPoly p(std::move(variables));
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().key == t.key) {
      p.terms_.back().coeff += t.coeff;
    } else {
      p.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(p.terms_, [](const Term& t) { return t.coeff.is_zero(); });
  return p;
}

void MVPoly::require_same_vars(const MVPoly& o) const {
  if (vars_ != o.vars_) throw UsageError("MVPoly variable lists differ");
}

ExactRational MVPoly::coefficient(std::span<const unsigned> exponents) const {
  if (exponents.size() != nvars()) throw UsageError("exponent vector has wrong length");
  const ExponentKey key = ExponentKey::from(exponents);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, ExponentKey k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->coeff : ExactRational(0);
}

unsigned MVPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.key.total(nvars()));
  return d;
}

unsigned MVPoly::degree_in(unsigned var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.key[var]);
  return d;
}

ExactRational MVPoly::evaluate(std::span<const ExactRational> point) const {
  if (point.size() != nvars()) throw UsageError("evaluation point has wrong dimension");
  // powers[v][e] = point[v]^e
  std::vector<std::vector<ExactRational>> powers(nvars());
  for (unsigned v = 0; v < nvars(); ++v) {
    powers[v].push_back(ExactRational(1));
    for (unsigned e = 1; e <= degree_in(v); ++e) powers[v].push_back(powers[v].back() * point[v]);
  }
  ExactRational sum;
  for (const auto& t : terms_) {
    ExactRational m = t.coeff;
    for (unsigned v = 0; v < nvars(); ++v)
      if (t.key[v] != 0) m *= powers[v][t.key[v]];
    sum += m;
  }
  return sum;
}

double MVPoly::evaluate(std::span<const double> point) const {
  if (point.size() != nvars()) throw UsageError("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff.to_double();
    for (unsigned v = 0; v < nvars(); ++v) m *= std::pow(point[v], static_cast<int>(t.key[v]));
    sum += m;
  }
  return sum;
}

MVPoly& MVPoly::operator+=(const MVPoly& o) {
  require_same_vars(o);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->key < b->key)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->key < a->key) {
      merged.push_back(*b++);
    } else {
      ExactRational c = a->coeff + b->coeff;
      if (!c.is_zero()) merged.push_back({a->key, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

MVPoly& MVPoly::operator-=(const MVPoly& o) {
  MVPoly neg = o;
  neg *= ExactRational(-1);
  return *this += neg;
}

MVPoly& MVPoly::operator*=(const ExactRational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

MVPoly operator*(const MVPoly& a, const MVPoly& b) { return mv_mul(a, b); }

bool operator==(const MVPoly& a, const MVPoly& b) {
  if (a.vars_ != b.vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].key != b.terms_[i].key || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

std::string MVPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << t.coeff.to_string() << ')';
    for (unsigned v = 0; v < nvars(); ++v) {
      if (t.key[v] == 0) continue;
      os << '*' << vars_[v];
      if (t.key[v] > 1) os << '^' << t.key[v];
    }
  }
  return os.str();
}

MVPoly mv_mul(const MVPoly& a, const MVPoly& b) {
  if (a.variables() != b.variables()) throw UsageError("mv_mul: variable lists differ");
  for (unsigned v = 0; v < a.nvars(); ++v)
    if (a.degree_in(v) + b.degree_in(v) > ExponentKey::kMaxExponent)
      throw CapacityError("mv_mul: exponent of '" + a.variables()[v] + "' would exceed 127");

  std::unordered_map<std::uint64_t, mpq_class> acc;
  acc.reserve(a.size() * b.size() / 2 + 1);
  mpq_class prod;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      prod = ta.coeff.raw() * tb.coeff.raw();
      acc[(ta.key + tb.key).raw()] += prod;
    }
  }
  std::vector<MVPoly::Term> terms;
  terms.reserve(acc.size());
  for (auto& [raw, c] : acc)
    if (sgn(c) != 0) terms.push_back({ExponentKey::from_raw(raw), ExactRational(std::move(c))});
  return MVPoly::from_terms(a.variables(), std::move(terms));
}

MVPoly mv_pow(const MVPoly& p, unsigned k) {
  MVPoly result = MVPoly::constant(p.variables(), ExactRational(1));
  MVPoly base = p;
  while (k > 0) {
    if (k & 1u) result = mv_mul(result, base);
    k >>= 1;
    if (k > 0) base = mv_mul(base, base);
  }
  return result;
}

}  // namespace rsm
