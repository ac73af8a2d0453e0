#include "rsm/unipoly.hpp"

#include <sstream>

#include "rsm/errors.hpp"

namespace rsm {

UniPoly::UniPoly(std::vector<ExactRational> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::monomial(const ExactRational& c, unsigned power) {
  std::vector<ExactRational> v(power + 1);
  v[power] = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

ExactRational UniPoly::evaluate(const ExactRational& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x.raw();
    acc += it->raw();
  }
  return ExactRational(std::move(acc));
}

double UniPoly::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_double();
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<ExactRational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * ExactRational(static_cast<long>(i));
  return UniPoly(std::move(d));
}

UniPoly UniPoly::compose_square() const {
  if (c_.empty()) return UniPoly();
  std::vector<ExactRational> d(2 * c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) d[2 * i] = c_[i];
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return *this * (ExactRational(1) / leading());
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const ExactRational& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  std::vector<mpq_class> acc(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += a.c_[i].raw() * b.c_[j].raw();
  std::vector<ExactRational> out;
  out.reserve(acc.size());
  for (auto& q : acc) out.emplace_back(std::move(q));
  return UniPoly(std::move(out));
}

std::string UniPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << '(' << c_[i].to_string() << ')';
    if (i >= 1) os << '*' << var;
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw UsageError("polynomial division by zero");
  if (a.degree() < b.degree()) return {UniPoly(), a};
  std::vector<mpq_class> rem;
  rem.reserve(a.coeffs().size());
  for (const auto& c : a.coeffs()) rem.push_back(c.raw());
  const int db = b.degree();
  const mpq_class lead = b.leading().raw();
  std::vector<ExactRational> quot(a.degree() - db + 1);
  mpq_class f;
  for (int i = a.degree(); i >= db; --i) {
    if (sgn(rem[i]) == 0) continue;
    f = rem[i] / lead;
    quot[i - db] = ExactRational(f);
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.coeffs()[j].raw();
  }
  rem.resize(db);
  std::vector<ExactRational> r;
  r.reserve(rem.size());
  for (auto& q : rem) r.emplace_back(std::move(q));
  return {UniPoly(std::move(quot)), UniPoly(std::move(r))};
}

UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

UniPoly squarefree_part(const UniPoly& p) {
  if (p.degree() <= 0) return p;
  UniPoly g = gcd(p, p.derivative());
  return divmod(p, g).first;
}

unsigned root_multiplicity(const UniPoly& p, const ExactRational& r) {
  if (p.is_zero()) throw UsageError("root_multiplicity of the zero polynomial");
  const UniPoly linear(std::vector<ExactRational>{-r, ExactRational(1)});
  unsigned m = 0;
  UniPoly q = p;
  while (q.evaluate(r).is_zero()) {
    q = divmod(q, linear).first;
    ++m;
  }
  return m;
}

}  // namespace rsm
