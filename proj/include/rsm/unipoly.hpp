#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsm/rational.hpp"

namespace rsm {

// Dense univariate polynomial, coefficient index == power, trailing zeros
// trimmed. The zero polynomial has degree kZeroDegree.
class UniPoly {
 public:
  static constexpr int kZeroDegree = -1;

  UniPoly() = default;
  explicit UniPoly(std::vector<ExactRational> coeffs);
  static UniPoly monomial(const ExactRational& c, unsigned power);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<ExactRational>& coeffs() const { return c_; }
  ExactRational coeff(unsigned i) const { return i < c_.size() ? c_[i] : ExactRational(0); }
  const ExactRational& leading() const { return c_.back(); }

  ExactRational evaluate(const ExactRational& x) const;
  double evaluate(double x) const;
  UniPoly derivative() const;
  // q(t) = p(t^2)
  UniPoly compose_square() const;
  UniPoly monic() const;

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly& operator*=(const ExactRational& s);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, const ExactRational& s) { return a *= s; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  UniPoly operator-() const { return *this * ExactRational(-1); }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<ExactRational> c_;
};

// Euclidean division a = q*b + r with deg r < deg b; b must be nonzero.
std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly gcd(UniPoly a, UniPoly b);  // monic, or zero when both are zero
UniPoly squarefree_part(const UniPoly& p);
// Largest m with (x - r)^m | p; p must be nonzero.
unsigned root_multiplicity(const UniPoly& p, const ExactRational& r);

inline ExactRational uni_eval(const UniPoly& p, const ExactRational& x) { return p.evaluate(x); }

}  // namespace rsm
