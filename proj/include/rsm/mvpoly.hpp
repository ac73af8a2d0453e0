#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rsm/rational.hpp"

namespace rsm {

// Exponent vector packed into one machine word: 7 bits per variable, at most
// nine variables, every exponent <= 127.
class ExponentKey {
 public:
  static constexpr unsigned kBitsPerVar = 7;
  static constexpr unsigned kMaxVars = 9;
  static constexpr unsigned kMaxExponent = (1u << kBitsPerVar) - 1;

  constexpr ExponentKey() = default;
  static ExponentKey from(std::span<const unsigned> exponents);
  static constexpr ExponentKey from_raw(std::uint64_t raw) { ExponentKey k; k.raw_ = raw; return k; }

  constexpr unsigned operator[](unsigned var) const {
    return static_cast<unsigned>((raw_ >> (kBitsPerVar * var)) & kMaxExponent);
  }
  constexpr std::uint64_t raw() const { return raw_; }
  // Componentwise sum; caller guarantees no per-variable overflow.
  constexpr ExponentKey operator+(ExponentKey o) const { return from_raw(raw_ + o.raw_); }
  unsigned total(unsigned nvars) const;

  friend constexpr auto operator<=>(ExponentKey, ExponentKey) = default;

 private:
  std::uint64_t raw_ = 0;
};

// Sparse polynomial over Q in an ordered list of named variables. Terms are
// kept sorted by packed key; no stored coefficient is zero.
class MVPoly {
 public:
  struct Term {
    ExponentKey key;
    ExactRational coeff;
  };

  MVPoly() = default;
  explicit MVPoly(std::vector<std::string> variables);

  static MVPoly constant(std::vector<std::string> variables, const ExactRational& c);
  static MVPoly variable(std::vector<std::string> variables, unsigned index);

  const std::vector<std::string>& variables() const { return vars_; }
  unsigned nvars() const { return static_cast<unsigned>(vars_.size()); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  ExactRational coefficient(std::span<const unsigned> exponents) const;
  unsigned total_degree() const;
  unsigned degree_in(unsigned var) const;

  ExactRational evaluate(std::span<const ExactRational> point) const;
  double evaluate(std::span<const double> point) const;

  MVPoly& operator+=(const MVPoly& o);
  MVPoly& operator-=(const MVPoly& o);
  MVPoly& operator*=(const ExactRational& s);
  friend MVPoly operator+(MVPoly a, const MVPoly& b) { return a += b; }
  friend MVPoly operator-(MVPoly a, const MVPoly& b) { return a -= b; }
  friend MVPoly operator*(MVPoly a, const ExactRational& s) { return a *= s; }
  friend MVPoly operator*(const MVPoly& a, const MVPoly& b);
  friend bool operator==(const MVPoly& a, const MVPoly& b);

  std::string to_string() const;

  // Builds from unsorted (key, coeff) pairs, merging duplicates and dropping zeros.
  static MVPoly from_terms(std::vector<std::string> variables, std::vector<Term> terms);

 private:
  void require_same_vars(const MVPoly& o) const;
  std::vector<std::string> vars_;
  std::vector<Term> terms_;
};

// Exact product; throws UsageError if the variable lists differ and
// CapacityError if a per-variable exponent would exceed ExponentKey::kMaxExponent.
MVPoly mv_mul(const MVPoly& a, const MVPoly& b);
// Exact k-th power by binary exponentiation; p^0 == 1.
MVPoly mv_pow(const MVPoly& p, unsigned k);

}  // namespace rsm
