#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rsm {

using BigInt = mpz_class;

// Arbitrary-precision rational kept in canonical form (positive denominator,
// coprime numerator/denominator) after every operation.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  ExactRational(int v) : q_(static_cast<long>(v)) {}  // NOLINT
  ExactRational(const BigInt& num, const BigInt& den = 1);
  explicit ExactRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Parses "p/q", "p", or a finite decimal "1.25"; throws UsageError on junk.
  static ExactRational parse(std::string_view text);
  // Exact binary value of a finite double.
  static ExactRational from_double(double v);

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  double to_double() const { return q_.get_d(); }
  // "p/q" in lowest terms, "/q" omitted when q == 1.
  std::string to_string() const;

  ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
  ExactRational& operator/=(const ExactRational& o);

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
  ExactRational operator-() const { return ExactRational(mpq_class(-q_)); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

ExactRational pow(const ExactRational& base, long exponent);

// Report forms for values that are not exact rationals: "%.9e" text for an
// approximation, and the exact binary value of a double as "p/q".
std::string approx_string(double v);
std::string exact_double_string(double v);
ExactRational abs(const ExactRational& v);

}  // namespace rsm
