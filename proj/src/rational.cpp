#include "rsm/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw UsageError("not an integer: '" + std::string(s) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return BigInt(text, 10);
}

}  // namespace

ExactRational::ExactRational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

ExactRational& ExactRational::operator/=(const ExactRational& o) {
  if (o.is_zero()) throw UsageError("division by zero rational");
  q_ /= o.q_;
  return *this;
}

ExactRational ExactRational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw UsageError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return ExactRational(parse_integer(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (!frac.empty() && !all_digits(frac)) throw UsageError("bad decimal '" + std::string(text) + "'");
    const bool negative = !whole.empty() && whole.front() == '-';
    std::string_view whole_digits = whole;
    if (!whole_digits.empty() && (whole_digits.front() == '-' || whole_digits.front() == '+'))
      whole_digits.remove_prefix(1);
    if (whole_digits.empty() && frac.empty()) throw UsageError("bad decimal '" + std::string(text) + "'");
    if (!whole_digits.empty() && !all_digits(whole_digits))
      throw UsageError("bad decimal '" + std::string(text) + "'");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigInt digits(std::string(whole_digits.empty() ? "0" : whole_digits) + std::string(frac), 10);
    ExactRational r(digits, scale);
    return negative ? -r : r;
  }
  return ExactRational(parse_integer(text));
}

ExactRational ExactRational::from_double(double v) {
  if (!std::isfinite(v)) throw UsageError("non-finite double cannot be made exact");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), v);
  return ExactRational(std::move(q));
}

std::string ExactRational::to_string() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

ExactRational pow(const ExactRational& base, long exponent) {
  if (exponent < 0) return ExactRational(1) / pow(base, -exponent);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return ExactRational(num, den);
}

ExactRational abs(const ExactRational& v) { return v.sign() < 0 ? -v : v; }

std::string approx_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string exact_double_string(double v) { return ExactRational::from_double(v).to_string(); }

}  // namespace rsm
