#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsm/unipoly.hpp"

namespace rsm {

// Sturm sequence p, p', -rem(p, p'), ... with each member rescaled by a
// positive constant (|leading| == 1), which leaves sign-variation counts unchanged.
class SturmChain {
 public:
  explicit SturmChain(const UniPoly& p);

  const std::vector<UniPoly>& polynomials() const { return chain_; }
  // Sign variations at x, zeros skipped.
  int variations(const ExactRational& x) const;
  // Distinct real roots of the leading polynomial in (a, b].
  int count_roots(const ExactRational& a, const ExactRational& b) const;

 private:
  std::vector<UniPoly> chain_;
};

struct NonnegResult {
  enum class Reason {
    kCertified,       // no interior sign change, nonnegative at every checked point
    kNegativePoint,   // witness holds a rational point with p(witness) < 0
    kDegenerateZero,  // p is identically zero
  };
  bool nonnegative = false;
  Reason reason = Reason::kCertified;
  std::optional<ExactRational> witness;
  int distinct_roots_in_interval = 0;

  std::string describe() const;
};

// Decides p(t) >= 0 for all t in [lo, hi] exactly. Sign changes are located
// with the Sturm chain of the square-free part, so roots of even multiplicity
// (tangencies) are accepted and any odd-order crossing yields a witness.
NonnegResult sturm_nonneg_on_interval(const UniPoly& p, const ExactRational& lo,
                                      const ExactRational& hi);

}  // namespace rsm
