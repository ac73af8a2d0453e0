#include "rsm/sturm.hpp"

#include "rsm/errors.hpp"

namespace rsm {

SturmChain::SturmChain(const UniPoly& p) {
  if (p.is_zero()) throw UsageError("Sturm chain of the zero polynomial");
  auto normalized = [](const UniPoly& u) { return u * (ExactRational(1) / abs(u.leading())); };
  chain_.push_back(normalized(p));
  if (p.degree() == 0) return;
  chain_.push_back(normalized(p.derivative()));
  while (true) {
    UniPoly r = divmod(chain_[chain_.size() - 2], chain_.back()).second;
    if (r.is_zero()) break;
    chain_.push_back(normalized(-r));
  }
}

int SturmChain::variations(const ExactRational& x) const {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain_) {
    const int s = q.evaluate(x).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int SturmChain::count_roots(const ExactRational& a, const ExactRational& b) const {
  return variations(a) - variations(b);
}

std::string NonnegResult::describe() const {
  switch (reason) {
    case Reason::kCertified:
      return "no interior sign change; nonnegative at all checked points";
    case Reason::kNegativePoint:
      return "negative at t = " + (witness ? witness->to_string() : std::string("?"));
    case Reason::kDegenerateZero:
      return "zero polynomial (degenerate)";
  }
  return {};
}

namespace {

struct Checker {
  const UniPoly& p;
  const UniPoly& q;  // square-free part
  const SturmChain& chain;
  std::optional<ExactRational> witness;

  bool negative_at(const ExactRational& x) {
    if (p.evaluate(x).sign() < 0) {
      witness = x;
      return true;
    }
    return false;
  }

  // Returns true if p >= 0 on the open interval (a, b). Endpoint values have
  // already been checked by the caller.
  bool check(const ExactRational& a, const ExactRational& b) {
    const bool b_root = q.evaluate(b).is_zero();
    const int interior = chain.count_roots(a, b) - (b_root ? 1 : 0);
    if (interior == 0) {
      // p has constant sign on (a, b)
      return !negative_at((a + b) / ExactRational(2));
    }
    if (interior == 1 && !b_root && !q.evaluate(a).is_zero()) {
      // single crossing or tangency; both sides' signs are read at a and b
      return true;
    }
    const ExactRational mid = (a + b) / ExactRational(2);
    if (negative_at(mid)) return false;
    return check(a, mid) && check(mid, b);
  }
};

}  // namespace

NonnegResult sturm_nonneg_on_interval(const UniPoly& p, const ExactRational& lo,
                                      const ExactRational& hi) {
  NonnegResult res;
  if (p.is_zero()) {
    res.nonnegative = true;
    res.reason = NonnegResult::Reason::kDegenerateZero;
    return res;
  }
  if (hi < lo) throw UsageError("sturm_nonneg_on_interval: lo > hi");

  auto fail_at = [&](const ExactRational& x) {
    res.nonnegative = false;
    res.reason = NonnegResult::Reason::kNegativePoint;
    res.witness = x;
    return res;
  };
  if (p.evaluate(lo).sign() < 0) return fail_at(lo);
  if (lo == hi) {
    res.nonnegative = true;
    return res;
  }
  if (p.evaluate(hi).sign() < 0) return fail_at(hi);

  const UniPoly q = squarefree_part(p);
  if (q.degree() <= 0) {
    // nonzero constant multiple of a constant: sign already read at lo
    res.nonnegative = true;
    return res;
  }
  const SturmChain chain(q);
  res.distinct_roots_in_interval =
      chain.count_roots(lo, hi) + (q.evaluate(lo).is_zero() ? 1 : 0);

  Checker checker{p, q, chain, std::nullopt};
  if (!checker.check(lo, hi)) return fail_at(*checker.witness);
  res.nonnegative = true;
  return res;
}

}  // namespace rsm
