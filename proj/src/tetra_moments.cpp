#include "rsm/tetra_moments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "rsm/errors.hpp"
#include "rsm/geometry.hpp"

namespace rsm {

namespace {

using Triple = std::array<unsigned, 3>;

// Dense index of monomials x^a y^b z^c with a + b + c <= n.
class MonomialIndex {
 public:
  explicit MonomialIndex(unsigned n) : n_(n), slot_((n + 1) * (n + 1) * (n + 1), -1) {
    for (unsigned t = 0; t <= n; ++t)
      for (unsigned a = t + 1; a-- > 0;)
        for (unsigned b = t - a + 1; b-- > 0;) {
          const Triple e{a, b, t - a - b};
          slot_[flat(e)] = static_cast<int>(list_.size());
          list_.push_back(e);
        }
  }
  std::size_t size() const { return list_.size(); }
  const Triple& operator[](std::size_t i) const { return list_[i]; }
  std::size_t at(const Triple& e) const { return static_cast<std::size_t>(slot_[flat(e)]); }

 private:
  std::size_t flat(const Triple& e) const { return (e[0] * (n_ + 1) + e[1]) * (n_ + 1) + e[2]; }
  unsigned n_;
  std::vector<int> slot_;
  std::vector<Triple> list_;
};

// All triples with a + b + c == n.
std::vector<Triple> compositions3(unsigned n) {
  std::vector<Triple> out;
  for (unsigned a = 0; a <= n; ++a)
    for (unsigned b = 0; a + b <= n; ++b) out.push_back({a, b, n - a - b});
  return out;
}

BigInt binomial(unsigned n, unsigned r) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, r);
  return out;
}

BigInt multinomial3(unsigned m, const Triple& e) {
  return factorial(m) / (factorial(e[0]) * factorial(e[1]) * factorial(e[2]));
}

// Number of distinct orderings of a sorted triple.
unsigned permutation_count(const Triple& e) {
  if (e[0] == e[1] && e[1] == e[2]) return 1;
  if (e[0] == e[1] || e[1] == e[2]) return 3;
  return 6;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
      } catch (...) {
        std::lock_guard lock(fail_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::string human_count(double ops) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", ops);
  return buf;
}

// Multiply-adds in the free-case quadratic forms.
double free_cost(unsigned k) {
  const double n = 2.0 * k;
  const double nmon = (n + 1) * (n + 2) * (n + 3) / 6.0;
  double forms = 0;
  for (unsigned j = 0; j <= k; ++j) forms += (2.0 * j + 2) * (2.0 * j + 1) / 12.0 + 1;
  return forms * nmon * nmon / 2.0;
}

void guard(TetraCase c, unsigned k, const MomentOptions& opts) {
  const unsigned limit = opts.k_limit ? opts.k_limit : default_k_limit(c, opts.method);
  if (k <= limit) return;
  std::string cost;
  if (opts.method == MomentMethod::kSeparable && c == TetraCase::kFree)
    cost = "about " + human_count(free_cost(k)) + " big-integer multiply-adds";
  else if (opts.method == MomentMethod::kSeparable)
    cost = "about " + human_count(std::pow(2.0 * k + 1, 4) / 2) + " rational operations";
  else
    cost = "an expansion of D^" + std::to_string(k) + " with on the order of " +
           human_count(std::pow(2.0 * k + 1, c == TetraCase::kFree ? 6 : 4)) + " terms";
  throw CapacityError("even moment k=" + std::to_string(k) + " for the " + to_string(c) +
                      " case exceeds the limit k<=" + std::to_string(limit) + " (" + cost + ")");
}

// Fixed case: E D^k = 36 sum_{j,alpha} w F_{j,alpha}^2 with
// F = integral over T3 of |u|^{2(k-j)} u^alpha, u = X - c3.
ExactRational fixed_separable(unsigned k, unsigned threads) {
  const unsigned n = 2 * k;
  const ExactRational third(BigInt(-1), BigInt(3));
  std::vector<ExactRational> shift_pow(n + 1);
  shift_pow[0] = 1;
  for (unsigned i = 1; i <= n; ++i) shift_pow[i] = shift_pow[i - 1] * third;

  // S(beta) = integral over T3 of prod (x_i - 1/3)^{beta_i}, |beta| = n.
  const auto betas = compositions3(n);
  MonomialIndex top(n);
  std::vector<ExactRational> S(top.size());
  parallel_for(betas.size(), threads, [&](std::size_t bi) {
    const Triple& b = betas[bi];
    mpq_class acc = 0;
    for (unsigned g0 = 0; g0 <= b[0]; ++g0)
      for (unsigned g1 = 0; g1 <= b[1]; ++g1)
        for (unsigned g2 = 0; g2 <= b[2]; ++g2) {
          const mpq_class coeff(binomial(b[0], g0) * binomial(b[1], g1) * binomial(b[2], g2));
          acc += coeff * shift_pow[b[0] - g0 + b[1] - g1 + b[2] - g2].raw() *
                 monomial_integral_T3(g0, g1, g2).raw();
        }
    S[top.at(b)] = ExactRational(acc);
  });

  ExactRational total = 0;
  for (unsigned j = 0; j <= k; ++j) {
    const unsigned m = k - j;
    const auto pqr = compositions3(m);
    ExactRational inner = 0;
    for (const Triple& a : compositions3(2 * j)) {
      ExactRational F = 0;
      for (const Triple& e : pqr)
        F += ExactRational(multinomial3(m, e)) * S[top.at({2 * e[0] + a[0], 2 * e[1] + a[1], 2 * e[2] + a[2]})];
      inner += ExactRational(multinomial3(2 * j, a)) * F * F;
    }
    const ExactRational w(binomial(k, j));
    total += (j % 2 ? -w : w) * inner;
  }
  return total * ExactRational(36);
}

// Free case: E D^k = 216 sum_{j,alpha} w integral over T3 of G_{j,alpha}(X0)^2, where
// G(X0) = integral over T3 of f(X1 - X0) dX1 is a polynomial of degree 2k in X0.
// Coefficients are scaled to integers by (2k+3)!; the quadratic form by (4k+3)!.
ExactRational free_separable(unsigned k, unsigned threads) {
  const unsigned n = 2 * k;
  MonomialIndex low(n);
  const std::size_t nmon = low.size();
  const BigInt& fn = factorial(n + 3);
  const BigInt& f2n = factorial(2 * n + 3);

  // Mhat(g) = g! (n+3)! / (|g|+3)!, integer for |g| <= n.
  std::vector<BigInt> mhat(nmon);
  for (std::size_t i = 0; i < nmon; ++i) {
    const Triple& g = low[i];
    mhat[i] = factorial(g[0]) * factorial(g[1]) * factorial(g[2]) * fn / factorial(g[0] + g[1] + g[2] + 3);
  }
  // Quadratic form entries Q(d) = d! (2n+3)! / (|d|+3)! for |d| <= 2n.
  MonomialIndex high(2 * n);
  std::vector<BigInt> qform(high.size());
  for (std::size_t i = 0; i < high.size(); ++i) {
    const Triple& d = high[i];
    qform[i] = factorial(d[0]) * factorial(d[1]) * factorial(d[2]) * f2n / factorial(d[0] + d[1] + d[2] + 3);
  }
  std::vector<std::vector<std::size_t>> sum_slot(nmon, std::vector<std::size_t>(nmon));
  for (std::size_t a = 0; a < nmon; ++a)
    for (std::size_t b = 0; b < nmon; ++b)
      sum_slot[a][b] = high.at({low[a][0] + low[b][0], low[a][1] + low[b][1], low[a][2] + low[b][2]});

  // H_beta(X0) = integral over T3 of (X1 - X0)^beta dX1, |beta| = n, scaled by (n+3)!.
  const auto betas = compositions3(n);
  MonomialIndex top(n);
  std::vector<std::vector<BigInt>> H(top.size());
  parallel_for(betas.size(), threads, [&](std::size_t bi) {
    const Triple& b = betas[bi];
    std::vector<BigInt> h(nmon);
    for (unsigned g0 = 0; g0 <= b[0]; ++g0)
      for (unsigned g1 = 0; g1 <= b[1]; ++g1)
        for (unsigned g2 = 0; g2 <= b[2]; ++g2) {
          const Triple d{b[0] - g0, b[1] - g1, b[2] - g2};
          BigInt c = binomial(b[0], g0) * binomial(b[1], g1) * binomial(b[2], g2) * mhat[low.at({g0, g1, g2})];
          if ((d[0] + d[1] + d[2]) % 2) c = -c;
          h[low.at(d)] = c;
        }
    H[top.at(b)] = std::move(h);
  });

  // Only sorted alpha are evaluated; coordinate permutations leave T3 and the form invariant.
  struct Job {
    unsigned j;
    Triple alpha;
    BigInt weight;
  };
  std::vector<Job> jobs;
  for (unsigned j = 0; j <= k; ++j)
    for (const Triple& a : compositions3(2 * j)) {
      if (!(a[0] >= a[1] && a[1] >= a[2])) continue;
      BigInt w = binomial(k, j) * multinomial3(2 * j, a) * permutation_count(a);
      if (j % 2) w = -w;
      jobs.push_back({j, a, w});
    }

  std::vector<BigInt> contrib(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t ji) {
    const Job& job = jobs[ji];
    const unsigned m = k - job.j;
    std::vector<BigInt> g(nmon);
    for (const Triple& e : compositions3(m)) {
      const BigInt c = multinomial3(m, e);
      const auto& h = H[top.at({2 * e[0] + job.alpha[0], 2 * e[1] + job.alpha[1], 2 * e[2] + job.alpha[2]})];
      for (std::size_t i = 0; i < nmon; ++i)
        if (sgn(h[i])) mpz_addmul(g[i].get_mpz_t(), c.get_mpz_t(), h[i].get_mpz_t());
    }
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < nmon; ++i)
      if (sgn(g[i])) nz.push_back(i);
    BigInt diag = 0, off = 0, row, tmp;
    for (std::size_t x = 0; x < nz.size(); ++x) {
      const std::size_t a = nz[x];
      row = 0;
      for (std::size_t y = x + 1; y < nz.size(); ++y)
        mpz_addmul(row.get_mpz_t(), g[nz[y]].get_mpz_t(), qform[sum_slot[a][nz[y]]].get_mpz_t());
      mpz_addmul(off.get_mpz_t(), g[a].get_mpz_t(), row.get_mpz_t());
      tmp = g[a] * g[a];
      mpz_addmul(diag.get_mpz_t(), tmp.get_mpz_t(), qform[sum_slot[a][a]].get_mpz_t());
    }
    contrib[ji] = job.weight * (diag + 2 * off);
  });

  BigInt total = 0;
  for (const auto& c : contrib) total += c;
  return ExactRational(total * 216, fn * fn * f2n);
}

ExactRational by_expansion(TetraCase c, unsigned k) {
  return average_over_T3_blocks(mv_pow(build_gram_poly(c), k));
}

}  // namespace

std::string to_string(TetraCase c) { return c == TetraCase::kFree ? "free" : "fixed-centroid"; }

TetraCase parse_tetra_case(const std::string& text) {
  if (text == "free") return TetraCase::kFree;
  if (text == "fixed" || text == "fixed-centroid") return TetraCase::kFixedCentroid;
  throw UsageError("unknown case '" + text + "' (expected free or fixed-centroid)");
}

MVPoly build_gram_poly(TetraCase c) {
  const bool free = c == TetraCase::kFree;
  std::vector<std::string> vars;
  for (unsigned p = free ? 0 : 1; p <= 2; ++p)
    for (const char* axis : {"x", "y", "z"}) vars.push_back(axis + std::to_string(p));
  const unsigned offset = free ? 3 : 0;
  auto coord = [&](unsigned point, unsigned axis) {
    return MVPoly::variable(vars, (point - 1) * 3 + axis + offset);
  };
  std::array<MVPoly, 3> u, v;
  for (unsigned a = 0; a < 3; ++a) {
    const MVPoly pivot = free ? MVPoly::variable(vars, a)
                              : MVPoly::constant(vars, ExactRational(BigInt(1), BigInt(3)));
    u[a] = coord(1, a) - pivot;
    v[a] = coord(2, a) - pivot;
  }
  auto dot = [&](const std::array<MVPoly, 3>& p, const std::array<MVPoly, 3>& q) {
    MVPoly s(vars);
    for (unsigned a = 0; a < 3; ++a) s += mv_mul(p[a], q[a]);
    return s;
  };
  const MVPoly uv = dot(u, v);
  return mv_mul(dot(u, u), dot(v, v)) - mv_mul(uv, uv);
}

unsigned default_k_limit(TetraCase c, MomentMethod m) {
  if (m == MomentMethod::kExpansion) return c == TetraCase::kFree ? 4 : 6;
  return c == TetraCase::kFree ? 16 : 40;
}

ExactRational average_over_T3_blocks(const MVPoly& p) {
  if (p.nvars() % 3 != 0) throw UsageError("variables must come in (x, y, z) blocks");
  const unsigned blocks = p.nvars() / 3;
  mpq_class total = 0;
  for (const auto& term : p.terms()) {
    mpq_class v = term.coeff.raw();
    for (unsigned b = 0; b < blocks; ++b)
      v *= monomial_integral_T3(term.key[3 * b], term.key[3 * b + 1], term.key[3 * b + 2]).raw();
    total += v;
  }
  return ExactRational(total) * pow(ExactRational(6), blocks);
}

ExactRational even_moment(TetraCase c, unsigned k, const MomentOptions& opts) {
  guard(c, k, opts);
  if (k == 0) return 1;
  ExactRational d_moment;
  if (opts.method == MomentMethod::kExpansion)
    d_moment = by_expansion(c, k);
  else if (c == TetraCase::kFree)
    d_moment = free_separable(k, opts.threads);
  else
    d_moment = fixed_separable(k, opts.threads);
  return d_moment / pow(ExactRational(4), k);
}

MomentTable::MomentTable(TetraCase c, std::vector<ExactRational> values) : case_(c), values_(std::move(values)) {
  if (values_.empty() || values_[0] != ExactRational(1))
    throw UsageError("moment table must start with mu_0 = 1");
}

const ExactRational& MomentTable::at(unsigned k) const {
  if (k >= values_.size())
    throw CapacityError("moment table (" + to_string(case_) + ") holds k <= " + std::to_string(k_max()) +
                        ", requested k=" + std::to_string(k));
  return values_[k];
}

bool MomentTable::strictly_decreasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (!(values_[i].sign() > 0 && values_[i] < values_[i - 1])) return false;
  return true;
}

nlohmann::json MomentTable::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t k = 0; k < values_.size(); ++k)
    entries.push_back({{"k", k}, {"value", values_[k].to_string()}});
  return {{"case", to_string(case_)}, {"k_max", k_max()}, {"entries", entries}};
}

MomentTable MomentTable::from_json(const nlohmann::json& j) {
  try {
    const TetraCase c = parse_tetra_case(j.at("case").get<std::string>());
    std::vector<ExactRational> vals;
    for (const auto& e : j.at("entries")) {
      if (e.at("k").get<std::size_t>() != vals.size()) throw UsageError("moment table entries out of order");
      vals.push_back(ExactRational::parse(e.at("value").get<std::string>()));
    }
    return MomentTable(c, std::move(vals));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed moment table: ") + e.what());
  }
}

void MomentTable::save(const std::filesystem::path& file) const {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw UsageError("cannot write " + tmp);
    out << to_json().dump(2) << '\n';
  }
  std::filesystem::rename(tmp, file);
}

MomentTable MomentTable::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read " + file.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("malformed moment table " + file.string() + ": " + e.what());
  }
}

std::filesystem::path MomentTable::default_file(const std::filesystem::path& dir, TetraCase c) {
  return dir / (c == TetraCase::kFree ? "moments_free.json" : "moments_fixed.json");
}

MomentTable moment_table(TetraCase c, unsigned k_max, const TableOptions& opts) {
  std::vector<ExactRational> vals{ExactRational(1)};
  if (opts.checkpoint && std::filesystem::exists(*opts.checkpoint)) {
    const MomentTable saved = MomentTable::load(*opts.checkpoint);
    if (saved.tetra_case() != c)
      throw UsageError("checkpoint " + opts.checkpoint->string() + " holds the " + to_string(saved.tetra_case()) +
                       " case");
    vals = saved.values();
  }
  // Check the guard for the whole request before spending time on any entry.
  if (k_max >= vals.size()) guard(c, k_max, opts.moments);
  for (unsigned k = static_cast<unsigned>(vals.size()); k <= k_max; ++k) {
    vals.push_back(even_moment(c, k, opts.moments));
    if (opts.checkpoint) MomentTable(c, vals).save(*opts.checkpoint);
    if (opts.on_entry) opts.on_entry(k, vals.back());
  }
  if (vals.size() > k_max + 1) vals.resize(k_max + 1);
  return MomentTable(c, std::move(vals));
}

}  // namespace rsm
