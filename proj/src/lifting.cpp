#include "rsm/lifting.hpp"

#include <cmath>
#include <sstream>

#include "rsm/chord_moments.hpp"
#include "rsm/errors.hpp"
#include "rsm/tetra_moments.hpp"

namespace rsm {

namespace {

bool is_integer(double k) { return std::floor(k) == k && k >= 0 && k < 1e6; }

void check_eps(const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw UsageError("eps list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0) || !std::isfinite(eps_list[i])) throw UsageError("eps values must be positive");
    if (i && !(eps_list[i] < eps_list[i - 1])) throw UsageError("eps values must be strictly decreasing");
  }
}

void check_sweep_dims(const Body& K, unsigned n) {
  if (n < 2 || n > K.dim() + 2)
    throw UsageError("sweeps need 2 <= n <= dim(K)+2, got n=" + std::to_string(n) + " with dim(K)=" +
                     std::to_string(K.dim()));
}

std::optional<double> triangle_closed_form(const Body& K, int k) {
  const TriangleSpec t = TriangleSpec::t2();
  const auto& fp = K.fixed_point();
  if (!fp) return chord_moment(t, k);
  const double x = (*fp)[0], y = (*fp)[1];
  // Vertices A = (1,0), B = (0,1), C = (0,0); AB is the hypotenuse.
  if (x == 0.0 && y == 0.0) return vertex_moment(t, TriangleVertex::kC, k);
  if (std::abs(x + y - 1.0) <= 1e-12) return edgepoint_moment(t, std::sqrt(2.0) * (1.0 - x), k);
  return std::nullopt;
}

SweepResult finish(SweepResult r) {
  const SweepRow& first = r.rows.front();
  const SweepRow& last = r.rows.back();
  const double ref = r.reference.value;
  const double sigma = std::hypot(last.estimate.std_error, r.reference.std_error);
  const double d_first = std::abs(first.estimate.mean - ref);
  const double d_last = std::abs(last.estimate.mean - ref);
  r.converged = d_last < d_first + 6.0 * sigma;
  r.within_noise = d_last <= 3.0 * sigma;
  if (r.within_noise)
    r.verdict = "converged within noise";
  else if (r.converged)
    r.verdict = "approaching reference";
  else
    r.verdict = "not converging";
  return r;
}

}  // namespace

Body lift_body(const Body& K, double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw UsageError("lift height must be positive");
  Body lifted = Body::product(K.without_fixed_point(), eps);
  if (const auto& p = K.fixed_point()) {
    Point q = *p;
    q.push_back(0.0);
    lifted = lifted.with_fixed_point(std::move(q));
  }
  return lifted;
}

double mixture_weight(const Body& K, double eps, unsigned random_points) {
  const BodyMeasures m = body_measures(K);
  return std::pow(2.0 * m.volume / (2.0 * m.volume + m.surface * eps), random_points);
}

Reference reference_moment(const Body& K, unsigned n, double k, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads) {
  if (n == K.dim() + 2) return {0.0, 0.0, "exact"};
  const bool simplex = K.kind() == BodyKind::kStandardSimplex;
  if (simplex && K.dim() == 1 && n == 2 && !K.fixed_point()) return {2.0 / ((k + 1) * (k + 2)), 0.0, "closed-form"};
  if (simplex && K.dim() == 2 && n == 2 && is_integer(k))
    if (auto v = triangle_closed_form(K, static_cast<int>(k))) return {*v, 0.0, "closed-form"};
  if (simplex && K.dim() == 3 && n == 3 && is_integer(k) && static_cast<long>(k) % 2 == 0) {
    const auto& fp = K.fixed_point();
    const bool centroid = fp && std::abs((*fp)[0] - 1.0 / 3) < 1e-12 && std::abs((*fp)[1] - 1.0 / 3) < 1e-12 &&
                          std::abs((*fp)[2] - 1.0 / 3) < 1e-12;
    if (!fp || centroid) {
      const auto c = centroid ? TetraCase::kFixedCentroid : TetraCase::kFree;
      return {even_moment(c, static_cast<unsigned>(k / 2)).to_double(), 0.0, "exact"};
    }
  }
  MomentQuery q;
  q.body = K;
  q.n = n;
  q.k = k;
  q.samples = samples;
  q.seed = seed;
  q.threads = threads;
  const auto e = estimate_moment(q).estimate;
  return {e.mean, e.std_error, "monte-carlo"};
}

SweepResult interior_convergence_sweep(const Body& K, unsigned n, double k, const std::vector<double>& eps_list,
                                       const SweepOptions& opts) {
  check_eps(eps_list);
  check_sweep_dims(K, n);
  SweepResult r;
  r.mode = SampleMode::kInterior;
  r.base = K;
  r.n = n;
  r.k = k;
  r.reference = opts.reference ? Reference{*opts.reference, 0.0, "user"}
                               : reference_moment(K, n, k, opts.samples, opts.seed ^ 0x9e3779b97f4a7c15ULL, opts.threads);
  for (double eps : eps_list) {
    MomentQuery q;
    q.body = lift_body(K, eps);
    q.n = n;
    q.k = k;
    q.samples = opts.samples;
    q.seed = opts.seed;
    q.threads = opts.threads;
    SweepRow row;
    row.eps = eps;
    row.estimate = estimate_moment(q).estimate;
    r.rows.push_back(row);
  }
  return finish(std::move(r));
}

SweepResult boundary_convergence_sweep(const Body& K, unsigned n, double k, const std::vector<double>& eps_list,
                                       const SweepOptions& opts) {
  check_eps(eps_list);
  check_sweep_dims(K, n);
  if (!K.is_polytope()) throw UsageError("boundary sweeps need a polytope base, not " + K.name());
  SweepResult r;
  r.mode = SampleMode::kBoundary;
  r.base = K;
  r.n = n;
  r.k = k;
  r.reference = opts.reference ? Reference{*opts.reference, 0.0, "user"}
                               : reference_moment(K, n, k, opts.samples, opts.seed ^ 0x9e3779b97f4a7c15ULL, opts.threads);
  for (double eps : eps_list) {
    MomentQuery q;
    q.body = lift_body(K, eps);
    q.n = n;
    q.k = k;
    q.mode = SampleMode::kBoundary;
    q.samples = opts.samples;
    q.seed = opts.seed;
    q.threads = opts.threads;
    const MomentEstimate m = estimate_moment(q);
    SweepRow row;
    row.eps = eps;
    row.estimate = m.estimate;
    row.mixture_weight = mixture_weight(K.without_fixed_point(), eps, m.random_points);
    const double N = static_cast<double>(m.estimate.samples);
    row.flat_fraction = static_cast<double>(m.all_flat) / N;
    row.flat_std_error = std::sqrt(row.mixture_weight * (1.0 - row.mixture_weight) / N);
    row.flat_within_3sigma = std::abs(row.flat_fraction - row.mixture_weight) <= 3.0 * row.flat_std_error;
    r.rows.push_back(row);
  }
  return finish(std::move(r));
}

nlohmann::json SweepResult::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j{{"eps", exact_double_string(row.eps)}, {"estimate", row.estimate.to_json()}};
    if (mode == SampleMode::kBoundary)
      j["mixture"] = {{"exact_weight", {{"value", row.mixture_weight}, {"std_error", 0.0}, {"method", "closed-form"}}},
                      {"empirical_all_flat", {{"mean", row.flat_fraction}, {"std_error", row.flat_std_error}}},
                      {"within_3sigma", row.flat_within_3sigma}};
    rows_j.push_back(j);
  }
  return {{"mode", to_string(mode)},
          {"body", base.to_json()},
          {"n", n},
          {"k", exact_double_string(k)},
          {"reference", {{"value", reference.value}, {"std_error", reference.std_error}, {"source", reference.source}}},
          {"rows", rows_j},
          {"converged", converged},
          {"within_noise", within_noise},
          {"verdict", verdict}};
}

std::string SweepResult::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "eps,mean,std_error,samples,reference";
  if (mode == SampleMode::kBoundary) out << ",mixture_weight,flat_fraction,flat_std_error";
  out << '\n';
  for (const auto& row : rows) {
    out << row.eps << ',' << row.estimate.mean << ',' << row.estimate.std_error << ',' << row.estimate.samples << ','
        << reference.value;
    if (mode == SampleMode::kBoundary)
      out << ',' << row.mixture_weight << ',' << row.flat_fraction << ',' << row.flat_std_error;
    out << '\n';
  }
  return out.str();
}

nlohmann::json EpsilonSearch::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"eps", exact_double_string(r.eps)}, {"K", r.k_estimate.to_json()}, {"L", r.l_estimate.to_json()}, {"z", approx_string(r.z)}});
  nlohmann::json j{{"rows", rows_j}, {"inconclusive", inconclusive}, {"containment_samples", containment_samples}};
  j["eps0"] = eps0 ? nlohmann::json(exact_double_string(*eps0)) : nlohmann::json(nullptr);
  return j;
}

EpsilonSearch find_epsilon0(const Body& K, const Body& L, unsigned n, double k, const std::vector<double>& eps_list,
                            const SweepOptions& opts) {
  check_eps(eps_list);
  if (K.dim() != L.dim()) throw UsageError("K and L must have the same dimension");
  if (n < 2 || n > K.dim() + 1)
    throw UsageError("find_epsilon0 needs 2 <= n <= dim+1 before lifting, got n=" + std::to_string(n) +
                     " with dim=" + std::to_string(K.dim()));
  EpsilonSearch out;
  out.containment_samples = 10000;
  RngStream rng(opts.seed, 0xC0A7A1BULL);
  for (std::uint64_t i = 0; i < out.containment_samples; ++i)
    if (!L.contains(sample_uniform(K, rng))) throw UsageError("K is not contained in L (sampled point outside L)");
  if (K.fixed_point() && !L.contains(*K.fixed_point())) throw UsageError("fixed point of K lies outside L");

  for (double eps : eps_list) {
    MomentQuery q;
    q.n = n;
    q.k = k;
    q.samples = opts.samples;
    q.seed = opts.seed;
    q.threads = opts.threads;
    q.body = lift_body(K, eps);
    const auto ek = estimate_moment(q).estimate;
    q.body = lift_body(L, eps);
    const auto el = estimate_moment(q).estimate;
    const double sigma = std::hypot(ek.std_error, el.std_error);
    const double z = sigma > 0 ? (ek.mean - el.mean) / sigma : 0.0;
    out.rows.push_back({eps, ek, el, z});
    if (z >= 3.0 && (!out.eps0 || eps > *out.eps0)) out.eps0 = eps;
  }
  out.inconclusive = !out.eps0;
  return out;
}

}  // namespace rsm
