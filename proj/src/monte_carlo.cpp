#include "rsm/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rsm/errors.hpp"

namespace rsm {

namespace {

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t flagged = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  // Chan et al. pairwise update.
  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double tot = na + nb;
    mean += d * nb / tot;
    m2 += o.m2 + d * d * na * nb / tot;
    n += o.n;
    flagged += o.flagged;
  }
};

Point sample_simplex_face(const std::vector<Point>& verts, RngStream& rng) {
  std::vector<double> w(verts.size());
  double sum = 0.0;
  for (auto& x : w) sum += (x = rng.exponential());
  Point p(verts[0].size(), 0.0);
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t c = 0; c < p.size(); ++c) p[c] += w[i] / sum * verts[i][c];
  return p;
}

Point sample_face(const Face& f, RngStream& rng) {
  switch (f.kind) {
    case Face::Kind::kSimplex:
      return sample_simplex_face(f.vertices, rng);
    case Face::Kind::kBox: {
      Point p(f.lo.size());
      for (std::size_t c = 0; c < p.size(); ++c) p[c] = f.lo[c] == f.hi[c] ? f.lo[c] : f.lo[c] + (f.hi[c] - f.lo[c]) * rng.uniform();
      return p;
    }
    case Face::Kind::kCap: {
      Point p = sample_uniform(*f.body, rng);
      p.push_back(f.level);
      return p;
    }
    case Face::Kind::kExtruded: {
      Point p = sample_face(*f.inner, rng);
      p.push_back(f.height * rng.uniform());
      return p;
    }
  }
  throw std::logic_error("unknown face kind");
}

void check_fixed(const Body& body, const std::optional<Point>& fixed) {
  if (!fixed) return;
  if (fixed->size() != body.dim())
    throw UsageError("fixed point has dimension " + std::to_string(fixed->size()) + ", body " + body.name() +
                     " has dimension " + std::to_string(body.dim()));
  if (!body.on_boundary(*fixed)) throw UsageError("fixed point is not on the boundary of " + body.name());
}

}  // namespace

nlohmann::json EstimateWithError::to_json() const {
  return {{"mean", mean}, {"std_error", std_error}, {"samples", samples}, {"seed", seed}, {"rng", rng}};
}

Point sample_uniform(const Body& b, RngStream& rng) {
  const unsigned d = b.dim();
  switch (b.kind()) {
    case BodyKind::kStandardSimplex: {
      std::vector<double> e(d + 1);
      double sum = 0.0;
      for (auto& x : e) sum += (x = rng.exponential());
      Point p(d);
      for (unsigned i = 0; i < d; ++i) p[i] = e[i] / sum;
      return p;
    }
    case BodyKind::kCube: {
      Point p(d);
      for (auto& x : p) x = b.side() * rng.uniform();
      return p;
    }
    case BodyKind::kBall:
    case BodyKind::kHalfball: {
      Point p(d);
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (auto& x : p) {
          x = rng.normal();
          norm2 += x * x;
        }
      } while (norm2 == 0.0);
      const double scale = std::pow(rng.uniform(), 1.0 / d) / std::sqrt(norm2);
      for (auto& x : p) x *= scale;
      if (b.kind() == BodyKind::kHalfball && p[d - 1] < 0) p[d - 1] = -p[d - 1];
      return p;
    }
    case BodyKind::kProduct: {
      Point p = sample_uniform(b.base(), rng);
      p.push_back(b.height() * rng.uniform());
      return p;
    }
  }
  throw UsageError("unsupported body");
}

BoundarySampler::BoundarySampler(const Body& b) : faces_(boundary_faces(b)) {
  for (const auto& f : faces_) cumulative_.push_back(total_ += f.measure);
}

BoundarySampler::Draw BoundarySampler::sample(RngStream& rng) const {
  const double u = rng.uniform() * total_;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
  i = std::min(i, faces_.size() - 1);
  return {sample_face(faces_[i], rng), faces_[i].flat_cap};
}

Point sample_boundary_uniform(const Body& b, RngStream& rng) { return BoundarySampler(b).sample(rng).x; }

std::string to_string(SampleMode m) { return m == SampleMode::kInterior ? "interior" : "boundary"; }

ChunkedResult run_chunked(std::uint64_t samples, std::uint64_t seed, unsigned threads,
                          const std::function<double(RngStream&, bool&)>& f) {
  if (samples < 2) throw UsageError("need at least 2 samples");
  const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<Welford> stats(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto worker = [&] {
    try {
      for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) {
        RngStream rng(seed, c);
        const std::uint64_t count = std::min(kChunkSize, samples - c * kChunkSize);
        Welford& w = stats[c];
        for (std::uint64_t i = 0; i < count; ++i) {
          bool flag = false;
          w.add(f(rng, flag));
          if (flag) ++w.flagged;
        }
      }
    } catch (...) {
      std::lock_guard lock(fail_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(chunks, 1024))));
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> ts;
    for (unsigned t = 0; t < pool; ++t) ts.emplace_back(worker);
    for (auto& t : ts) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  Welford total;
  for (const auto& w : stats) total.merge(w);
  ChunkedResult out;
  out.estimate.mean = total.mean;
  out.estimate.std_error = std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n));
  out.estimate.samples = total.n;
  out.estimate.seed = seed;
  out.flagged = total.flagged;
  return out;
}

MomentEstimate estimate_moment(const MomentQuery& q) {
  const Body& body = q.body;
  const unsigned d = body.dim();
  if (q.n < 2 || q.n > d + 1)
    throw UsageError("need 2 <= n <= d+1 points, got n=" + std::to_string(q.n) + " in dimension " + std::to_string(d));
  if (!(q.k >= 0) || !std::isfinite(q.k)) throw UsageError("moment order must be finite and >= 0");
  const std::optional<Point> fixed = q.fixed ? q.fixed : body.fixed_point();
  check_fixed(body, fixed);
  const unsigned random_points = q.n - (fixed ? 1 : 0);
  std::optional<BoundarySampler> bs;
  if (q.mode == SampleMode::kBoundary) bs.emplace(body.without_fixed_point());

  auto f = [&](RngStream& rng, bool& flag) {
    std::vector<Point> pts;
    pts.reserve(q.n);
    if (fixed) pts.push_back(*fixed);
    bool all_flat = true;
    for (unsigned i = 0; i < random_points; ++i) {
      if (bs) {
        auto draw = bs->sample(rng);
        all_flat &= draw.flat_cap;
        pts.push_back(std::move(draw.x));
      } else {
        pts.push_back(sample_uniform(body, rng));
      }
    }
    flag = bs && all_flat;
    const double v = gram_volume(pts);
    return q.k == 1.0 ? v : std::pow(v, q.k);
  };
  const ChunkedResult r = run_chunked(q.samples, q.seed, q.threads, f);
  return {r.estimate, r.flagged, random_points};
}

EstimateWithError estimate_moment(const Body& body, unsigned n, double k, const std::optional<Point>& fixed,
                                  std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  MomentQuery q{body.without_fixed_point(), n, k, fixed, SampleMode::kInterior, samples, seed, threads};
  return estimate_moment(q).estimate;
}

double simplex_surface(std::span<const Point> pts) {
  double sum = 0.0;
  std::vector<Point> facet;
  for (std::size_t skip = 0; skip < pts.size(); ++skip) {
    facet.clear();
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != skip) facet.push_back(pts[i]);
    sum += gram_volume(facet);
  }
  return sum;
}

EstimateWithError estimate_surface_moment(const Body& body, unsigned n, std::uint64_t samples, std::uint64_t seed,
                                          unsigned threads, double k) {
  const unsigned d = body.dim();
  if (n < 3) throw UsageError("surface moments need n >= 3 (facets of a segment are points)");
  if (n > d + 1) throw UsageError("need n <= d+1 points, got n=" + std::to_string(n) + " in dimension " + std::to_string(d));
  auto f = [&](RngStream& rng, bool&) {
    std::vector<Point> pts;
    for (unsigned i = 0; i < n; ++i) pts.push_back(sample_uniform(body, rng));
    const double s = simplex_surface(pts);
    return k == 1.0 ? s : std::pow(s, k);
  };
  return run_chunked(samples, seed, threads, f).estimate;
}

}  // namespace rsm
