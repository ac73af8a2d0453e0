#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsm/geometry.hpp"
#include "rsm/rng.hpp"

namespace rsm {

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string rng = RngStream::kAlgorithm;

  nlohmann::json to_json() const;
};

// Uniform point in the body.
Point sample_uniform(const Body& b, RngStream& rng);

// Uniform point on the boundary of a polytope, faces drawn by measure.
class BoundarySampler {
 public:
  explicit BoundarySampler(const Body& b);
  struct Draw {
    Point x;
    // True when the point lies on one of the two caps of a product body.
    bool flat_cap = false;
  };
  Draw sample(RngStream& rng) const;
  const std::vector<Face>& faces() const { return faces_; }
  double surface() const { return total_; }

 private:
  std::vector<Face> faces_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

Point sample_boundary_uniform(const Body& b, RngStream& rng);

enum class SampleMode { kInterior, kBoundary };
std::string to_string(SampleMode m);

// Fixed-size chunks, chunk i drawing from RngStream(seed, i), and chunk
// statistics merged in chunk order: results do not depend on `threads`.
inline constexpr std::uint64_t kChunkSize = 8192;

struct MomentQuery {
  Body body = Body::triangle_t2();
  unsigned n = 2;
  double k = 1.0;
  // Replaces one random vertex; falls back to body.fixed_point() when unset.
  std::optional<Point> fixed;
  SampleMode mode = SampleMode::kInterior;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct MomentEstimate {
  EstimateWithError estimate;
  // Boundary mode: trials where every random vertex landed on a flat cap.
  std::uint64_t all_flat = 0;
  unsigned random_points = 0;
};

// E V^k for the (n-1)-simplex on n points; UsageError unless 2 <= n <= d+1
// and the fixed point (if any) lies on the boundary.
MomentEstimate estimate_moment(const MomentQuery& q);
EstimateWithError estimate_moment(const Body& body, unsigned n, double k, const std::optional<Point>& fixed,
                                  std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

// E (sum over the n facets of their (n-2)-volumes)^k; n >= 3.
EstimateWithError estimate_surface_moment(const Body& body, unsigned n, std::uint64_t samples, std::uint64_t seed,
                                          unsigned threads = 1, double k = 1.0);
// Sum of the facet volumes of one simplex, the quantity averaged above.
double simplex_surface(std::span<const Point> pts);

// Generic driver: mean and standard error of f over `samples` independent draws.
// f may also raise an indicator, counted in the second return member.
struct ChunkedResult {
  EstimateWithError estimate;
  std::uint64_t flagged = 0;
};
ChunkedResult run_chunked(std::uint64_t samples, std::uint64_t seed, unsigned threads,
                          const std::function<double(RngStream&, bool& flag)>& f);

}  // namespace rsm
