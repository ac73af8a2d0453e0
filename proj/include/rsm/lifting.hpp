#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsm/geometry.hpp"
#include "rsm/monte_carlo.hpp"

namespace rsm {

// K x [0, eps]; a fixed boundary point p of K becomes (p, 0).
Body lift_body(const Body& K, double eps);

struct Reference {
  double value = 0.0;
  double std_error = 0.0;  // 0 for closed forms
  std::string source;      // "closed-form", "exact", "monte-carlo" or "user"
};

// E V^k_{K[n]} from a closed form when one is available (triangles for n = 2,
// T3 for n = 3 and even k), otherwise a Monte Carlo estimate.
Reference reference_moment(const Body& K, unsigned n, double k, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads);

struct SweepOptions {
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<double> reference;
};

struct SweepRow {
  double eps = 0.0;
  EstimateWithError estimate;
  // Boundary sweeps only.
  double mixture_weight = 0.0;
  double flat_fraction = 0.0;
  double flat_std_error = 0.0;
  bool flat_within_3sigma = false;
};

struct SweepResult {
  SampleMode mode = SampleMode::kInterior;
  Body base = Body::triangle_t2();
  unsigned n = 2;
  double k = 1.0;
  Reference reference;
  std::vector<SweepRow> rows;
  // |est_last - ref| < |est_first - ref| + 6 sigma
  bool converged = false;
  // |est_last - ref| <= 3 sigma
  bool within_noise = false;
  std::string verdict;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// n <= dim(K) + 2; eps_list positive and strictly decreasing.
SweepResult interior_convergence_sweep(const Body& K, unsigned n, double k, const std::vector<double>& eps_list,
                                       const SweepOptions& opts);
// Boundary-uniform vertices on K x [0, eps]; K must be a polytope.
SweepResult boundary_convergence_sweep(const Body& K, unsigned n, double k, const std::vector<double>& eps_list,
                                       const SweepOptions& opts);

// (2 vol K)^m / (2 vol K + S(K) eps)^m for m random vertices.
double mixture_weight(const Body& K, double eps, unsigned random_points);

struct EpsilonSearch {
  std::optional<double> eps0;
  bool inconclusive = true;
  struct Row {
    double eps;
    EstimateWithError k_estimate;
    EstimateWithError l_estimate;
    double z;  // (k - l) / combined sigma
  };
  std::vector<Row> rows;
  std::uint64_t containment_samples = 0;

  nlohmann::json to_json() const;
};

// Largest eps with E V^k_{K_eps[n]} above E V^k_{L_eps[n]} by at least 3 combined
// sigma. K and L are configurations: a body plus an optional fixed point.
// UsageError if sampled points of K leave L or n > dim + 1.
EpsilonSearch find_epsilon0(const Body& K, const Body& L, unsigned n, double k, const std::vector<double>& eps_list,
                            const SweepOptions& opts);

}  // namespace rsm
