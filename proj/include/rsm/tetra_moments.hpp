#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsm/mvpoly.hpp"
#include "rsm/rational.hpp"

namespace rsm {

// free: triangle on three uniform points of T3.
// fixed-centroid: two uniform points plus c3 = (1/3, 1/3, 1/3).
enum class TetraCase { kFree, kFixedCentroid };

std::string to_string(TetraCase c);
TetraCase parse_tetra_case(const std::string& text);

// D = det of the 2x2 Gram matrix of the two edge vectors, so that
// D = 4 * area^2. Variables x0..z2 (free) or x1..z2 (fixed, c3 substituted).
MVPoly build_gram_poly(TetraCase c);

enum class MomentMethod {
  // D^k = sum_j (-1)^j C(k,j) |u|^{2(k-j)} |v|^{2(k-j)} (u.v)^{2j}; every term is a
  // product of one factor per edge vector, so the integral splits per point.
  kSeparable,
  // Full expansion of D^k with mv_pow, then the monomial functional per term.
  kExpansion,
};

struct MomentOptions {
  MomentMethod method = MomentMethod::kSeparable;
  unsigned threads = 1;
  // Largest admissible k; 0 selects the built-in guard for (case, method).
  unsigned k_limit = 0;
};

// Largest k the resource guard admits by default.
unsigned default_k_limit(TetraCase c, MomentMethod m);

// E V^{2k}, exact. CapacityError (with a cost estimate) above the guard.
ExactRational even_moment(TetraCase c, unsigned k, const MomentOptions& opts = {});

// Linear functional p -> integral over T3^blocks of p, normalized by vol(T3)^blocks,
// for a polynomial whose variables are consecutive (x, y, z) blocks.
ExactRational average_over_T3_blocks(const MVPoly& p);

class MomentTable {
 public:
  MomentTable() = default;
  MomentTable(TetraCase c, std::vector<ExactRational> values);

  TetraCase tetra_case() const { return case_; }
  unsigned k_max() const { return static_cast<unsigned>(values_.size()) - 1; }
  const std::vector<ExactRational>& values() const { return values_; }
  // mu_{2k}; CapacityError when k > k_max.
  const ExactRational& at(unsigned k) const;
  bool strictly_decreasing() const;

  nlohmann::json to_json() const;
  static MomentTable from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& file) const;
  static MomentTable load(const std::filesystem::path& file);
  static std::filesystem::path default_file(const std::filesystem::path& dir, TetraCase c);

 private:
  TetraCase case_ = TetraCase::kFree;
  std::vector<ExactRational> values_{ExactRational(1)};
};

struct TableOptions {
  MomentOptions moments;
  // When set, existing entries are reloaded and the file is rewritten after every new k.
  std::optional<std::filesystem::path> checkpoint;
  std::function<void(unsigned k, const ExactRational& value)> on_entry;
};

MomentTable moment_table(TetraCase c, unsigned k_max, const TableOptions& opts = {});

}  // namespace rsm
