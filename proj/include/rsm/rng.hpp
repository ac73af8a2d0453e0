#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rsm {

// Reproducible stream: mt19937_64 seeded through seed_seq{seed lo/hi, stream lo/hi}.
// Uniforms use the top 53 bits; normals are Box-Muller pairs. Every transform
// is written out here so the sequence does not depend on the standard library's
// distribution implementations.
class RngStream {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+seed_seq/u53/box-muller/v1";

  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next() { return engine_(); }
  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // (0, 1]
  double uniform_pos() { return 1.0 - uniform(); }
  double exponential() { return -std::log(uniform_pos()); }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t seed_, stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rsm
