#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <random>

namespace aelab {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  auto operator<=>(const SeedSpec&) const = default;
};

/// Child stream of `parent`; distinct children give unrelated streams.
SeedSpec derive(const SeedSpec& parent, std::uint64_t child);

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based generator: output i is a SplitMix64 finalizer applied to
/// key + i * golden, with the key mixed from (master_seed, stream_id).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(SeedSpec seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  double rademacher();
  bool bernoulli(double p);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

}  // namespace aelab
