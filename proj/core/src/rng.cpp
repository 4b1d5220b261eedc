#include "aelab/rng.hpp"

namespace aelab {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeedSpec derive(const SeedSpec& parent, std::uint64_t child) {
  return {parent.master_seed, splitmix64(parent.stream_id ^ splitmix64(child ^ 0x6a09e667f3bcc908ULL))};
}

Rng::Rng(SeedSpec seed)
    : key_(splitmix64(seed.master_seed) ^ splitmix64(seed.stream_id + 0x3c6ef372fe94f82bULL)) {}

Rng::result_type Rng::operator()() {
  ++counter_;
  std::uint64_t z = key_ + counter_ * kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::normal() { return normal_(*this); }

double Rng::rademacher() { return ((*this)() >> 63) ? 1.0 : -1.0; }

bool Rng::bernoulli(double p) { return uniform() < p; }

}  // namespace aelab
