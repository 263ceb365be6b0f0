#pragma once

#include <cstdint>

namespace nulllab::rng {

// splitmix64 step; also the basis of stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent child stream seed from (seed, index).
// Used for per-repetition and per-cell streams: the mapping is pure, so
// parallel and sequential schedules consume identical randomness.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index);

// xoshiro256++ with splitmix-expanded seeding. Value semantics; one engine
// per Monte-Carlo stream, never shared across threads.
class Engine {
 public:
  explicit Engine(std::uint64_t seed);

  std::uint64_t next();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; the companion draw is cached so a pair
  // of uniforms yields two normals.
  double normal();

  // Gamma(shape, scale) by Marsaglia-Tsang squeeze (with the power boost
  // for shape < 1).
  double gamma(double shape, double scale);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace nulllab::rng
