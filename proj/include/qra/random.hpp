#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qra {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

/// Seeded random stream. Uniform draws use the top 53 bits of one
/// mt19937_64 output, so uniform sequences are reproducible across
/// standard libraries; binomial draws use std::binomial_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int binomial(int trials, double probability);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Labeled, pairwise-independent substreams derived from one master seed.
///
/// seed(label, s, t) = splitmix64(master ^ fnv1a64(label) ^ splitmix64(s + 1) ^ splitmix64((t + 1) << 32))
/// The same (master, label, s, t) always yields the same stream.
class SeedScheme {
 public:
  explicit SeedScheme(std::uint64_t master) : master_(master) {}

  std::uint64_t master() const { return master_; }
  std::uint64_t derive(std::string_view label, std::uint64_t seed_index,
                       std::uint64_t trial_index) const;
  Rng stream(std::string_view label, std::uint64_t seed_index, std::uint64_t trial_index) const {
    return Rng(derive(label, seed_index, trial_index));
  }

 private:
  std::uint64_t master_;
};

namespace streams {
inline constexpr std::string_view kKeys = "keys";
inline constexpr std::string_view kPlaintextsTrain = "plaintexts_train";
inline constexpr std::string_view kPlaintextsTest = "plaintexts_test";
inline constexpr std::string_view kNoiseProfileA = "noise_profile_a";
inline constexpr std::string_view kNoiseProfileB = "noise_profile_b";
inline constexpr std::string_view kShotNoise = "shot_noise";
}  // namespace streams

}  // namespace qra
