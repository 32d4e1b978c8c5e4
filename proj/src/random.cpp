#include "qra/random.hpp"

namespace qra {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::binomial(int trials, double probability) {
  if (probability <= 0.0) return 0;
  if (probability >= 1.0) return trials;
  std::binomial_distribution<int> dist(trials, probability);
  return dist(engine_);
}

std::uint64_t SeedScheme::derive(std::string_view label, std::uint64_t seed_index,
                                 std::uint64_t trial_index) const {
  return splitmix64(master_ ^ fnv1a64(label) ^ splitmix64(seed_index + 1) ^
                    splitmix64((trial_index + 1) << 32));
}

}  // namespace qra
