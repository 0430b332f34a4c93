#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ewlab {

// splitmix64 finalizer; also used to fold several words into one seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash64(std::uint64_t a, std::uint64_t b = 0,
                            std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t h = mix64(a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ d);
  return h;
}

// Per-trajectory generator. mt19937_64 output is pinned by the standard,
// and we convert to doubles ourselves, so streams are identical across
// platforms and thread schedules.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // inverse-CDF draw over explicit probabilities, in index order
  int categorical(const std::vector<double>& probs) {
    const double u = uniform();
    double acc = 0.0;
    const int last = static_cast<int>(probs.size()) - 1;
    for (int k = 0; k < last; ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return last;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ewlab
