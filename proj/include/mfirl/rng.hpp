#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace mfirl {

/// Deterministic random source. All sampling goes through this wrapper so
/// that a (seed, call sequence) pair fully determines every draw; we do not
/// use std::*_distribution because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    // Lemire multiply-shift; bias-free enough for any n we use and fully
    // deterministic across platforms.
    const auto wide = static_cast<unsigned __int128>(gen_()) *
                      static_cast<unsigned __int128>(n);
    return static_cast<int>(wide >> 64);
  }

  /// Draws an index from an (unnormalized is not allowed) probability vector.
  int sample(std::span<const double> probs) {
    const double u = uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    if (probs.empty()) throw std::invalid_argument("sample: empty distribution");
    return static_cast<int>(probs.size() - 1);
  }

 private:
  std::mt19937_64 gen_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based seed split: the derived seed depends only on (master, a, b),
/// so adding sweep points never perturbs the streams of existing ones.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b) {
  std::uint64_t h = detail::splitmix64(master);
  h = detail::splitmix64(h ^ (0xA0761D6478BD642FULL * (a + 1)));
  h = detail::splitmix64(h ^ (0xE7037ED1A0B428DBULL * (b + 1)));
  return h;
}

}  // namespace mfirl
