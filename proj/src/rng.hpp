#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace bcseg {

// Sampling helpers built directly on the mt19937_64 word stream. The standard
// distributions are implementation-defined, so anything that must reproduce
// bit-for-bit is spelled out here instead.

inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

// [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller pairs; the sine mate is cached between calls.
class NormalSampler {
 public:
  double operator()(std::mt19937_64& rng) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
    const double u2 = uniform_unit(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Uniform k-subset of [0, n) by reservoir (Algorithm R); O(k) memory.
inline std::vector<std::size_t> sample_indices(std::mt19937_64& rng,
                                               std::size_t n, std::size_t k) {
  if (k >= n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  std::vector<std::size_t> reservoir(k);
  for (std::size_t i = 0; i < k; ++i) reservoir[i] = i;
  for (std::size_t i = k; i < n; ++i) {
    const std::size_t j =
        static_cast<std::size_t>(uniform_index(rng, static_cast<std::uint64_t>(i) + 1));
    if (j < k) reservoir[j] = i;
  }
  return reservoir;
}

template <typename T>
void shuffle_values(std::mt19937_64& rng, std::vector<T>& values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace bcseg
