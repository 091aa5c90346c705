#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ccnsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Deterministic random stream. Distributions are implemented here rather
/// than with <random> adaptors so that draws are identical on every
/// platform and standard library.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double mean) {
    return -mean * std::log1p(-uniform01());
  }

  bool chance(double p) { return uniform01() < p; }

  void fill_bytes(std::uint8_t* p, std::size_t n) {
    std::size_t i = 0;
    while (i < n) {
      std::uint64_t w = next_u64();
      for (int b = 0; b < 8 && i < n; ++b, ++i) {
        p[i] = static_cast<std::uint8_t>(w >> (8 * b));
      }
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// Named substream of a master seed. Distinct names give streams that do not
/// perturb each other when one consumer draws more or less.
inline Rng substream(std::uint64_t master_seed, std::string_view name) {
  return Rng(splitmix64(master_seed ^ fnv1a64(name)));
}

/// Zipf sampler over ranks 0..n-1, P(rank) proportional to 1/(rank+1)^alpha.
class ZipfSampler {
 public:
  ZipfSampler() = default;
  ZipfSampler(std::size_t n, double alpha) {
    cdf_.reserve(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), alpha);
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }

  std::size_t sample(Rng& rng) const {
    double u = rng.uniform01();
    std::size_t lo = 0, hi = cdf_.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf_[mid - 1] <= u) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace ccnsim
