#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slm {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-run seed hash(master, run_index); independent of scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(run_index + 0x632be59bd9b4e019ULL));
}

/// Seeded Mersenne Twister with the handful of draws the simulator needs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(engine_); }
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
  }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace slm
