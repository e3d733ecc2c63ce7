#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace specfun {

// Independent stream for case `index` of a suite seeded with `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  std::vector<double> normal_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace specfun
