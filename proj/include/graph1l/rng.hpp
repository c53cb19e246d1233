#ifndef GRAPH1L_RNG_HPP
#define GRAPH1L_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace graph1l {

// Seedable generator with hand-rolled distributions. mt19937_64 output is
// pinned by the standard; std::*_distribution is not, so uniform/normal
// draws are derived here to keep streams identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Derives a child seed, e.g. per-trial streams from a base seed.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t index) {
    return splitmix(base + 0x9E3779B97F4A7C15ULL * (index + 1));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, bound) without modulo bias.
  std::uint64_t uniform_u64(std::uint64_t bound) {
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform_double(double lo, double hi) { return lo + (hi - lo) * uniform_double(); }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_double();
    while (u1 <= 0.0) u1 = uniform_double();
    const double u2 = uniform_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::vector<double> normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  // Fisher-Yates with the portable uniform draw.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_u64(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace graph1l

#endif
