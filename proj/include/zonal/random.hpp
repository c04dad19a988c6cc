#ifndef ZONAL_RANDOM_HPP
#define ZONAL_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace zonal {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Seeded random stream with an explicit substream rule.
///
/// Substream k of a stream seeded with s is an independent stream seeded
/// with splitmix64(s + (k+1)); parallel loops draw substream(i) for point i,
/// so results do not depend on chunking or thread count.
///
/// Distributions are implemented here (not via <random> distributions) so a
/// given engine state always yields the same value sequence.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), eng_(detail::splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  RandomStream substream(std::uint64_t index) const {
    return RandomStream(detail::splitmix64(seed_ + (index + 1)));
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal, Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double c = std::cos(2.0 * M_PI * u2), s = std::sin(2.0 * M_PI * u2);
    spare_ = r * s;
    have_spare_ = true;
    return r * c;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace zonal

#endif
