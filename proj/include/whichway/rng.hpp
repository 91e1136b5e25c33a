#ifndef WHICHWAY_RNG_HPP
#define WHICHWAY_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace whichway {

/// Seeded random stream with deterministic, platform-independent output.
///
/// Wraps std::mt19937_64 (fully specified by the standard) and derives
/// uniform and Gaussian variates through fixed arithmetic, so identical
/// seeds produce bit-identical sequences everywhere. Child streams for
/// independent tasks are derived from the original seed, never from the
/// evolving state, so results do not depend on scheduling order.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal variate (Marsaglia polar method, pair-cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo bias is irrelevant for n << 2^64 here, but
    // keep it exact anyway.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  /// Independent child stream identified by (a, b); derived from the
  /// original seed so sibling streams are scheduling-independent.
  SplitRng derive(std::uint64_t a, std::uint64_t b = 0) const {
    std::uint64_t x = seed_;
    x = mix(x ^ mix(a + 0x9e3779b97f4a7c15ULL));
    x = mix(x ^ mix(b + 0xbf58476d1ce4e5b9ULL));
    return SplitRng(x);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace whichway

#endif
