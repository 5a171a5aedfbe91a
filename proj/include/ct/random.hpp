#ifndef CT_RANDOM_HPP
#define CT_RANDOM_HPP

#include <cstdint>
#include <random>

#include "ct/lattice.hpp"

namespace ct {

// Seeded generator for every "generic" choice. Values are derived from the raw 64-bit
// output only, so the same seed gives the same draws on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform-ish integer in [lo, hi].
  Int uniform(Int lo, Int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<Int>(engine_() % span);
  }

  /// Rational in [lo, hi] with a denominator of at least 10^4.
  Rational rational(Int lo, Int hi) {
    Int den = uniform(10007, 19997);
    Int num = uniform(lo * den, hi * den);
    return make_rational(num, den);
  }

  RatVector rational_vector(Index dim, Int lo, Int hi) {
    RatVector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = rational(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ct

#endif  // CT_RANDOM_HPP
