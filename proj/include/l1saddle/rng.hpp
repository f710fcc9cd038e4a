#pragma once

#include <cstdint>
#include <limits>

namespace l1saddle {

// Counter-based generator: output n of stream s under seed k is
// mix(key(k, s) + n * golden). Two generators built from the same
// (seed, stream) pair produce the same sequence, which lets the lazy and dense
// stochastic solvers consume identical index draws.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  // Stream used for the (j, l, i, ell) index draws of the stochastic solvers.
  static constexpr std::uint64_t kDrawStream = 1;
  // Stream used by the subgradient baseline.
  static constexpr std::uint64_t kBaselineStream = 2;
  // Stream used by the synthetic data generator.
  static constexpr std::uint64_t kDataStream = 3;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGolden * counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace l1saddle
