#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace mrceval {

/// Counter-based 64-bit generator.
///
/// Output k (k = 0, 1, ...) of stream s under seed x is
///
///   key   = mix64(x + 0x9E3779B97F4A7C15 * (s + 1))
///   out_k = mix64(key + 0x9E3779B97F4A7C15 * (k + 1))
///
/// where mix64 is the SplitMix64 finalizer. Any output can be computed
/// independently of the others, so rounds keyed by stream index give the
/// same numbers whatever order or thread they run on.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform integer in [0, bound) by rejection: draws are redrawn while
  /// they fall at or above the largest multiple of `bound` below 2^64,
  /// then reduced modulo `bound`. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

/// n indices drawn uniformly with replacement from [0, n), stream `stream`.
std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::uint64_t stream);

/// k distinct indices from [0, n) by a partial Fisher-Yates shuffle.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::uint64_t seed, std::uint64_t stream);

}  // namespace mrceval
