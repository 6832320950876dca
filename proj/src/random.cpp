#include "mrceval/random.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace mrceval {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden * (stream + 1))) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return mix64(key_ + kGolden * counter_);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("CounterRng::below: bound must be positive");
  // 2^64 mod bound, computed without overflow.
  const std::uint64_t rem = (0 - bound) % bound;
  const std::uint64_t limit = 0 - rem;  // 0 means 2^64: every draw is accepted
  for (;;) {
    const std::uint64_t v = (*this)();
    if (limit == 0 || v < limit) return v % bound;
  }
}

std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = static_cast<std::size_t>(rng.below(n));
  return out;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::uint64_t seed, std::uint64_t stream) {
  if (k > n) throw std::invalid_argument("cannot sample more items than exist");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  CounterRng rng(seed, stream);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace mrceval
