#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace netdrift {

// SplitMix64 finalizer; bijective on 64-bit values.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the independent stream addressed by (master_seed, index). Streams
// are index-addressed: stream k is the same regardless of which other
// indices are ever instantiated.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(~index));
}

// Random stream with fully specified draw semantics: the engine is
// std::mt19937_64 (bit-reproducible per the standard), bounded draws use
// rejection sampling and doubles take the top 53 bits, so no result depends
// on a library's distribution internals.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(derive_stream_seed(master_seed, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw from {0, ..., n-1}; n must be >= 1.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  int uniform_int(int n) { return static_cast<int>(uniform_index(static_cast<std::uint64_t>(n))); }

  // Uniform on [0, 1).
  double uniform_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_double() < p; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace netdrift
