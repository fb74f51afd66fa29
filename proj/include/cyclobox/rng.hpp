#pragma once

#include <cstdint>

namespace cyclobox {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

}  // namespace detail

/**
 * Counter-based stream: word k of stream (seed, stream_id) is a pure function
 * of the triple (seed, stream_id, k). Samplers key one stream per sample
 * index, so results do not depend on how indices are split across workers.
 */
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(detail::mix64(detail::mix64(seed ^ 0x5851F42D4C957F2DULL) +
                           detail::kGolden * (stream_id + 1))) {}

  std::uint64_t next() {
    ++counter_;
    return detail::mix64(key_ + detail::kGolden * counter_);
  }

  /// Unbiased integer in [0, bound), bound >= 1 (Lemire's multiply-shift with
  /// rejection).
  std::uint64_t below(std::uint64_t bound) {
    auto wide = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(wide);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        wide = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(wide);
      }
    }
    return static_cast<std::uint64_t>(wide >> 64U);
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11U) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cyclobox
