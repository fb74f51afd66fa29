#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cyclobox/cyclotomic.hpp"
#include "cyclobox/parallel.hpp"
#include "cyclobox/rng.hpp"

namespace cyclobox {

struct SamplerConfig {
  std::uint64_t seed = 1;
  std::uint64_t sample_count = 10000;
  unsigned worker_count = 1;
  ProgressFn progress;  // optional, called from the coordinating thread

  WorkerPlan plan() const { return {worker_count, progress}; }

  void validate() const {
    if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
    if (worker_count == 0) throw std::invalid_argument("worker_count must be positive");
  }
};

/// Uniform vertex of V(p,N): p-1 independent sign bits, 64 per draw.
inline CyclotomicInt sample_vertex(const BoxSpec& box, SampleStream& rng) {
  const Integer n = box.half_width();
  const Integer minus_n = -n;
  std::vector<Integer> c(box.p() - 1);
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j % 64 == 0) bits = rng.next();
    c[j] = (bits & 1U) ? n : minus_n;
    bits >>= 1U;
  }
  return CyclotomicInt(box.p(), std::move(c));
}

/// Uniform point of B(p,N): coefficients i.i.d. on {-N, ..., N}.
inline CyclotomicInt sample_box_point(const BoxSpec& box, SampleStream& rng) {
  const auto n = static_cast<std::int64_t>(box.N());
  std::vector<Integer> c(box.p() - 1);
  for (auto& v : c) v = static_cast<long>(rng.between(-n, n));
  return CyclotomicInt(box.p(), std::move(c));
}

}  // namespace cyclobox
