#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cyclobox/concentration.hpp"
#include "cyclobox/cyclotomic.hpp"
#include "cyclobox/parallel.hpp"
#include "cyclobox/sampling.hpp"

namespace cyclobox {

/// b is visible from a when no other lattice point of the box lies on the
/// segment between them; equivalently the difference vector is primitive.
inline bool is_visible(const CyclotomicInt& a, const CyclotomicInt& b) {
  require_same_field(a, b);
  if (a == b) throw DegenerateError("is_visible: identical points");
  Integer g = 0;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  Integer diff;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    diff = cb[i] - ca[i];
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), diff.get_mpz_t());
    if (g == 1) return true;
  }
  return g == 1;
}

inline bool pairwise_visible(const std::vector<CyclotomicInt>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j] || !is_visible(pts[i], pts[j])) return false;
    }
  }
  return true;
}

struct SelfVisibleSample {
  std::vector<CyclotomicInt> points;
  std::uint64_t attempts;
};

/// Rejection sampling of K uniform box points until they are pairwise
/// visible; the accepted tuple is uniform over self-visible K-tuples.
inline SelfVisibleSample sample_self_visible_polytope(const BoxSpec& box, std::uint32_t K,
                                                      SampleStream& rng, std::uint64_t max_attempts) {
  if (K < 2) throw std::invalid_argument("sample_self_visible_polytope: K must be >= 2");
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    std::vector<CyclotomicInt> pts;
    pts.reserve(K);
    for (std::uint32_t k = 0; k < K; ++k) pts.push_back(sample_box_point(box, rng));
    if (pairwise_visible(pts)) return {std::move(pts), attempt};
  }
  throw GuardError("sample_self_visible_polytope: no self-visible tuple after " +
                   std::to_string(max_attempts) + " attempts (rejection rate 1)");
}

struct VisibilityReport {
  std::uint32_t p = 0;
  std::uint64_t N = 0;
  std::uint32_t K = 0;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t attempts = 0;
  double visible_fraction = 0.0;        // accepted tuples / attempts
  double proportion_near_center = 0.0;  // max pairwise |d - 1/sqrt 6| <= eps
  double center = 1.0 / std::sqrt(6.0);
  double epsilon = 0.0;
  double target = 0.0;                  // 1 - eps
  double mean_dist_sq = 0.0;            // over all accepted pairs
  double n_over_p = 0.0;
  bool regime_warning = false;          // N/p < 10
  bool pass = false;

  std::string verdict() const { return pass ? "pass" : "fail"; }
};

inline constexpr std::uint64_t kDefaultMaxAttempts = 1000;

/**
 * Samples self-visible K-tuples of box points and reports the proportion
 * whose pairwise normalized distances all lie within eps of 1/sqrt(6),
 * against the target 1 - eps. Interval membership is exact: the squared
 * center is 1/6 and eps is taken at its exact binary value.
 */
inline VisibilityReport visibility_concentration_report(const BoxSpec& box, std::uint32_t K, double eps,
                                                        const SamplerConfig& cfg,
                                                        std::uint64_t max_attempts = kDefaultMaxAttempts) {
  if (K < 2) throw std::invalid_argument("visibility_concentration_report: K must be >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("visibility_concentration_report: eps must be > 0");
  cfg.validate();
  const IntervalSpec interval(ExactRational(Integer(1), Integer(6)), ExactRational::from_double(eps));

  struct Outcome {
    char near;
    std::uint64_t attempts;
    double sum_dist_sq;
  };
  const auto outcomes = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) {
    SampleStream rng(cfg.seed, i);
    const auto s = sample_self_visible_polytope(box, K, rng, max_attempts);
    Outcome o{1, s.attempts, 0.0};
    for (std::uint32_t a = 0; a < K; ++a) {
      for (std::uint32_t b = a + 1; b < K; ++b) {
        const auto d2 = normalized_dist_sq(s.points[a], s.points[b], box);
        o.sum_dist_sq += d2.to_double();
        if (!within_sqrt_interval(d2, interval)) o.near = 0;
      }
    }
    return o;
  });

  VisibilityReport r;
  r.p = box.p();
  r.N = box.N();
  r.K = K;
  r.seed = cfg.seed;
  r.sample_count = outcomes.size();
  r.epsilon = eps;
  r.target = 1.0 - eps;
  std::uint64_t near = 0;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    near += o.near ? 1 : 0;
    r.attempts += o.attempts;
    sum += o.sum_dist_sq;
  }
  const double pairs_per_tuple = static_cast<double>(K) * (K - 1) / 2.0;
  r.visible_fraction = static_cast<double>(r.sample_count) / static_cast<double>(r.attempts);
  r.proportion_near_center = static_cast<double>(near) / static_cast<double>(r.sample_count);
  r.mean_dist_sq = sum / (pairs_per_tuple * static_cast<double>(r.sample_count));
  r.n_over_p = static_cast<double>(box.N()) / static_cast<double>(box.p());
  r.regime_warning = r.n_over_p < 10.0;
  r.pass = r.proportion_near_center >= r.target;
  return r;
}

/// Monte Carlo mean of d^2 between independent uniform box points, exact:
/// the integer distance sum over sample_count pairs divided by count * D^2.
inline ExactRational sample_mean_box_pair_dist_sq(const BoxSpec& box, const SamplerConfig& cfg) {
  cfg.validate();
  const auto dists = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) {
    SampleStream rng(cfg.seed, i);
    const auto a = sample_box_point(box, rng);
    const auto b = sample_box_point(box, rng);
    return dist_sq(a, b);
  });
  Integer sum = 0;
  for (const auto& d : dists) sum += d;
  return ExactRational(sum, Integer(static_cast<unsigned long>(cfg.sample_count)) * diameter_sq(box));
}

}  // namespace cyclobox
