#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclobox/cyclotomic.hpp"
#include "cyclobox/moments.hpp"
#include "cyclobox/parallel.hpp"
#include "cyclobox/poles.hpp"
#include "cyclobox/sampling.hpp"

namespace cyclobox {

/// Interval [sqrt(center_sq) - epsilon, sqrt(center_sq) + epsilon] for a
/// normalized distance, described without square roots.
struct IntervalSpec {
  ExactRational center_sq;
  ExactRational epsilon;

  IntervalSpec(ExactRational c, ExactRational e) : center_sq(std::move(c)), epsilon(std::move(e)) {
    if (center_sq.sign() < 0) throw std::invalid_argument("IntervalSpec: center_sq must be >= 0");
    if (epsilon.sign() <= 0) throw std::invalid_argument("IntervalSpec: epsilon must be > 0");
  }
};

/// |sqrt(d_sq) - sqrt(A)| <= eps, decided exactly:
/// s = d_sq + A - eps^2 <= 0, or s^2 <= 4 A d_sq.
inline bool within_sqrt_interval(const ExactRational& d_sq, const IntervalSpec& spec) {
  if (d_sq.sign() < 0) throw std::invalid_argument("within_sqrt_interval: negative d_sq");
  const mpq_class& a = spec.center_sq.raw();
  const mpq_class& e = spec.epsilon.raw();
  const mpq_class s = d_sq.raw() + a - e * e;
  if (sgn(s) <= 0) return true;
  return s * s <= 4 * a * d_sq.raw();
}

enum class Theorem { t4, t5, isosceles, right_angle, k_polytope, pyramid };

inline std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::t4: return "T4";
    case Theorem::t5: return "T5";
    case Theorem::isosceles: return "isosceles";
    case Theorem::right_angle: return "right_angle";
    case Theorem::k_polytope: return "k_polytope";
    case Theorem::pyramid: return "pyramid";
  }
  return "unknown";
}

struct ConcentrationReport {
  Theorem theorem;
  std::uint32_t p = 0;
  std::uint64_t N = 0;
  std::string alpha;              // point descriptor, empty when not used
  std::string epsilon;            // exact "num/den" interval half-width
  double eta = 0.0;               // exponent with epsilon = p^-eta
  std::uint32_t K = 0;            // polytope size, 0 when not used
  double T = 0.0;                 // 1/T interval for k-polytopes
  std::string center_sq;          // exact "num/den" squared center
  std::uint64_t sample_count = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
  double empirical_proportion = 0.0;
  double bound = 0.0;
  std::string bound_rule;
  bool vacuous = false;
  bool pass = false;
  std::optional<double> secondary_proportion;
  std::string secondary_label;
  std::vector<std::pair<std::string, double>> diagnostics;

  std::string verdict() const { return vacuous ? "vacuous" : (pass ? "pass" : "fail"); }

  double diagnostic(std::string_view key) const {
    for (const auto& [k, v] : diagnostics) {
      if (k == key) return v;
    }
    throw std::out_of_range("no diagnostic " + std::string(key));
  }
};

/// "origin", "north-pole", or the coefficient list for small p.
inline std::string describe_point(const CyclotomicInt& a, const BoxSpec& box) {
  if (a.is_zero()) return "origin";
  if (a == north_pole_element(box)) return "north-pole";
  if (a.p() <= 17) {
    std::string out;
    for (const auto& c : a.coeffs()) {
      if (!out.empty()) out += ',';
      out += c.get_str();
    }
    return out;
  }
  return "point(trace=" + a.trace().get_str() + ",euclid_sq=" + a.euclid_norm_sq().get_str() + ")";
}

/// eta with epsilon = p^-eta.
inline double eta_from_epsilon(const ExactRational& eps, std::uint32_t p) {
  return -std::log(eps.to_double()) / std::log(static_cast<double>(p));
}

/// 1 - coef / p^{1-2 eta}
inline double explicit_bound(double coef, std::uint32_t p, double eta) {
  return 1.0 - coef / std::pow(static_cast<double>(p), 1.0 - 2.0 * eta);
}

namespace detail {

inline double fraction(std::uint64_t hits, std::uint64_t total) {
  return static_cast<double>(hits) / static_cast<double>(total);
}

inline std::uint64_t count_true(const std::vector<char>& v) {
  return static_cast<std::uint64_t>(std::count(v.begin(), v.end(), char{1}));
}

inline void finish_verdict(ConcentrationReport& r) {
  const bool eta_ok = r.eta > 0.0 && r.eta < 0.5;
  r.vacuous = !eta_ok || r.bound <= 0.0;
  r.pass = r.vacuous || r.empirical_proportion >= r.bound;
}

inline void require_exhaustive_ok(const BoxSpec& box) {
  if (box.p() > kOracleMaxPrime) {
    throw GuardError("exhaustive mode refused: p=" + std::to_string(box.p()) + " exceeds " +
                     std::to_string(kOracleMaxPrime));
  }
}

inline ConcentrationReport base_report(Theorem t, const BoxSpec& box, const SamplerConfig& cfg) {
  ConcentrationReport r;
  r.theorem = t;
  r.p = box.p();
  r.N = box.N();
  r.seed = cfg.seed;
  r.sample_count = cfg.sample_count;
  return r;
}

inline const ExactRational kHalf(Integer(1), Integer(2));

}  // namespace detail

/**
 * Proportion of vertices x with |d(alpha,x) - sqrt(A(alpha,V))| <= eps,
 * against the bound 1 - 22/p^{1-2 eta}. Exhaustive mode enumerates V.
 */
inline ConcentrationReport theorem4_report(const CyclotomicInt& alpha, const BoxSpec& box,
                                           const ExactRational& eps, const SamplerConfig& cfg,
                                           bool exhaustive = false) {
  require_same_field(alpha, box);
  cfg.validate();
  const ExactRational center = avg_point_to_vertices(alpha, box);
  const IntervalSpec interval(center, eps);

  auto r = detail::base_report(Theorem::t4, box, cfg);
  r.alpha = describe_point(alpha, box);
  r.epsilon = eps.str();
  r.center_sq = center.str();
  r.eta = eta_from_epsilon(eps, box.p());
  r.exhaustive = exhaustive;

  std::vector<char> hits;
  if (exhaustive) {
    detail::require_exhaustive_ok(box);
    const std::uint64_t count = std::uint64_t{1} << (box.p() - 1);
    hits = parallel_index_map(count, cfg.plan(), [&](std::uint64_t mask) -> char {
      return within_sqrt_interval(normalized_dist_sq(alpha, vertex_from_mask(box, mask), box), interval);
    });
  } else {
    hits = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) -> char {
      SampleStream rng(cfg.seed, i);
      return within_sqrt_interval(normalized_dist_sq(alpha, sample_vertex(box, rng), box), interval);
    });
  }
  r.sample_count = hits.size();
  r.empirical_proportion = detail::fraction(detail::count_true(hits), hits.size());
  r.bound = explicit_bound(22.0, box.p(), r.eta);
  r.bound_rule = "1 - 22/p^(1-2eta)";
  detail::finish_verdict(r);
  return r;
}

/// Proportion of vertex pairs (b1,b2) with both d(alpha,bi) in the theorem-4
/// interval, against 1 - 44/p^{1-2 eta}.
inline ConcentrationReport isosceles_report(const CyclotomicInt& alpha, const BoxSpec& box,
                                            const ExactRational& eps, const SamplerConfig& cfg) {
  require_same_field(alpha, box);
  cfg.validate();
  const ExactRational center = avg_point_to_vertices(alpha, box);
  const IntervalSpec interval(center, eps);

  auto r = detail::base_report(Theorem::isosceles, box, cfg);
  r.alpha = describe_point(alpha, box);
  r.epsilon = eps.str();
  r.center_sq = center.str();
  r.eta = eta_from_epsilon(eps, box.p());

  const auto hits = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) -> char {
    SampleStream rng(cfg.seed, i);
    const auto b1 = sample_vertex(box, rng);
    const auto b2 = sample_vertex(box, rng);
    return within_sqrt_interval(normalized_dist_sq(alpha, b1, box), interval) &&
           within_sqrt_interval(normalized_dist_sq(alpha, b2, box), interval);
  });
  r.empirical_proportion = detail::fraction(detail::count_true(hits), hits.size());
  r.bound = explicit_bound(44.0, box.p(), r.eta);
  r.bound_rule = "1 - 44/p^(1-2eta)";
  r.diagnostics.emplace_back("theorem4_bound_squared",
                             std::pow(explicit_bound(22.0, box.p(), r.eta), 2.0));
  detail::finish_verdict(r);
  return r;
}

/**
 * Proportion of ordered vertex pairs with |d(b1,b2) - sqrt(A(V,V))| <= eps,
 * against 1 - 2/p^{1-2 eta}. The secondary proportion uses the limiting
 * center 1/sqrt(2). Exhaustive mode enumerates V x V.
 */
inline ConcentrationReport vertex_pair_report(const BoxSpec& box, const ExactRational& eps,
                                              const SamplerConfig& cfg, bool exhaustive = false) {
  cfg.validate();
  const ExactRational center = avg_vertex_pairs(box);
  const IntervalSpec interval(center, eps);
  const IntervalSpec half_interval(detail::kHalf, eps);

  auto r = detail::base_report(Theorem::t5, box, cfg);
  r.epsilon = eps.str();
  r.center_sq = center.str();
  r.eta = eta_from_epsilon(eps, box.p());
  r.exhaustive = exhaustive;

  struct Outcome {
    std::uint64_t hits = 0;
    std::uint64_t half_hits = 0;
    std::uint64_t total = 0;
    double sum_dist_sq = 0.0;
  };
  auto tally = [&](const ExactRational& d2, Outcome& o) {
    o.hits += within_sqrt_interval(d2, interval) ? 1 : 0;
    o.half_hits += within_sqrt_interval(d2, half_interval) ? 1 : 0;
    o.sum_dist_sq += d2.to_double();
    ++o.total;
  };

  std::vector<Outcome> parts;
  if (exhaustive) {
    detail::require_exhaustive_ok(box);
    const auto vertices = enumerate_vertices(box);
    parts = parallel_index_map(vertices.size(), cfg.plan(), [&](std::uint64_t i) {
      Outcome o;
      for (const auto& b : vertices) tally(normalized_dist_sq(vertices[i], b, box), o);
      return o;
    });
  } else {
    parts = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) {
      SampleStream rng(cfg.seed, i);
      const auto b1 = sample_vertex(box, rng);
      const auto b2 = sample_vertex(box, rng);
      Outcome o;
      tally(normalized_dist_sq(b1, b2, box), o);
      return o;
    });
  }
  Outcome total;
  for (const auto& o : parts) {
    total.hits += o.hits;
    total.half_hits += o.half_hits;
    total.total += o.total;
    total.sum_dist_sq += o.sum_dist_sq;
  }
  r.sample_count = total.total;
  r.empirical_proportion = detail::fraction(total.hits, total.total);
  r.secondary_proportion = detail::fraction(total.half_hits, total.total);
  r.secondary_label = "center 1/sqrt(2)";
  r.bound = explicit_bound(2.0, box.p(), r.eta);
  r.bound_rule = "1 - 2/p^(1-2eta)";
  r.diagnostics.emplace_back("sample_mean_dist_sq", total.sum_dist_sq / static_cast<double>(total.total));
  detail::finish_verdict(r);
  return r;
}

/**
 * Proportion of vertex K-tuples whose C(K,2) normalized distances all lie
 * within 1/T of 1/sqrt(2). With T = p^eta the bound is the union bound
 * 1 - K(K-1)/p^{1-2 eta} over the pairwise statement.
 */
inline ConcentrationReport polytope_report(const BoxSpec& box, std::uint32_t K, double T,
                                           const SamplerConfig& cfg) {
  if (K < 2) throw std::invalid_argument("polytope_report: K must be >= 2");
  if (!(T > 1.0)) throw std::invalid_argument("polytope_report: T must be > 1");
  cfg.validate();
  const ExactRational eps = ExactRational::from_double(1.0 / T);
  const IntervalSpec interval(detail::kHalf, eps);

  auto r = detail::base_report(Theorem::k_polytope, box, cfg);
  r.K = K;
  r.T = T;
  r.epsilon = eps.str();
  r.center_sq = detail::kHalf.str();
  r.eta = std::log(T) / std::log(static_cast<double>(box.p()));

  const auto hits = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) -> char {
    SampleStream rng(cfg.seed, i);
    std::vector<CyclotomicInt> pts;
    pts.reserve(K);
    for (std::uint32_t k = 0; k < K; ++k) pts.push_back(sample_vertex(box, rng));
    for (std::uint32_t a = 0; a < K; ++a) {
      for (std::uint32_t b = a + 1; b < K; ++b) {
        if (!within_sqrt_interval(normalized_dist_sq(pts[a], pts[b], box), interval)) return 0;
      }
    }
    return 1;
  });
  r.empirical_proportion = detail::fraction(detail::count_true(hits), hits.size());
  r.bound = explicit_bound(static_cast<double>(K) * (K - 1), box.p(), r.eta);
  r.bound_rule = "1 - K(K-1)/p^(1-2eta) (union bound)";
  detail::finish_verdict(r);
  return r;
}

struct RightAngleOptions {
  double eps_cos = 0.1;
  double eta = 0.25;
  std::optional<double> gamma;  // defaults to the largest admissible value
  double target = 0.95;         // pilot-calibrated acceptance proportion
};

/**
 * Proportion of vertices b with |cos(angle alpha O b)| <= eps_cos. The
 * distance precondition d(O,alpha) >= p^{gamma-eta} is enforced; with the
 * default gamma = eta - log 2/log p it reads d(O,alpha) >= 1/2.
 */
inline ConcentrationReport right_angle_report(const CyclotomicInt& alpha, const BoxSpec& box,
                                              const RightAngleOptions& opt, const SamplerConfig& cfg) {
  require_same_field(alpha, box);
  cfg.validate();
  if (alpha.is_zero()) throw DegenerateError("right_angle_report: alpha is the origin");
  if (!(opt.eps_cos > 0.0)) throw std::invalid_argument("right_angle_report: eps_cos must be > 0");
  if (!(opt.eta > 0.0 && opt.eta < 0.5)) throw std::invalid_argument("right_angle_report: eta must be in (0,1/2)");

  const double log_p = std::log(static_cast<double>(box.p()));
  const double gamma_max = opt.eta - std::log(2.0) / log_p;
  const double gamma = opt.gamma.value_or(gamma_max);
  if (!(gamma > 0.0) || gamma > gamma_max + 1e-15) {
    throw std::invalid_argument("right_angle_report: gamma must lie in (0, eta - log2/log p]");
  }
  const ExactRational origin_sq = normalized_dist_sq(CyclotomicInt::zero(box.p()), alpha, box);
  const double dist_origin = std::sqrt(origin_sq.to_double());
  const double threshold = std::exp((gamma - opt.eta) * log_p);
  const double margin = dist_origin - threshold;
  if (margin < -1e-12) {
    throw GuardError("right_angle_report: d(O,alpha)=" + std::to_string(dist_origin) +
                     " below p^(gamma-eta)=" + std::to_string(threshold));
  }

  const ExactRational eps_exact = ExactRational::from_double(opt.eps_cos);
  const ExactRational eps_sq = eps_exact * eps_exact;

  struct Outcome {
    char inside;
    double abs_cos;
  };
  const auto outcomes = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) {
    SampleStream rng(cfg.seed, i);
    const auto c = cos_central_angle(alpha, sample_vertex(box, rng));
    return Outcome{static_cast<char>(c.cos_sq <= eps_sq), std::abs(c.value)};
  });
  std::uint64_t inside = 0;
  std::vector<double> abs_cos;
  abs_cos.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    inside += o.inside ? 1 : 0;
    abs_cos.push_back(o.abs_cos);
  }
  std::sort(abs_cos.begin(), abs_cos.end());
  const std::size_t n = abs_cos.size();
  const double median = (n % 2 == 1) ? abs_cos[n / 2] : 0.5 * (abs_cos[n / 2 - 1] + abs_cos[n / 2]);

  auto r = detail::base_report(Theorem::right_angle, box, cfg);
  r.alpha = describe_point(alpha, box);
  r.epsilon = eps_exact.str();
  r.eta = opt.eta;
  r.empirical_proportion = detail::fraction(inside, n);
  r.bound = opt.target;
  r.bound_rule = "pilot-calibrated target proportion of |cos| <= eps";
  r.diagnostics.emplace_back("gamma", gamma);
  r.diagnostics.emplace_back("dist_origin_alpha", dist_origin);
  r.diagnostics.emplace_back("precondition_threshold", threshold);
  r.diagnostics.emplace_back("precondition_margin", margin);
  r.diagnostics.emplace_back("theorem_applicable",
                             static_cast<double>(box.p()) >= std::pow(2.0, 1.0 / opt.eta) ? 1.0 : 0.0);
  r.diagnostics.emplace_back("median_abs_cos", median);
  r.diagnostics.emplace_back("decay_proxy", 2.0 * std::sqrt(3.0 / static_cast<double>(box.p())));
  r.vacuous = r.bound <= 0.0;
  r.pass = r.vacuous || r.empirical_proportion >= r.bound;
  return r;
}

/**
 * Pyramids with apex in the box and a K-vertex base drawn from V. A pyramid
 * counts when every base edge is within eps of 1/sqrt(2) and every lateral
 * edge is within eps of sqrt(A(apex,V)). When d(O,apex) <= eps the secondary
 * proportion measures lateral edges against 1/2 instead.
 */
inline ConcentrationReport pyramid_report(const CyclotomicInt& apex, const BoxSpec& box, std::uint32_t K,
                                          const ExactRational& eps, const SamplerConfig& cfg) {
  require_same_field(apex, box);
  cfg.validate();
  if (K < 2) throw std::invalid_argument("pyramid_report: K must be >= 2 (no base polytope)");
  if (!box.contains(apex)) throw std::invalid_argument("pyramid_report: apex outside the box");

  const ExactRational lateral_center = avg_point_to_vertices(apex, box);
  const IntervalSpec base_interval(detail::kHalf, eps);
  const IntervalSpec lateral_interval(lateral_center, eps);
  const ExactRational quarter(Integer(1), Integer(4));
  const IntervalSpec half_interval(quarter, eps);
  const ExactRational origin_sq = normalized_dist_sq(CyclotomicInt::zero(box.p()), apex, box);
  const bool near_origin = origin_sq <= eps * eps;

  struct Outcome {
    char base_ok;
    char lateral_ok;
    char half_ok;
  };
  const auto outcomes = parallel_index_map(cfg.sample_count, cfg.plan(), [&](std::uint64_t i) {
    SampleStream rng(cfg.seed, i);
    std::vector<CyclotomicInt> base;
    base.reserve(K);
    for (std::uint32_t k = 0; k < K; ++k) base.push_back(sample_vertex(box, rng));
    Outcome o{1, 1, 1};
    for (std::uint32_t a = 0; a < K && o.base_ok; ++a) {
      for (std::uint32_t b = a + 1; b < K; ++b) {
        if (!within_sqrt_interval(normalized_dist_sq(base[a], base[b], box), base_interval)) {
          o.base_ok = 0;
          break;
        }
      }
    }
    for (const auto& v : base) {
      const ExactRational d2 = normalized_dist_sq(apex, v, box);
      if (!within_sqrt_interval(d2, lateral_interval)) o.lateral_ok = 0;
      if (near_origin && !within_sqrt_interval(d2, half_interval)) o.half_ok = 0;
    }
    return o;
  });
  std::uint64_t both = 0, base_ok = 0, lateral_ok = 0, half_ok = 0;
  for (const auto& o : outcomes) {
    both += (o.base_ok && o.lateral_ok) ? 1 : 0;
    base_ok += o.base_ok ? 1 : 0;
    lateral_ok += o.lateral_ok ? 1 : 0;
    half_ok += o.half_ok ? 1 : 0;
  }
  const std::uint64_t n = outcomes.size();

  auto r = detail::base_report(Theorem::pyramid, box, cfg);
  r.alpha = describe_point(apex, box);
  r.K = K;
  r.epsilon = eps.str();
  r.center_sq = lateral_center.str();
  r.eta = eta_from_epsilon(eps, box.p());
  r.empirical_proportion = detail::fraction(both, n);
  r.bound = explicit_bound(static_cast<double>(K) * (K - 1) + 22.0 * K, box.p(), r.eta);
  r.bound_rule = "1 - (K(K-1) + 22K)/p^(1-2eta) (union bound)";
  r.diagnostics.emplace_back("base_proportion", detail::fraction(base_ok, n));
  r.diagnostics.emplace_back("lateral_proportion", detail::fraction(lateral_ok, n));
  if (near_origin) {
    r.secondary_proportion = detail::fraction(half_ok, n);
    r.secondary_label = "lateral center 1/2";
    // Right isosceles lateral faces: (1/2)^2 + (1/2)^2 == (1/sqrt 2)^2.
    r.diagnostics.emplace_back("pythagorean_exact", (quarter + quarter == detail::kHalf) ? 1.0 : 0.0);
  }
  detail::finish_verdict(r);
  return r;
}

}  // namespace cyclobox
