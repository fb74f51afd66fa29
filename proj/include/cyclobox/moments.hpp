#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclobox/cyclotomic.hpp"
#include "cyclobox/parallel.hpp"

namespace cyclobox {

// Largest prime the enumeration oracles accept: 2^16 vertices.
inline constexpr std::uint32_t kOracleMaxPrime = 17;

enum class MomentKind {
  avg_point_vertices,
  second_moment_point_vertices,
  avg_vertex_pairs,
  fourth_vertex_pairs,
  variance_vertex_pairs,
};

inline std::string_view to_string(MomentKind k) {
  switch (k) {
    case MomentKind::avg_point_vertices: return "avg_point_vertices";
    case MomentKind::second_moment_point_vertices: return "second_moment_point_vertices";
    case MomentKind::avg_vertex_pairs: return "avg_vertex_pairs";
    case MomentKind::fourth_vertex_pairs: return "fourth_vertex_pairs";
    case MomentKind::variance_vertex_pairs: return "variance_vertex_pairs";
  }
  return "unknown";
}

struct MomentReport {
  MomentKind kind;
  std::uint32_t p;
  std::uint64_t N;
  std::string alpha;  // descriptor; empty for pairwise quantities
  ExactRational formula_value;
  std::optional<ExactRational> oracle_value;

  bool consistent() const { return !oracle_value || *oracle_value == formula_value; }
};

namespace detail {

inline ExactRational inv_pow(std::uint32_t p, unsigned k) {
  Integer d;
  mpz_ui_pow_ui(d.get_mpz_t(), p, k);
  return ExactRational(Integer(1), d);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms: point to vertices.

/// A(a,V) = d^2(0,a) + 1/4 - 1/(4p) - 1/(4p^2)
inline ExactRational avg_point_to_vertices(const CyclotomicInt& a, const BoxSpec& box) {
  require_same_field(a, box);
  const std::uint32_t p = box.p();
  const ExactRational quarter(Integer(1), Integer(4));
  return normalized_dist_sq(CyclotomicInt::zero(p), a, box) +
         quarter * (ExactRational(1) - detail::inv_pow(p, 1) - detail::inv_pow(p, 2));
}

/// Same average from the unreduced numerator
/// p^2 ||a||_E^2 - (p+1) Tr(a)^2 + N^2 (p^3 - 2p^2 + 1), over D^2.
inline ExactRational avg_point_to_vertices_expanded(const CyclotomicInt& a, const BoxSpec& box) {
  require_same_field(a, box);
  const Integer p = box.p();
  const Integer n = box.half_width();
  const Integer num = p * p * a.euclid_norm_sq() - (p + 1) * a.trace() * a.trace() +
                      n * n * (p * p * p - 2 * p * p + 1);
  return ExactRational(num, diameter_sq(box));
}

/// Second moment of d^2(a,x) about its mean over x in V, evaluated as the
/// five-term polynomial in p with prefactor 2N^2/D^4.
inline ExactRational second_moment_point_to_vertices(const CyclotomicInt& a, const BoxSpec& box) {
  require_same_field(a, box);
  const Integer p = box.p();
  const Integer n2 = box.half_width() * box.half_width();
  const Integer e2 = a.euclid_norm_sq();
  const Integer t2 = a.trace() * a.trace();
  const Integer p2 = p * p;
  const Integer p3 = p2 * p;
  const Integer p4 = p3 * p;
  const Integer poly = (n2 + 2 * e2) * p4
                     - (n2 + 2 * t2) * p3
                     - (3 * n2 + 2 * t2) * p2
                     + (n2 - 2 * t2) * p
                     + 2 * (n2 - t2);
  const Integer d2 = diameter_sq(box);
  return ExactRational(2 * n2 * poly, d2 * d2);
}

/**
 * Independent route to the same second moment. Writing each vertex as
 * x = N s with s uniform in {-1,1}^{p-1}, the squared distance is an affine
 * function of U = <a,s>, V = sum s_j and V^2, so its variance follows from the
 * Rademacher moments E[U^2] = ||a||_E^2, E[UV] = -Tr(a), E[V^2] = m and
 * Var(V^2) = 2m(m-1), m = p-1 (all odd mixed moments vanish).
 */
inline ExactRational second_moment_point_to_vertices_by_sign_moments(const CyclotomicInt& a,
                                                                     const BoxSpec& box) {
  require_same_field(a, box);
  const Integer p = box.p();
  const Integer m = p - 1;
  const Integer n2 = box.half_width() * box.half_width();
  const Integer s2 = a.trace() * a.trace();  // (sum a_j)^2
  const Integer var = 4 * p * p * p * p * n2 * a.euclid_norm_sq()
                    + 4 * (p + 1) * (p + 1) * s2 * n2 * m
                    - 8 * p * p * (p + 1) * s2 * n2
                    + 2 * (p + 1) * (p + 1) * n2 * n2 * m * (m - 1);
  const Integer d2 = diameter_sq(box);
  return ExactRational(var, d2 * d2);
}

// ---------------------------------------------------------------------------
// Closed forms: vertex pairs. None depend on N.

/// A(V,V) = (1 - 1/p - 1/p^2) / 2
inline ExactRational avg_vertex_pairs(const BoxSpec& box) {
  const std::uint32_t p = box.p();
  return ExactRational(Integer(1), Integer(2)) *
         (ExactRational(1) - detail::inv_pow(p, 1) - detail::inv_pow(p, 2));
}

/// L(V,V) = (p - 2 + 1/p + 2/p^2 - 5/p^3 - 4/p^4) / (4(p-1))
inline ExactRational fourth_moment_vertex_pairs(const BoxSpec& box) {
  const std::uint32_t p = box.p();
  const ExactRational bracket = ExactRational(static_cast<long>(p) - 2) + detail::inv_pow(p, 1) +
                                ExactRational(2) * detail::inv_pow(p, 2) -
                                ExactRational(5) * detail::inv_pow(p, 3) -
                                ExactRational(4) * detail::inv_pow(p, 4);
  return bracket / ExactRational(4 * (static_cast<long>(p) - 1));
}

/// M(V,V) = (1 - 1/p^2 - 4/p^3 - 3/p^4) / (4(p-1))
inline ExactRational variance_vertex_pairs(const BoxSpec& box) {
  const std::uint32_t p = box.p();
  const ExactRational bracket = ExactRational(1) - detail::inv_pow(p, 2) -
                                ExactRational(4) * detail::inv_pow(p, 3) -
                                ExactRational(3) * detail::inv_pow(p, 4);
  return bracket / ExactRational(4 * (static_cast<long>(p) - 1));
}

/// Mean normalized squared distance between two uniform points of the box:
/// (N+1)(p^2-p-1) / (6 N p^2).
inline ExactRational avg_box_point_pairs(const BoxSpec& box) {
  const Integer p = box.p();
  const Integer n = box.half_width();
  return ExactRational((n + 1) * (p * p - p - 1), 6 * n * p * p);
}

// ---------------------------------------------------------------------------
// Enumeration oracles.

/// Vertex whose j-th coefficient is +N when bit j-1 of mask is set, else -N.
inline CyclotomicInt vertex_from_mask(const BoxSpec& box, std::uint64_t mask) {
  const Integer n = box.half_width();
  std::vector<Integer> c(box.p() - 1);
  for (std::uint32_t j = 0; j + 1 < box.p(); ++j) c[j] = ((mask >> j) & 1U) ? n : Integer(-n);
  return CyclotomicInt(box.p(), std::move(c));
}

inline std::vector<CyclotomicInt> enumerate_vertices(const BoxSpec& box) {
  if (box.p() > kOracleMaxPrime) {
    throw GuardError("vertex enumeration refused: p=" + std::to_string(box.p()) +
                     " exceeds oracle limit " + std::to_string(kOracleMaxPrime));
  }
  const std::uint64_t count = std::uint64_t{1} << (box.p() - 1);
  std::vector<CyclotomicInt> out;
  out.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m) out.push_back(vertex_from_mask(box, m));
  return out;
}

namespace detail {

// Squared trace norm straight from the psi-embedding: sum_j Tr(a w^j)^2.
inline Integer psi_norm_sq(const CyclotomicInt& a) {
  Integer acc = 0;
  for (const auto& e : psi(a).entries) acc += e * e;
  return acc;
}

inline Integer psi_dist_sq(const CyclotomicInt& a, const CyclotomicInt& b) {
  return psi_norm_sq(b - a);
}

// Mean and central second moment of the sample values[i] / scale, exactly.
// Second pass over deviations n*v_i - S, averaged as sum dev^2 / (n^3 scale^2).
inline std::pair<ExactRational, ExactRational> mean_and_spread(const std::vector<Integer>& values,
                                                               const Integer& scale) {
  const Integer n = static_cast<unsigned long>(values.size());
  Integer sum = 0;
  for (const auto& v : values) sum += v;
  Integer dev_sq = 0;
  for (const auto& v : values) {
    const Integer dev = n * v - sum;
    dev_sq += dev * dev;
  }
  return {ExactRational(sum, n * scale), ExactRational(dev_sq, n * n * n * scale * scale)};
}

}  // namespace detail

/**
 * Exhaustive reference values. With `alpha` set: the average and the central
 * second moment of d^2(alpha, x) over x in V. Without: the average, fourth
 * moment and central second moment of d^2 over ordered vertex pairs (computed
 * on unordered pairs and doubled). Distances come from the psi-embedding, not
 * from the closed-form norm.
 */
inline std::vector<MomentReport> oracle_moments(const std::optional<CyclotomicInt>& alpha,
                                                const BoxSpec& box, unsigned workers = 1) {
  const auto vertices = enumerate_vertices(box);
  const Integer d2 = diameter_sq(box);
  const std::uint32_t p = box.p();
  std::vector<MomentReport> out;

  if (alpha) {
    require_same_field(*alpha, box);
    std::vector<Integer> values;
    values.reserve(vertices.size());
    for (const auto& x : vertices) values.push_back(detail::psi_dist_sq(*alpha, x));
    const auto [mean, spread] = detail::mean_and_spread(values, d2);
    out.push_back({MomentKind::avg_point_vertices, p, box.N(), "", avg_point_to_vertices(*alpha, box), mean});
    out.push_back({MomentKind::second_moment_point_vertices, p, box.N(), "",
                   second_moment_point_to_vertices(*alpha, box), spread});
    return out;
  }

  // Row i holds sum over j > i of d^2 and d^4.
  struct RowSums {
    Integer s2;
    Integer s4;
  };
  const auto rows = parallel_index_map(vertices.size(), workers, [&](std::uint64_t i) {
    RowSums r{0, 0};
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      const Integer d = detail::psi_dist_sq(vertices[i], vertices[j]);
      r.s2 += d;
      r.s4 += d * d;
    }
    return r;
  });
  Integer s2 = 0;
  Integer s4 = 0;
  for (const auto& r : rows) {
    s2 += r.s2;
    s4 += r.s4;
  }
  s2 *= 2;
  s4 *= 2;
  const Integer pairs = Integer(static_cast<unsigned long>(vertices.size())) *
                        Integer(static_cast<unsigned long>(vertices.size()));
  const ExactRational mean(s2, pairs * d2);
  const ExactRational fourth(s4, pairs * d2 * d2);

  // Deviation pass: sum over ordered pairs of (d^2/D^2 - mean)^2, with the
  // diagonal (distance 0) contributing mean^2 each.
  const auto dev_rows = parallel_index_map(vertices.size(), workers, [&](std::uint64_t i) {
    Integer acc_num = 0;
    // (d/D2 - A)^2 = (d*den - num*D2)^2 / (D2*den)^2 with A = num/den.
    const Integer num = mean.numerator();
    const Integer den = mean.denominator();
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      const Integer d = detail::psi_dist_sq(vertices[i], vertices[j]);
      const Integer dev = d * den - num * d2;
      acc_num += dev * dev;
    }
    return acc_num;
  });
  Integer dev_total = 0;
  for (const auto& r : dev_rows) dev_total += r;
  dev_total *= 2;
  const Integer scale = d2 * mean.denominator();
  const ExactRational diag = ExactRational(static_cast<long>(vertices.size())) * mean * mean;
  const ExactRational variance = (ExactRational(dev_total, scale * scale) + diag) / ExactRational(pairs);

  out.push_back({MomentKind::avg_vertex_pairs, p, box.N(), "", avg_vertex_pairs(box), mean});
  out.push_back({MomentKind::fourth_vertex_pairs, p, box.N(), "", fourth_moment_vertex_pairs(box), fourth});
  out.push_back({MomentKind::variance_vertex_pairs, p, box.N(), "", variance_vertex_pairs(box), variance});
  return out;
}

/// Exhaustive mean of d^2 over all ordered pairs of box points (tiny boxes only).
inline ExactRational oracle_box_pair_mean(const BoxSpec& box) {
  const Integer card = box.cardinality();
  if (card > 4096) throw GuardError("box pair oracle refused: box has more than 4096 points");
  const std::uint64_t count = card.get_ui();
  const std::uint64_t width = 2 * box.N() + 1;
  std::vector<CyclotomicInt> points;
  points.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<Integer> c(box.p() - 1);
    std::uint64_t rest = idx;
    for (auto& v : c) {
      v = static_cast<long>(rest % width) - static_cast<long>(box.N());
      rest /= width;
    }
    points.emplace_back(box.p(), std::move(c));
  }
  Integer sum = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) sum += detail::psi_dist_sq(points[i], points[j]);
  }
  sum *= 2;
  return ExactRational(sum, card * card * diameter_sq(box));
}

// ---------------------------------------------------------------------------
// Vanishing multinomial sums over V.

struct CancellationCheck {
  std::string name;
  Integer enumerated;
  Integer closed_form;
  bool equal() const { return enumerated == closed_form; }
};

struct CancellationRecord {
  std::uint32_t p;
  std::uint64_t N;
  std::vector<CancellationCheck> checks;
  bool all_equal() const {
    for (const auto& c : checks) {
      if (!c.equal()) return false;
    }
    return true;
  }
};

/**
 * Enumerates, over every vertex x:
 *   linear     sum_j a_j x_j                         -> 0
 *   quadratic  sum_{j,k} a_j a_k x_j x_k             -> #V ||a||_E^2 N^2
 *   mixed      sum_{j,k,m,n} a_j a_k x_m x_n         -> #V Tr(a)^2 N^2 (p-1)
 *   cubic      sum_{j,m,n} x_j x_m x_n               -> 0
 *   quartic    sum_{j,k,m,n} x_j x_k x_m x_n         -> #V N^4 (p-1)(3p-5)
 */
inline CancellationRecord oracle_cancellation_sums(const CyclotomicInt& alpha, const BoxSpec& box) {
  require_same_field(alpha, box);
  const auto vertices = enumerate_vertices(box);
  const Integer nv = static_cast<unsigned long>(vertices.size());
  const Integer n = box.half_width();
  const Integer p = box.p();
  const auto a = alpha.coeffs();
  Integer sum_a = 0;
  for (const auto& c : a) sum_a += c;

  Integer linear = 0, quadratic = 0, mixed = 0, cubic = 0, quartic = 0;
  for (const auto& x : vertices) {
    const auto xs = x.coeffs();
    Integer ax = 0;
    Integer sx = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      ax += a[j] * xs[j];
      sx += xs[j];
    }
    linear += ax;
    quadratic += ax * ax;
    mixed += sum_a * sum_a * sx * sx;
    cubic += sx * sx * sx;
    quartic += sx * sx * sx * sx;
  }
  const Integer t2 = alpha.trace() * alpha.trace();
  CancellationRecord rec{box.p(), box.N(), {}};
  rec.checks.push_back({"linear", linear, 0});
  rec.checks.push_back({"quadratic", quadratic, nv * alpha.euclid_norm_sq() * n * n});
  rec.checks.push_back({"mixed_quadratic", mixed, nv * t2 * n * n * (p - 1)});
  rec.checks.push_back({"cubic", cubic, 0});
  rec.checks.push_back({"quartic", quartic, nv * n * n * n * n * (p - 1) * (3 * p - 5)});
  return rec;
}

}  // namespace cyclobox
