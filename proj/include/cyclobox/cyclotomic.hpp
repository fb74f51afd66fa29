#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclobox/errors.hpp"
#include "cyclobox/exact_rational.hpp"
#include "cyclobox/primality.hpp"

namespace cyclobox {

/**
 * Element a_1 w + ... + a_{p-1} w^{p-1} of Z[w], w = exp(2 pi i / p).
 *
 * Storage is 0-based: coeffs()[j-1] holds a_j. The trace and the squared
 * Euclidean length of the coefficient vector are computed once at
 * construction, so distance evaluations reduce to one dot product.
 */
class CyclotomicInt {
 public:
  CyclotomicInt(std::uint32_t p, std::vector<Integer> coeffs)
      : p_(p), coeffs_(std::move(coeffs)) {
    if (!is_odd_prime(p_)) {
      throw std::invalid_argument("CyclotomicInt: p=" + std::to_string(p_) +
                                  " is not an odd prime");
    }
    if (coeffs_.size() != p_ - 1) {
      throw std::invalid_argument("CyclotomicInt: expected " + std::to_string(p_ - 1) +
                                  " coefficients, got " + std::to_string(coeffs_.size()));
    }
    refresh_cache();
  }

  CyclotomicInt(std::uint32_t p, std::initializer_list<long> coeffs)
      : CyclotomicInt(p, std::vector<Integer>(coeffs.begin(), coeffs.end())) {}

  static CyclotomicInt zero(std::uint32_t p) {
    return CyclotomicInt(p, std::vector<Integer>(p >= 1 ? p - 1 : 0, Integer(0)));
  }

  static CyclotomicInt from_span(std::uint32_t p, std::span<const std::int64_t> coeffs) {
    std::vector<Integer> v;
    v.reserve(coeffs.size());
    for (const auto c : coeffs) v.emplace_back(static_cast<long>(c));
    return CyclotomicInt(p, std::move(v));
  }

  std::uint32_t p() const { return p_; }
  std::span<const Integer> coeffs() const { return coeffs_; }
  /// a_j for 1 <= j <= p-1.
  const Integer& coeff(std::uint32_t j) const { return coeffs_.at(j - 1); }

  const Integer& trace() const { return trace_; }
  const Integer& euclid_norm_sq() const { return euclid_sq_; }
  bool is_zero() const { return euclid_sq_ == 0; }

  friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b) {
    return a.p_ == b.p_ && a.coeffs_ == b.coeffs_;
  }

  friend CyclotomicInt operator+(const CyclotomicInt& a, const CyclotomicInt& b) {
    require_same_field(a, b);
    std::vector<Integer> out(a.coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeffs_[i] + b.coeffs_[i];
    return CyclotomicInt(a.p_, std::move(out));
  }
  friend CyclotomicInt operator-(const CyclotomicInt& a, const CyclotomicInt& b) {
    require_same_field(a, b);
    std::vector<Integer> out(a.coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeffs_[i] - b.coeffs_[i];
    return CyclotomicInt(a.p_, std::move(out));
  }
  CyclotomicInt operator-() const { return scaled(Integer(-1)); }
  CyclotomicInt scaled(const Integer& c) const {
    std::vector<Integer> out(coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeffs_[i] * c;
    return CyclotomicInt(p_, std::move(out));
  }

  friend void require_same_field(const CyclotomicInt& a, const CyclotomicInt& b) {
    if (a.p_ != b.p_) {
      throw FieldMismatchError("incompatible fields: p=" + std::to_string(a.p_) +
                               " vs p=" + std::to_string(b.p_));
    }
  }

 private:
  void refresh_cache() {
    trace_ = 0;
    euclid_sq_ = 0;
    for (const auto& c : coeffs_) {
      trace_ -= c;
      euclid_sq_ += c * c;
    }
  }

  std::uint32_t p_;
  std::vector<Integer> coeffs_;
  Integer trace_;
  Integer euclid_sq_;
};

/// The cyclotomic box B(p,N) (coefficients in [-N,N]) and its vertex set
/// V(p,N) (coefficients exactly +-N).
class BoxSpec {
 public:
  BoxSpec(std::uint32_t p, std::uint64_t N) : p_(p), n_(N) {
    if (!is_odd_prime(p)) {
      throw std::invalid_argument("BoxSpec: p=" + std::to_string(p) + " is not an odd prime");
    }
    if (N < 1) throw std::invalid_argument("BoxSpec: N must be >= 1");
  }

  std::uint32_t p() const { return p_; }
  std::uint64_t N() const { return n_; }
  Integer half_width() const { return Integer(static_cast<unsigned long>(n_)); }

  /// (2N+1)^{p-1}
  Integer cardinality() const {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2 * n_ + 1, p_ - 1);
    return out;
  }
  /// 2^{p-1}
  Integer vertex_count() const {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, p_ - 1);
    return out;
  }

  bool contains(const CyclotomicInt& a) const {
    if (a.p() != p_) return false;
    const Integer bound = half_width();
    for (const auto& c : a.coeffs()) {
      if (abs(c) > bound) return false;
    }
    return true;
  }
  bool is_vertex(const CyclotomicInt& a) const {
    if (a.p() != p_) return false;
    const Integer bound = half_width();
    for (const auto& c : a.coeffs()) {
      if (abs(c) != bound) return false;
    }
    return true;
  }

  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;

 private:
  std::uint32_t p_;
  std::uint64_t n_;
};

inline void require_same_field(const CyclotomicInt& a, const BoxSpec& box) {
  if (a.p() != box.p()) {
    throw FieldMismatchError("incompatible fields: element p=" + std::to_string(a.p()) +
                             " vs box p=" + std::to_string(box.p()));
  }
}

/// psi(a) = (Tr(a w), ..., Tr(a w^{p-1})).
struct TraceVector {
  std::vector<Integer> entries;
};

/// Tr(a) = -(a_1 + ... + a_{p-1}).
inline Integer trace(const CyclotomicInt& a) { return a.trace(); }

/// Tr(a w^j) = Tr(a) + p a_{p-j}; note the index reversal.
inline TraceVector psi(const CyclotomicInt& a) {
  const std::uint32_t p = a.p();
  TraceVector out;
  out.entries.reserve(p - 1);
  for (std::uint32_t j = 1; j <= p - 1; ++j) {
    out.entries.emplace_back(a.trace() + Integer(p) * a.coeff(p - j));
  }
  return out;
}

inline Integer euclid_norm_sq(const CyclotomicInt& a) { return a.euclid_norm_sq(); }

/// ||a||^2 = p^2 ||a||_E^2 - (p+1) Tr(a)^2
inline Integer norm_sq(const CyclotomicInt& a) {
  const unsigned long p = a.p();
  return Integer(p * p) * a.euclid_norm_sq() - Integer(p + 1) * a.trace() * a.trace();
}

namespace detail {

inline Integer coefficient_dot(const CyclotomicInt& a, const CyclotomicInt& b) {
  Integer acc = 0;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    mpz_addmul(acc.get_mpz_t(), ca[i].get_mpz_t(), cb[i].get_mpz_t());
  }
  return acc;
}

}  // namespace detail

/// ||b - a||^2, the squared trace-form distance.
inline Integer dist_sq(const CyclotomicInt& a, const CyclotomicInt& b) {
  require_same_field(a, b);
  const unsigned long p = a.p();
  const Integer diff_euclid =
      a.euclid_norm_sq() + b.euclid_norm_sq() - 2 * detail::coefficient_dot(a, b);
  const Integer diff_trace = b.trace() - a.trace();
  return Integer(p * p) * diff_euclid - Integer(p + 1) * diff_trace * diff_trace;
}

/// Polarization of the trace norm.
inline Integer inner_product(const CyclotomicInt& a, const CyclotomicInt& b) {
  require_same_field(a, b);
  const Integer twice = norm_sq(a) + norm_sq(b) - dist_sq(a, b);
  if (mpz_odd_p(twice.get_mpz_t())) {
    throw std::logic_error("inner_product: odd polarization numerator");
  }
  Integer out;
  mpz_divexact_ui(out.get_mpz_t(), twice.get_mpz_t(), 2);
  return out;
}

/// diam(B(p,N))^2 = 4 N^2 p^2 (p-1)
inline Integer diameter_sq(const BoxSpec& box) {
  const Integer n = box.half_width();
  const unsigned long p = box.p();
  return 4 * n * n * Integer(p * p) * Integer(p - 1);
}

inline ExactRational normalized_dist_sq(const CyclotomicInt& a, const CyclotomicInt& b,
                                        const BoxSpec& box) {
  require_same_field(a, b);
  require_same_field(a, box);
  return ExactRational(dist_sq(a, b), diameter_sq(box));
}

struct CentralAngleCos {
  int sign;                // sign of the inner product
  ExactRational cos_sq;    // inner^2 / (||a||^2 ||b||^2)
  double value;            // sign * sqrt(cos_sq)
};

/// Cosine of the angle at the origin between a and b.
inline CentralAngleCos cos_central_angle(const CyclotomicInt& a, const CyclotomicInt& b) {
  require_same_field(a, b);
  const Integer na = norm_sq(a);
  const Integer nb = norm_sq(b);
  if (na == 0 || nb == 0) throw DegenerateError("cos_central_angle: zero vector");
  const Integer inner = inner_product(a, b);
  ExactRational c2(inner * inner, na * nb);
  const int s = sgn(inner);
  return {s, c2, s * std::sqrt(c2.to_double())};
}

/// sigma_k: w^j -> w^{kj mod p}.
inline CyclotomicInt galois_apply(const CyclotomicInt& a, std::uint64_t k) {
  const std::uint32_t p = a.p();
  if (k % p == 0) throw std::invalid_argument("galois_apply: k must be coprime to p");
  std::vector<Integer> out(p - 1);
  for (std::uint32_t j = 1; j <= p - 1; ++j) {
    const std::uint64_t target = (k % p) * j % p;
    out[target - 1] = a.coeff(j);
  }
  return CyclotomicInt(p, std::move(out));
}

}  // namespace cyclobox
