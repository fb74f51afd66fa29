#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "cyclobox/cyclotomic.hpp"

namespace cyclobox {

using Coeffs = std::vector<std::int64_t>;

namespace detail {

// w^j for w = exp(2 pi i / q), with j reduced mod q first.
inline std::complex<double> root_power(std::uint64_t q, std::uint64_t j) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(j % q) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

inline void require_q(std::uint64_t q) {
  if (q < 3) throw std::invalid_argument("pole geometry needs q >= 3");
}

}  // namespace detail

/// sum_j a_j w^j in double precision, for any q >= 3 and coeffs of length q-1.
inline std::complex<double> embed_complex(std::uint64_t q, std::span<const std::int64_t> coeffs) {
  detail::require_q(q);
  if (coeffs.size() != q - 1) throw std::invalid_argument("embed_complex: need q-1 coefficients");
  std::complex<double> z{0.0, 0.0};
  for (std::uint64_t j = 1; j < q; ++j) {
    z += static_cast<double>(coeffs[j - 1]) * detail::root_power(q, j);
  }
  return z;
}

inline std::complex<double> embed_complex(const CyclotomicInt& a) {
  std::complex<double> z{0.0, 0.0};
  for (std::uint32_t j = 1; j < a.p(); ++j) {
    z += a.coeff(j).get_d() * detail::root_power(a.p(), j);
  }
  return z;
}

/**
 * Vertex of maximal imaginary part. For odd q the signs are +N on the first
 * half of the exponents and -N on the second; for even q they follow the sign
 * of sin(2 pi j / q), and the real exponent j = q/2 takes -N so that the pole
 * sits in the first quadrant.
 */
inline Coeffs north_pole(std::uint64_t q, std::int64_t N) {
  detail::require_q(q);
  Coeffs out(q - 1);
  for (std::uint64_t j = 1; j < q; ++j) {
    if (q % 2 == 0 && 2 * j == q) {
      out[j - 1] = -N;
    } else {
      out[j - 1] = (2 * j < q) ? N : -N;
    }
  }
  return out;
}

/// Vertex of maximal real part: +N for j <= floor(q/4) and j > floor(3q/4),
/// -N in between.
inline Coeffs east_pole(std::uint64_t q, std::int64_t N) {
  detail::require_q(q);
  const std::uint64_t lo = q / 4;
  const std::uint64_t hi = (3 * q) / 4;
  Coeffs out(q - 1);
  for (std::uint64_t j = 1; j < q; ++j) out[j - 1] = (j <= lo || j > hi) ? N : -N;
  return out;
}

inline Coeffs south_pole(std::uint64_t q, std::int64_t N) { return north_pole(q, -N); }
inline Coeffs west_pole(std::uint64_t q, std::int64_t N) { return east_pole(q, -N); }

inline CyclotomicInt north_pole_element(const BoxSpec& box) {
  const auto c = north_pole(box.p(), static_cast<std::int64_t>(box.N()));
  return CyclotomicInt::from_span(box.p(), c);
}

/// 2N * Im(NP(q)); only defined for odd q where NP is purely imaginary.
inline double euclidean_diameter(std::uint64_t q, std::int64_t N) {
  detail::require_q(q);
  if (q % 2 == 0) throw std::invalid_argument("euclidean_diameter: q must be odd");
  const auto np = north_pole(q, 1);
  return 2.0 * static_cast<double>(N) * embed_complex(q, np).imag();
}

inline double euclidean_diameter(const BoxSpec& box) {
  return euclidean_diameter(box.p(), static_cast<std::int64_t>(box.N()));
}

}  // namespace cyclobox
