#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclobox {

using Integer = mpz_class;

/// Arbitrary-precision rational kept in lowest terms with a positive
/// denominator. Thin value wrapper over GMP's mpq.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long value) : value_(value) {}  // NOLINT(implicit)
  ExactRational(const Integer& value) : value_(value) {}  // NOLINT(implicit)
  ExactRational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("ExactRational: zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
  }
  explicit ExactRational(const mpq_class& value) : value_(value) {
    value_.canonicalize();
  }

  /// Exact binary value of a finite double.
  static ExactRational from_double(double value) {
    if (!std::isfinite(value)) {
      throw std::domain_error("ExactRational: non-finite double");
    }
    return ExactRational(mpq_class(value));
  }

  /// Accepts "a/b", "a", or a plain decimal such as "-0.125".
  static ExactRational parse(std::string_view text);

  Integer numerator() const { return value_.get_num(); }
  Integer denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  double to_double() const { return value_.get_d(); }
  int sign() const { return sgn(value_); }

  /// Always "num/den", e.g. "5/18", "1/1", "0/1".
  std::string str() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ + b.value_));
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ - b.value_));
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ * b.value_));
  }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.value_ == 0) throw std::domain_error("ExactRational: division by zero");
    return ExactRational(mpq_class(a.value_ / b.value_));
  }
  ExactRational operator-() const { return ExactRational(mpq_class(-value_)); }
  ExactRational& operator+=(const ExactRational& o) { return *this = *this + o; }
  ExactRational& operator-=(const ExactRational& o) { return *this = *this - o; }
  ExactRational& operator*=(const ExactRational& o) { return *this = *this * o; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a,
                                          const ExactRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
    return os << r.str();
  }

 private:
  mpq_class value_{0};
};

inline ExactRational ExactRational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational");

  auto parse_int = [](const std::string& digits) {
    Integer out;
    std::size_t i = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
    if (i == digits.size()) throw std::invalid_argument("malformed rational: " + digits);
    for (std::size_t k = i; k < digits.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(digits[k]))) {
        throw std::invalid_argument("malformed rational: " + digits);
      }
    }
    out.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10);
    return out;
  };

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return ExactRational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
  }
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    const bool negative = s[0] == '-';
    std::string int_part = s.substr(0, dot);
    std::string frac_part = s.substr(dot + 1);
    if (int_part == "-" || int_part == "+" || int_part.empty()) int_part += "0";
    if (frac_part.empty()) frac_part = "0";
    const Integer whole = parse_int(int_part);
    const Integer frac = parse_int(frac_part);
    if (frac_part[0] == '-' || frac_part[0] == '+') {
      throw std::invalid_argument("malformed rational: " + s);
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Integer magnitude = abs(whole) * scale + frac;
    if (negative) magnitude = -magnitude;
    return ExactRational(magnitude, scale);
  }
  return ExactRational(parse_int(s));
}

}  // namespace cyclobox
