#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace padic {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt ipow(const BigInt& base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

/// Arbitrary-precision rational in lowest terms with a positive denominator.
///
/// Every comparison between a radius s/N^alpha and a power of p goes through
/// this type, so there is no rounding anywhere before the final F value.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(std::int64_t value) : value_(value) {}  // NOLINT(implicit)
  ExactRational(const BigInt& value) : value_(value) {}  // NOLINT(implicit)
  ExactRational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw std::domain_error("ExactRational: zero denominator");
    value_ = denominator < 0 ? Rep(BigInt(-numerator), BigInt(-denominator)) : Rep(numerator, denominator);
  }

  /// Parses "3", "-0.25", "1/27", "2.5e-3". Decimal text is read exactly.
  static ExactRational parse(std::string_view text);

  /// The exact binary value of a finite double.
  static ExactRational from_double(double value) {
    if (!std::isfinite(value)) throw std::domain_error("ExactRational: non-finite double");
    if (value == 0.0) return {};
    int exponent = 0;
    const double mantissa = std::frexp(value, &exponent);
    // 53-bit integer mantissa, value = m * 2^(exponent - 53)
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    exponent -= 53;
    BigInt num = scaled;
    if (exponent >= 0) return ExactRational(BigInt(num << exponent));
    return ExactRational(num, BigInt(1) << -exponent);
  }

  static ExactRational inverse_power(std::uint64_t base, std::uint64_t exponent) {
    return ExactRational(BigInt(1), ipow(BigInt(base), exponent));
  }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  bool is_negative() const { return value_ < 0; }
  bool is_integer() const { return denominator() == 1; }

  double to_double() const { return value_.convert_to<double>(); }

  /// "n" for integers, "n/d" otherwise.
  std::string to_string() const {
    if (is_integer()) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  /// Terminating decimal text when the denominator has only factors 2 and 5.
  std::optional<std::string> to_decimal() const;

  /// to_decimal() when it exists, to_string() otherwise.
  std::string to_display() const { return to_decimal().value_or(to_string()); }

  ExactRational pow(std::uint64_t exponent) const {
    return ExactRational(ipow(numerator(), exponent), ipow(denominator(), exponent));
  }

  BigInt floor() const {
    BigInt n = numerator();
    const BigInt d = denominator();
    BigInt q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return q;
  }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return ExactRational(Rep(a.value_ + b.value_));
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return ExactRational(Rep(a.value_ - b.value_));
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return ExactRational(Rep(a.value_ * b.value_));
  }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.is_zero()) throw std::domain_error("ExactRational: division by zero");
    return ExactRational(Rep(a.value_ / b.value_));
  }
  ExactRational operator-() const { return ExactRational(Rep(-value_)); }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  using Rep = boost::multiprecision::cpp_rational;
  explicit ExactRational(Rep value) : value_(std::move(value)) {}

  Rep value_;
};

inline ExactRational abs(const ExactRational& x) { return x.is_negative() ? -x : x; }

inline ExactRational ExactRational::parse(std::string_view text) {
  const auto fail = [&]() -> ExactRational {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parse(text.substr(0, slash));
    const auto den = parse(text.substr(slash + 1));
    if (den.is_zero()) return fail();
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';

  BigInt digits = 0;
  std::int64_t scale = 0;  // value = digits * 10^-scale
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return fail();

  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return fail();
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) exp_negative = text[pos++] == '-';
    if (pos == text.size()) return fail();
    std::int64_t exponent = 0;
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (c < '0' || c > '9' || exponent > 100000) return fail();
      exponent = exponent * 10 + (c - '0');
    }
    scale += exp_negative ? exponent : -exponent;
  }

  if (negative) digits = -digits;
  if (scale >= 0) return ExactRational(digits, ipow(BigInt(10), static_cast<std::uint64_t>(scale)));
  return ExactRational(BigInt(digits * ipow(BigInt(10), static_cast<std::uint64_t>(-scale))));
}

inline std::optional<std::string> ExactRational::to_decimal() const {
  BigInt den = denominator();
  std::uint64_t twos = 0;
  std::uint64_t fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return std::nullopt;

  const std::uint64_t places = std::max(twos, fives);
  BigInt scaled = numerator() * ipow(BigInt(10), places) / denominator();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string text = scaled.str();
  if (places > 0) {
    if (text.size() <= places) text.insert(0, places - text.size() + 1, '0');
    text.insert(text.size() - places, ".");
  }
  return negative ? "-" + text : text;
}

}  // namespace padic
