#pragma once

#include "padic/exact_rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace padic {

using Digit = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

/// A p-adic integer truncated to m digits: sum a_i p^i mod p^m.
///
/// Digits are stored least significant first. Values with different p or m
/// never compare equal and cannot be combined arithmetically.
class PAdicInt {
 public:
  static PAdicInt from_digits(std::uint32_t p, std::vector<Digit> digits) {
    require_prime(p);
    if (digits.empty()) throw std::invalid_argument("PAdicInt: empty digit list");
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= p) {
        throw std::invalid_argument("PAdicInt: digit " + std::to_string(digits[i]) + " at position " +
                                    std::to_string(i) + " out of range for p = " + std::to_string(p));
      }
    }
    return PAdicInt(p, std::move(digits));
  }

  /// Base-p expansion of n mod p^m.
  static PAdicInt from_integer(std::uint32_t p, const BigInt& n, std::size_t m) {
    require_prime(p);
    if (m == 0) throw std::invalid_argument("PAdicInt: precision must be at least 1");
    if (n < 0) throw std::invalid_argument("PAdicInt: from_integer expects n >= 0");
    std::vector<Digit> digits(m, 0);
    BigInt rest = n;
    for (std::size_t i = 0; i < m && rest != 0; ++i) {
      digits[i] = static_cast<Digit>(rest % p);
      rest /= p;
    }
    return PAdicInt(p, std::move(digits));
  }

  static PAdicInt from_integer(std::uint32_t p, std::uint64_t n, std::size_t m) {
    return from_integer(p, BigInt(n), m);
  }

  static PAdicInt zero(std::uint32_t p, std::size_t m) { return from_integer(p, BigInt(0), m); }

  std::uint32_t prime() const { return p_; }
  std::size_t precision() const { return digits_.size(); }
  std::span<const Digit> digits() const { return digits_; }
  Digit digit(std::size_t i) const { return digits_.at(i); }

  bool is_zero() const {
    for (Digit d : digits_) {
      if (d != 0) return false;
    }
    return true;
  }

  /// The representative in [0, p^m).
  BigInt to_integer() const {
    BigInt value = 0;
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) value = value * p_ + *it;
    return value;
  }

  std::string to_string() const {
    std::string text;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (i != 0) text += ',';
      text += std::to_string(digits_[i]);
    }
    return text;
  }

  friend bool operator==(const PAdicInt&, const PAdicInt&) = default;

 private:
  PAdicInt(std::uint32_t p, std::vector<Digit> digits) : p_(p), digits_(std::move(digits)) {}

  friend PAdicInt padic_sub(const PAdicInt& a, const PAdicInt& b);
  friend PAdicInt padic_add(const PAdicInt& a, const PAdicInt& b);

  std::uint32_t p_ = 2;
  std::vector<Digit> digits_;
};

namespace detail {
inline void require_compatible(const PAdicInt& a, const PAdicInt& b) {
  if (a.prime() != b.prime() || a.precision() != b.precision()) {
    throw std::invalid_argument("PAdicInt: operands differ in p or precision");
  }
}
}  // namespace detail

/// (a - b) mod p^m, digit-wise with borrow.
inline PAdicInt padic_sub(const PAdicInt& a, const PAdicInt& b) {
  detail::require_compatible(a, b);
  const std::uint32_t p = a.prime();
  std::vector<Digit> out(a.precision());
  std::uint32_t borrow = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int64_t d = std::int64_t{a.digits_[i]} - b.digits_[i] - borrow;
    borrow = d < 0 ? 1 : 0;
    out[i] = static_cast<Digit>(d < 0 ? d + p : d);
  }
  return PAdicInt(p, std::move(out));
}

inline PAdicInt padic_add(const PAdicInt& a, const PAdicInt& b) {
  detail::require_compatible(a, b);
  const std::uint32_t p = a.prime();
  std::vector<Digit> out(a.precision());
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t d = std::uint64_t{a.digits_[i]} + b.digits_[i] + carry;
    carry = d >= p ? 1 : 0;
    out[i] = static_cast<Digit>(d - carry * p);
  }
  return PAdicInt(p, std::move(out));
}

inline PAdicInt operator-(const PAdicInt& a, const PAdicInt& b) { return padic_sub(a, b); }
inline PAdicInt operator+(const PAdicInt& a, const PAdicInt& b) { return padic_add(a, b); }

/// Index of the first nonzero digit; saturates at m for the zero element.
inline std::size_t valuation(const PAdicInt& a) {
  const auto digits = a.digits();
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] != 0) return i;
  }
  return digits.size();
}

struct AbsoluteValue {
  ExactRational value;
  // Set for the zero element: only |a|_p <= p^-m is known at precision m.
  bool upper_bound = false;
};

inline AbsoluteValue padic_abs(const PAdicInt& a) {
  const std::size_t v = valuation(a);
  return {ExactRational::inverse_power(a.prime(), v), v == a.precision()};
}

/// Monna map: sum a_i p^i -> sum a_i p^(-i-1), exact.
inline ExactRational monna(const PAdicInt& a) {
  const auto digits = a.digits();
  BigInt numerator = 0;
  for (Digit d : digits) numerator = numerator * a.prime() + d;
  return ExactRational(numerator, ipow(BigInt(a.prime()), digits.size()));
}

/// Digit reversal of the greedy base-p expansion of x in [0, 1).
///
/// Digit a_i of the result is the (i+1)-th fractional digit of x, so that
/// monna(monna_inverse(x)) is x truncated to m digits.
inline PAdicInt monna_inverse(const ExactRational& x, std::uint32_t p, std::size_t m) {
  require_prime(p);
  if (m == 0) throw std::invalid_argument("monna_inverse: precision must be at least 1");
  if (x.is_negative() || x >= ExactRational(1)) {
    throw std::domain_error("monna_inverse: x = " + x.to_string() + " outside [0, 1)");
  }
  // floor(x * p^m) holds the first m fractional digits, most significant first.
  BigInt scaled = (x * ExactRational(ipow(BigInt(p), m))).floor();
  std::vector<Digit> digits(m);
  for (std::size_t i = m; i-- > 0;) {
    digits[i] = static_cast<Digit>(scaled % p);
    scaled /= p;
  }
  return PAdicInt::from_digits(p, std::move(digits));
}

/// Same map for x given by its base-p fractional digit stream 0.d_0 d_1 ...
/// Streams shorter than m are padded with zeros.
inline PAdicInt monna_inverse(std::span<const Digit> stream, std::uint32_t p, std::size_t m) {
  if (m == 0) throw std::invalid_argument("monna_inverse: precision must be at least 1");
  std::vector<Digit> digits(m, 0);
  for (std::size_t i = 0; i < m && i < stream.size(); ++i) digits[i] = stream[i];
  return PAdicInt::from_digits(p, std::move(digits));
}

}  // namespace padic
