#pragma once

#include "padic/exact_rational.hpp"
#include "padic/padic_int.hpp"

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace padic {

/// Scaling exponent alpha = num/den in (0, 1], kept in lowest terms.
class Alpha {
 public:
  constexpr Alpha() = default;
  Alpha(std::uint32_t num, std::uint32_t den) {
    if (den == 0 || num == 0 || num > den) {
      throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(num) + "/" +
                                  std::to_string(den));
    }
    const auto g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  /// Accepts "1", "1/2", "0.5".
  static Alpha parse(std::string_view text) {
    const auto value = ExactRational::parse(text);
    if (value.is_negative() || value.is_zero() || value > ExactRational(1)) {
      throw std::invalid_argument("alpha must lie in (0, 1], got '" + std::string(text) + "'");
    }
    return Alpha(value.numerator().convert_to<std::uint32_t>(),
                 value.denominator().convert_to<std::uint32_t>());
  }

  constexpr std::uint32_t num() const { return num_; }
  constexpr std::uint32_t den() const { return den_; }
  ExactRational value() const { return ExactRational(BigInt(num_), BigInt(den_)); }
  double to_double() const { return static_cast<double>(num_) / den_; }
  std::string to_string() const { return value().to_string(); }

  friend bool operator==(const Alpha&, const Alpha&) = default;

 private:
  std::uint32_t num_ = 1;
  std::uint32_t den_ = 1;
};

/// The radius r = s / N^alpha, compared exactly: with alpha = a/b,
/// d <= r  <=>  d^b * N^a <= s^b  for d >= 0.
class ScaledRadius {
 public:
  ScaledRadius(ExactRational s, std::uint64_t n, Alpha alpha)
      : s_(std::move(s)), n_(n), alpha_(alpha),
        s_pow_(s_.pow(alpha.den())), n_pow_(ipow(BigInt(n), alpha.num())) {
    if (s_.is_negative()) throw std::invalid_argument("radius: s must be >= 0");
    if (n == 0) throw std::invalid_argument("radius: N must be >= 1");
  }

  const ExactRational& s() const { return s_; }
  std::uint64_t n() const { return n_; }
  Alpha alpha() const { return alpha_; }

  bool contains(const ExactRational& distance) const {
    if (distance.is_negative()) throw std::invalid_argument("radius: negative distance");
    if (alpha_.den() == 1) return distance * ExactRational(n_pow_) <= s_;
    return distance.pow(alpha_.den()) * ExactRational(n_pow_) <= s_pow_;
  }

  /// p^-k <= r, decided in integers: N^a * v^b <= u^b * p^(k b) with s = u/v.
  bool contains_inverse_power(std::uint32_t p, std::size_t k) const {
    const BigInt lhs = n_pow_ * s_pow_.denominator();
    const BigInt rhs = s_pow_.numerator() * ipow(BigInt(p), std::uint64_t{k} * alpha_.den());
    return lhs <= rhs;
  }

  /// Smallest k >= 0 with p^-k <= r. Requires s > 0.
  std::size_t radius_class(std::uint32_t p, std::size_t start = 0) const {
    if (s_.is_zero()) throw std::invalid_argument("radius class undefined for s = 0");
    std::size_t k = start;
    while (!contains_inverse_power(p, k)) ++k;
    return k;
  }

 private:
  ExactRational s_;
  std::uint64_t n_;
  Alpha alpha_;
  ExactRational s_pow_;
  BigInt n_pow_;
};

struct DiscMeasure {
  std::size_t k0 = 0;
  ExactRational mu{1};
};

/// Haar measure of the disc D_p(0, s/N^alpha): p^-k0 for the smallest k0 >= 0
/// with p^-k0 <= s/N^alpha. Radii >= 1 give the whole space (k0 = 0, mu = 1).
inline DiscMeasure disc_measure(std::uint32_t p, const ExactRational& s, std::uint64_t n, Alpha alpha) {
  require_prime(p);
  if (s.is_negative() || s.is_zero()) throw std::invalid_argument("disc_measure: s must be > 0");
  const std::size_t k0 = ScaledRadius(s, n, alpha).radius_class(p);
  return {k0, ExactRational::inverse_power(p, k0)};
}

}  // namespace padic
