#pragma once

// Brute-force oracles and diagnostics. Nothing here calls the prefix-bucket
// counter or the sweep except where a diagnostic reports on them.

#include "padic/disc_measure.hpp"
#include "padic/exact_rational.hpp"
#include "padic/padic_int.hpp"
#include "padic/paircorr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;

// Pair-count oracles ------------------------------------------------------------

/// Counts of ordered pairs i != j among the first N elements with
/// valuation(x_i - x_j) >= k, for every k = 0..m. One O(N^2) pass.
inline std::vector<std::uint64_t> brute_pair_count_profile(std::span<const PAdicInt> x, std::size_t n) {
  if (n > x.size()) throw std::invalid_argument("brute_pair_count_profile: N exceeds sequence length");
  if (n == 0) return {0};
  const std::size_t m = x[0].precision();
  std::vector<std::uint64_t> at_valuation(m + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) at_valuation[valuation(x[i] - x[j])] += 2;
  }
  std::vector<std::uint64_t> at_least(m + 1, 0);
  std::uint64_t running = 0;
  for (std::size_t k = m + 1; k-- > 0;) {
    running += at_valuation[k];
    at_least[k] = running;
  }
  return at_least;
}

inline std::uint64_t brute_pair_count_padic(std::span<const PAdicInt> x, std::size_t n, std::size_t k) {
  if (n > x.size()) throw std::invalid_argument("brute_pair_count_padic: N exceeds sequence length");
  if (n > 0 && k > x[0].precision()) throw std::invalid_argument("brute_pair_count_padic: k exceeds precision");
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && valuation(x[i] - x[j]) >= k) ++count;
    }
  }
  return count;
}

/// O(N^2) nearest-integer count: min(|d|, 1 - |d|) <= s / N^alpha.
inline std::uint64_t brute_real_pair_count(std::span<const ExactRational> y, std::size_t n,
                                           const ScaledRadius& radius) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto d = abs(y[i] - y[j]);
      const auto wrapped = ExactRational(1) - d;
      if (radius.contains(std::min(d, wrapped))) ++count;
    }
  }
  return count;
}

inline std::uint64_t brute_real_pair_count_abs(std::span<const ExactRational> y, std::size_t n,
                                               const ExactRational& threshold) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && abs(y[i] - y[j]) <= threshold) ++count;
    }
  }
  return count;
}

/// Ordered pairs of {1..N} congruent mod p^k. With q = N / p^k, r = N mod p^k:
/// r classes of size q+1 and p^k - r classes of size q.
inline std::uint64_t naturals_closed_form(std::uint64_t n, std::uint32_t p, std::size_t k) {
  const BigInt modulus = ipow(BigInt(p), k);
  const BigInt q = BigInt(n) / modulus;
  const BigInt r = BigInt(n) % modulus;
  const BigInt count = r * (q + 1) * q + (modulus - r) * q * (q - 1);
  return count.convert_to<std::uint64_t>();
}

/// {floor(s p^k) + 1 : k >= 0} up to n_max: the N at which s/N first drops
/// below p^-k, i.e. where the radius class for alpha = 1 rises.
inline std::vector<std::uint64_t> jump_closed_form(std::uint32_t p, const ExactRational& s, std::uint64_t n_max) {
  if (s.is_negative() || s.is_zero()) throw std::invalid_argument("jump_closed_form: s must be > 0");
  std::set<std::uint64_t> jumps;
  for (std::uint64_t k = 0;; ++k) {
    const BigInt value = (s * ExactRational(ipow(BigInt(p), k))).floor() + 1;
    if (value > n_max) break;
    jumps.insert(value.convert_to<std::uint64_t>());
  }
  return {jumps.begin(), jumps.end()};
}

// Exhaustive lemma checks --------------------------------------------------------

inline void for_each_element(std::uint32_t p, std::size_t m, std::uint64_t budget,
                             const std::function<void(const PAdicInt&)>& visit) {
  require_prime(p);
  if (m == 0) throw std::invalid_argument("precision must be at least 1");
  if (ipow(BigInt(p), m) > budget) {
    throw std::invalid_argument("enumeration of " + std::to_string(p) + "^" + std::to_string(m) +
                                " elements exceeds the budget of " + std::to_string(budget));
  }
  std::vector<Digit> digits(m, 0);
  while (true) {
    visit(PAdicInt::from_digits(p, digits));
    std::size_t i = 0;
    while (i < m && ++digits[i] == p) digits[i++] = 0;
    if (i == m) return;
  }
}

inline std::vector<PAdicInt> all_elements(std::uint32_t p, std::size_t m, std::uint64_t budget) {
  std::vector<PAdicInt> out;
  for_each_element(p, m, budget, [&](const PAdicInt& a) { out.push_back(a); });
  return out;
}

struct LemmaViolation {
  std::string part;  // "i", "ii" or "iii"
  PAdicInt element;
  std::size_t k = 0;
  std::string detail;
};

/// Checks, over all p^m truncated elements a and all relevant k:
///   (i)   |a|_p <= p^-k  implies  monna(a) <= p^-k
///   (ii)  monna(a) <= p^-k  iff  |a|_p <= p^-k or a = p^(k-1)   (1 <= k <= m)
///   (iii) monna is injective on truncations.
/// Returns every violation found.
inline std::vector<LemmaViolation> check_lemma_monna(std::uint32_t p, std::size_t m,
                                                     std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<LemmaViolation> violations;
  std::set<ExactRational> images;
  for_each_element(p, m, budget, [&](const PAdicInt& a) {
    const std::size_t v = valuation(a);
    const ExactRational image = monna(a);
    for (std::size_t k = 0; k <= m; ++k) {
      const ExactRational bound = ExactRational::inverse_power(p, k);
      if (v >= k && image > bound) {
        violations.push_back({"i", a, k, "|a|_p <= p^-k but monna(a) = " + image.to_string()});
      }
      if (k == 0) continue;
      const bool power_of_p = a == PAdicInt::from_integer(p, ipow(BigInt(p), k - 1), m);
      if ((image <= bound) != (v >= k || power_of_p)) {
        violations.push_back({"ii", a, k, "monna(a) = " + image.to_string() + ", valuation " + std::to_string(v)});
      }
    }
    if (!images.insert(image).second) {
      violations.push_back({"iii", a, 0, "monna value " + image.to_string() + " already taken"});
    }
  });
  return violations;
}

/// Elements a with monna_inverse(monna(a)) != a.
inline std::vector<PAdicInt> check_monna_round_trip(std::uint32_t p, std::size_t m,
                                                    std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<PAdicInt> failures;
  for_each_element(p, m, budget, [&](const PAdicInt& a) {
    if (monna_inverse(monna(a), p, m) != a) failures.push_back(a);
  });
  return failures;
}

/// Triples with |a - c|_p > max(|a - b|_p, |b - c|_p). The budget bounds the
/// number of triples, p^(3m).
inline std::vector<std::array<PAdicInt, 3>> check_ultrametric(std::uint32_t p, std::size_t m,
                                                              std::uint64_t budget = kDefaultEnumerationBudget * 10) {
  if (ipow(BigInt(p), 3 * std::uint64_t{m}) > budget) {
    throw std::invalid_argument("ultrametric enumeration exceeds the budget");
  }
  const auto elements = all_elements(p, m, budget);
  std::vector<std::array<PAdicInt, 3>> failures;
  for (const auto& a : elements) {
    for (const auto& b : elements) {
      const auto ab = padic_abs(a - b).value;
      for (const auto& c : elements) {
        if (padic_abs(a - c).value > std::max(ab, padic_abs(b - c).value)) failures.push_back({a, b, c});
      }
    }
  }
  return failures;
}

/// Pairs (A, B) where digit arithmetic disagrees with integer arithmetic mod p^m.
inline std::vector<std::array<std::uint64_t, 2>> check_ring_consistency(
    std::uint32_t p, std::size_t m, std::uint64_t budget = kDefaultEnumerationBudget * 10) {
  const BigInt modulus = ipow(BigInt(p), m);
  if (modulus * modulus > budget) throw std::invalid_argument("ring enumeration exceeds the budget");
  const auto size = modulus.convert_to<std::uint64_t>();
  std::vector<std::array<std::uint64_t, 2>> failures;
  for (std::uint64_t a = 0; a < size; ++a) {
    const auto pa = PAdicInt::from_integer(p, a, m);
    for (std::uint64_t b = 0; b < size; ++b) {
      const auto pb = PAdicInt::from_integer(p, b, m);
      const auto diff = PAdicInt::from_integer(p, (a + size - b) % size, m);
      const auto sum = PAdicInt::from_integer(p, (a + b) % size, m);
      if (pa - pb != diff || pa + pb != sum) failures.push_back({a, b});
    }
  }
  return failures;
}

// Transference diagnostics -------------------------------------------------------

/// x with x^root = power, for irrational N^alpha.
struct RationalRoot {
  ExactRational power;
  std::uint32_t root = 1;

  double to_double() const { return std::pow(power.to_double(), 1.0 / root); }
  /// lo < x <= hi, decided exactly.
  bool in_half_open(const ExactRational& lo, const ExactRational& hi) const {
    return power > lo.pow(root) && power <= hi.pow(root);
  }
};

/// Real-versus-p-adic pair counts at the radius class of s/N^alpha, where
/// s/N^alpha = p^-k * x and 1/p < x <= 1.
struct TransferenceReport {
  std::uint64_t n = 0;
  std::size_t k = 0;
  std::uint64_t count_padic = 0;
  std::uint64_t count_real_abs = 0;
  std::int64_t excess = 0;
  // s/N^alpha = p^-rescale_k * rescale_x with 1/p < rescale_x <= 1; rescale_k
  // is k or k - 1 (lower only when the radius exceeds 1).
  RationalRoot rescale_x;
  std::int64_t rescale_k = 0;
  double normalized_excess = 0.0;
  // Largest number of real partners within p^-k of one point that are not in
  // its p-adic ball. Reported only; it is not bounded in general.
  std::uint64_t max_excess_partners = 0;
};

inline TransferenceReport transference_diagnostic(std::span<const ExactRational> y, std::uint32_t p, std::size_t m,
                                                  Alpha alpha, const ExactRational& s, std::size_t n) {
  if (n == 0 || n > y.size()) throw std::invalid_argument("transference_diagnostic: need 1 <= N <= length");
  std::vector<PAdicInt> x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x.push_back(monna_inverse(y[i], p, m));

  const auto disc = disc_measure(p, s, n, alpha);
  if (disc.k0 > m) {
    throw PrecisionError("transference_diagnostic: radius class " + std::to_string(disc.k0) +
                         " exceeds precision " + std::to_string(m));
  }
  TransferenceReport report;
  report.n = n;
  report.k = disc.k0;
  report.count_padic = padic_pair_count_prefix(x, n, disc.k0);
  report.count_real_abs = real_pair_count_abs(y, n, disc.mu);
  report.excess = static_cast<std::int64_t>(report.count_real_abs) - static_cast<std::int64_t>(report.count_padic);
  // x^b = (s/N^alpha)^b p^(jb), with j shifted until 1/p < x <= 1. The counts
  // use the disc class k, where x would land in [1, p) instead.
  const ExactRational step(ipow(BigInt(p), alpha.den()));
  ExactRational x_power = s.pow(alpha.den()) / ExactRational(ipow(BigInt(n), alpha.num())) *
                          ExactRational(ipow(BigInt(p), std::uint64_t{disc.k0} * alpha.den()));
  std::int64_t j = static_cast<std::int64_t>(disc.k0);
  while (x_power > ExactRational(1)) {
    x_power = x_power / step;
    --j;
  }
  while (x_power * step <= ExactRational(1)) {
    x_power = x_power * step;
    ++j;
  }
  report.rescale_x = {x_power, alpha.den()};
  report.rescale_k = j;
  report.normalized_excess =
      (ExactRational(BigInt(report.excess)) / (disc.mu * ExactRational(BigInt(n) * n))).to_double();

  // Per point: real partners within p^-k minus same-ball partners.
  const auto ids = prefix_class_ids(x, n, disc.k0);
  std::vector<std::uint64_t> class_size;
  for (auto id : ids) {
    if (id >= class_size.size()) class_size.resize(id + 1, 0);
    ++class_size[id];
  }
  std::vector<ExactRational> sorted(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), y[i] - disc.mu);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), y[i] + disc.mu);
    const auto real_partners = static_cast<std::uint64_t>(hi - lo) - 1;
    const auto ball_partners = class_size[ids[i]] - 1;
    if (real_partners > ball_partners) {
      report.max_excess_partners = std::max(report.max_excess_partners, real_partners - ball_partners);
    }
  }
  return report;
}

// Uniform convergence over an s grid ------------------------------------------------

struct ConvergenceRow {
  std::uint64_t n = 0;
  double sup_deviation = 0.0;
  ExactRational worst_s;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  // Last sup-deviation below the first one. Evidence only.
  bool trend_decreasing = false;
};

namespace detail {

template <class Evaluate, class Limit>
ConvergenceReport convergence_report(std::span<const ExactRational> s_grid, std::span<const std::uint64_t> n_list,
                                     Evaluate evaluate, Limit limit) {
  if (s_grid.empty() || n_list.empty()) throw std::invalid_argument("convergence report: empty grid");
  ConvergenceReport report;
  for (auto n : n_list) {
    ConvergenceRow row;
    row.n = n;
    bool first = true;
    for (const auto& s : s_grid) {
      const double deviation = std::abs(evaluate(n, s) - limit(s));
      if (first || deviation > row.sup_deviation) {
        row.sup_deviation = deviation;
        row.worst_s = s;
        first = false;
      }
    }
    report.rows.push_back(row);
  }
  report.trend_decreasing = report.rows.back().sup_deviation < report.rows.front().sup_deviation;
  return report;
}

}  // namespace detail

/// sup over the grid of |F_{N,alpha}(s) - 2s| for each N.
inline ConvergenceReport uniform_convergence_report(std::span<const ExactRational> y, Alpha alpha,
                                                    std::span<const ExactRational> s_grid,
                                                    std::span<const std::uint64_t> n_list) {
  return detail::convergence_report(
      s_grid, n_list, [&](std::uint64_t n, const ExactRational& s) { return real_pair_corr(y, n, alpha, s).f; },
      [](const ExactRational& s) { return 2.0 * s.to_double(); });
}

/// sup over the grid of |F_{N,alpha,p}(s) - 1| for each N.
inline ConvergenceReport uniform_convergence_report(std::span<const PAdicInt> x, Alpha alpha,
                                                    std::span<const ExactRational> s_grid,
                                                    std::span<const std::uint64_t> n_list) {
  return detail::convergence_report(
      s_grid, n_list, [&](std::uint64_t n, const ExactRational& s) { return padic_pair_corr(x, n, alpha, s).f; },
      [](const ExactRational&) { return 1.0; });
}

}  // namespace padic
