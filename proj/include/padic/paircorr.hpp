#pragma once

#include "padic/disc_measure.hpp"
#include "padic/exact_rational.hpp"
#include "padic/padic_int.hpp"
#include "padic/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace padic {

/// One evaluation of a pair-correlation statistic.
///
/// count is over ordered pairs (i, j), i != j. Real rows carry p = 0, k = 0
/// and mu = 0. For p-adic rows F = count * p^k / N^2 up to the final rounding,
/// and collisions counts ordered pairs equal in all m digits.
struct PairCorrRow {
  std::uint64_t n = 0;
  Alpha alpha;
  ExactRational s;
  std::uint32_t p = 0;
  std::size_t k = 0;
  ExactRational mu;
  std::uint64_t count = 0;
  std::uint64_t collisions = 0;
  double f = 0.0;
};

/// F of a p-adic row as an exact rational, count / (N^2 mu).
inline ExactRational exact_statistic(const PairCorrRow& row) {
  if (row.count == 0) return ExactRational(0);
  return ExactRational(BigInt(row.count)) / (ExactRational(BigInt(row.n) * row.n) * row.mu);
}

// Real statistic -------------------------------------------------------------

namespace detail {

inline void require_length(std::size_t n, std::size_t available) {
  if (n > available) {
    throw std::invalid_argument("N = " + std::to_string(n) + " exceeds sequence length " + std::to_string(available));
  }
}

// Ordered pairs among sorted values whose difference d = y_j - y_i (j > i)
// satisfies within(d), or within(1 - d) when wrap is set. within must be
// monotone: true on a prefix of increasing d.
template <class Within>
std::uint64_t count_sorted_pairs(std::span<const ExactRational> sorted, Within within, bool wrap) {
  const std::size_t n = sorted.size();
  std::uint64_t unordered = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& yi = sorted[i];
    const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(i + 1);
    const auto near_end = std::partition_point(first, sorted.end(), [&](const ExactRational& yj) {
      return within(yj - yi);
    });
    auto pairs = static_cast<std::uint64_t>(near_end - first);
    if (wrap) {
      const auto far_begin = std::partition_point(first, sorted.end(), [&](const ExactRational& yj) {
        return !within(ExactRational(1) - (yj - yi));
      });
      if (far_begin >= near_end) pairs += static_cast<std::uint64_t>(sorted.end() - far_begin);
      else pairs += static_cast<std::uint64_t>(sorted.end() - near_end);
    }
    unordered += pairs;
  }
  return 2 * unordered;
}

inline std::vector<ExactRational> sorted_prefix(std::span<const ExactRational> y, std::size_t n) {
  require_length(n, y.size());
  std::vector<ExactRational> out(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Ordered pairs among y_1..y_N with |y_k - y_l| <= threshold, no wrap-around.
inline std::uint64_t real_pair_count_abs(std::span<const ExactRational> y, std::size_t n,
                                         const ExactRational& threshold) {
  if (threshold.is_negative()) throw std::invalid_argument("real_pair_count_abs: threshold must be >= 0");
  const auto sorted = detail::sorted_prefix(y, n);
  return detail::count_sorted_pairs(sorted, [&](const ExactRational& d) { return d <= threshold; }, false);
}

/// Ordered pairs among y_1..y_N in [0, 1) whose nearest-integer distance lies
/// within the radius.
inline std::uint64_t real_pair_count(std::span<const ExactRational> y, std::size_t n, const ScaledRadius& radius) {
  const auto sorted = detail::sorted_prefix(y, n);
  if (!sorted.empty() && (sorted.front().is_negative() || sorted.back() >= ExactRational(1))) {
    throw std::domain_error("real pair correlation expects values in [0, 1)");
  }
  return detail::count_sorted_pairs(sorted, [&](const ExactRational& d) { return radius.contains(d); }, true);
}

/// F_{N,alpha}(s) = #{k != l : ||y_k - y_l|| <= s/N^alpha} / N^(2 - alpha).
inline PairCorrRow real_pair_corr(std::span<const ExactRational> y, std::size_t n, Alpha alpha,
                                  const ExactRational& s) {
  if (n == 0) throw std::invalid_argument("real_pair_corr: N must be >= 1");
  if (s.is_negative()) throw std::invalid_argument("real_pair_corr: s must be >= 0");
  PairCorrRow row;
  row.n = n;
  row.alpha = alpha;
  row.s = s;
  row.count = real_pair_count(y, n, ScaledRadius(s, n, alpha));
  row.f = static_cast<double>(row.count) / std::pow(static_cast<double>(n), 2.0 - alpha.to_double());
  return row;
}

/// Doubles enter through their exact binary values; no tolerance is applied.
inline PairCorrRow real_pair_corr(std::span<const double> y, std::size_t n, Alpha alpha, const ExactRational& s) {
  std::vector<ExactRational> exact;
  exact.reserve(y.size());
  for (double v : y) exact.push_back(ExactRational::from_double(v));
  return real_pair_corr(std::span<const ExactRational>(exact), n, alpha, s);
}

// p-adic statistic -------------------------------------------------------------

namespace detail {

inline void require_uniform(std::span<const PAdicInt> x, std::size_t n) {
  require_length(n, x.size());
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i].prime() != x[0].prime() || x[i].precision() != x[0].precision()) {
      throw std::invalid_argument("sequence elements must share p and precision");
    }
  }
}

}  // namespace detail

/// Class id of each of the first N elements when grouped by their first k
/// digits. Level j+1 classes refine level j classes.
inline std::vector<std::uint32_t> prefix_class_ids(std::span<const PAdicInt> x, std::size_t n, std::size_t k) {
  detail::require_uniform(x, n);
  if (n > 0 && k > x[0].precision()) {
    throw std::invalid_argument("prefix length k = " + std::to_string(k) + " exceeds precision " +
                                std::to_string(x[0].precision()));
  }
  std::vector<std::uint32_t> ids(n, 0);
  if (n == 0) return ids;
  const std::uint64_t p = x[0].prime();
  std::unordered_map<std::uint64_t, std::uint32_t> next;
  next.reserve(2 * n);
  for (std::size_t level = 0; level < k; ++level) {
    next.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t key = std::uint64_t{ids[i]} * p + x[i].digits()[level];
      ids[i] = next.try_emplace(key, static_cast<std::uint32_t>(next.size())).first->second;
    }
    if (next.size() == n) break;  // all singletons; deeper levels cannot merge
  }
  return ids;
}

/// Ordered pairs i != j among the first N elements sharing their first k
/// digits, i.e. |x_i - x_j|_p <= p^-k at precision m. Sums c(c-1) over the
/// prefix classes.
inline std::uint64_t padic_pair_count_prefix(std::span<const PAdicInt> x, std::size_t n, std::size_t k) {
  const auto ids = prefix_class_ids(x, n, k);
  std::vector<std::uint64_t> sizes;
  for (auto id : ids) {
    if (id >= sizes.size()) sizes.resize(id + 1, 0);
    ++sizes[id];
  }
  std::uint64_t count = 0;
  for (auto c : sizes) count += c * (c - 1);
  return count;
}

namespace detail {

inline PairCorrRow padic_row(std::uint32_t p, std::size_t m, std::uint64_t n, Alpha alpha, const ExactRational& s,
                             std::size_t k, std::uint64_t count, std::uint64_t collisions) {
  PairCorrRow row;
  row.n = n;
  row.alpha = alpha;
  row.s = s;
  row.p = p;
  row.collisions = collisions;
  if (s.is_zero()) {
    // No pairs at distance <= 0 among distinct points; the measure degenerates.
    row.k = m;
    row.mu = ExactRational(0);
    return row;
  }
  row.k = k;
  row.mu = ExactRational::inverse_power(p, k);
  row.count = count;
  row.f = exact_statistic(row).to_double();
  return row;
}

inline std::size_t checked_radius_class(std::uint32_t p, std::size_t m, const ScaledRadius& radius,
                                        std::size_t start = 0) {
  const std::size_t k = radius.radius_class(p, start);
  if (k > m) {
    throw PrecisionError("radius class k = " + std::to_string(k) + " at N = " + std::to_string(radius.n()) +
                         ", s = " + radius.s().to_display() + " exceeds precision m = " + std::to_string(m));
  }
  return k;
}

}  // namespace detail

/// F_{N,alpha,p}(s) = count / (N^2 mu(D_p(0, s/N^alpha))), with count taken at
/// the radius class k0 of s/N^alpha.
inline PairCorrRow padic_pair_corr(std::span<const PAdicInt> x, std::size_t n, Alpha alpha, const ExactRational& s) {
  if (n == 0) throw std::invalid_argument("padic_pair_corr: N must be >= 1");
  if (s.is_negative()) throw std::invalid_argument("padic_pair_corr: s must be >= 0");
  detail::require_uniform(x, n);
  const std::uint32_t p = x[0].prime();
  const std::size_t m = x[0].precision();
  const std::uint64_t collisions = padic_pair_count_prefix(x, n, m);
  if (s.is_zero()) return detail::padic_row(p, m, n, alpha, s, m, 0, collisions);
  const std::size_t k = detail::checked_radius_class(p, m, ScaledRadius(s, n, alpha));
  const std::uint64_t count = k == m ? collisions : padic_pair_count_prefix(x, n, k);
  return detail::padic_row(p, m, n, alpha, s, k, count, collisions);
}

/// Pair counts at every prefix level 0..m, maintained under insertion.
///
/// Elements live in a digit trie; inserting into a class of size c at level k
/// adds 2c ordered pairs to level k.
class IncrementalPairCounter {
 public:
  IncrementalPairCounter(std::uint32_t p, std::size_t m) : p_(p), m_(m), counts_(m + 1, 0), sizes_(1, 0) {}

  void insert(const PAdicInt& x) {
    if (x.prime() != p_ || x.precision() != m_) {
      throw std::invalid_argument("IncrementalPairCounter: element differs in p or precision");
    }
    std::uint32_t node = 0;
    counts_[0] += 2 * sizes_[node]++;
    const auto digits = x.digits();
    for (std::size_t level = 0; level < m_; ++level) {
      const std::uint64_t key = std::uint64_t{node} * p_ + digits[level];
      const auto [it, created] = children_.try_emplace(key, static_cast<std::uint32_t>(sizes_.size()));
      if (created) sizes_.push_back(0);
      node = it->second;
      counts_[level + 1] += 2 * sizes_[node]++;
    }
    ++size_;
  }

  std::uint64_t count(std::size_t k) const { return counts_.at(k); }
  std::size_t size() const { return size_; }

 private:
  std::uint32_t p_;
  std::size_t m_;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> sizes_;
  std::unordered_map<std::uint64_t, std::uint32_t> children_;
};

/// Rows for every (N, s) with N in [n_from, n_to], ordered by N and then by the
/// position of s in s_list. Equal to calling padic_pair_corr for each row.
///
/// The s values are split across up to `threads` workers, each owning its own
/// counter; the output does not depend on the worker count.
inline std::vector<PairCorrRow> sweep(std::span<const PAdicInt> x, Alpha alpha, std::span<const ExactRational> s_list,
                                      std::size_t n_from, std::size_t n_to, unsigned threads = 1) {
  if (n_from == 0 || n_from > n_to) throw std::invalid_argument("sweep: need 1 <= N_from <= N_to");
  detail::require_uniform(x, n_to);
  for (const auto& s : s_list) {
    if (s.is_negative()) throw std::invalid_argument("sweep: s must be >= 0");
  }
  if (s_list.empty()) return {};
  const std::uint32_t p = x[0].prime();
  const std::size_t m = x[0].precision();
  const std::size_t rows_per_s = n_to - n_from + 1;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, s_list.size()));

  std::vector<std::vector<PairCorrRow>> per_s(s_list.size());
  std::vector<std::exception_ptr> errors(workers);

  const auto work = [&](std::size_t worker) {
    try {
      std::vector<std::size_t> mine;
      for (std::size_t i = worker; i < s_list.size(); i += workers) {
        mine.push_back(i);
        per_s[i].reserve(rows_per_s);
      }
      std::vector<std::size_t> k(s_list.size(), 0);
      IncrementalPairCounter counter(p, m);
      for (std::size_t n = 1; n <= n_to; ++n) {
        counter.insert(x[n - 1]);
        if (n < n_from) continue;
        for (std::size_t i : mine) {
          const auto& s = s_list[i];
          if (!s.is_zero()) k[i] = detail::checked_radius_class(p, m, ScaledRadius(s, n, alpha), k[i]);
          per_s[i].push_back(detail::padic_row(p, m, n, alpha, s, k[i], counter.count(k[i]), counter.count(m)));
        }
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<PairCorrRow> rows;
  rows.reserve(rows_per_s * s_list.size());
  for (std::size_t r = 0; r < rows_per_s; ++r) {
    for (auto& column : per_s) rows.push_back(std::move(column[r]));
  }
  return rows;
}

/// N values at which the radius class k rises, for rows of a single s sorted
/// by N. A run starting at N = 1 is measured against k = 0 (the whole space).
inline std::vector<std::uint64_t> jump_locations(std::span<const PairCorrRow> rows) {
  std::vector<std::uint64_t> jumps;
  if (rows.empty()) return jumps;
  std::size_t previous = rows.front().n == 1 ? 0 : rows.front().k;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.s != rows.front().s) throw std::invalid_argument("jump_locations: rows mix several s values");
    if (i > 0 && row.n <= rows[i - 1].n) throw std::invalid_argument("jump_locations: rows not sorted by N");
    if (row.k != previous) jumps.push_back(row.n);
    previous = row.k;
  }
  return jumps;
}

}  // namespace padic
