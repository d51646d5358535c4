#include "padic/paircorr.hpp"
#include "padic/sequences.hpp"
#include "padic/verify.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace padic {
namespace {

std::vector<ExactRational> random_reals(std::size_t n, std::uint64_t seed, std::uint64_t denominator) {
  std::mt19937_64 rng(seed);
  std::vector<ExactRational> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(BigInt(rng() % denominator), BigInt(denominator));
  return out;
}

// A sequence with long shared prefixes, so every level has nontrivial classes.
std::vector<PAdicInt> clustered(std::size_t n, std::uint32_t p, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PAdicInt> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Digit> d(m);
    const std::size_t free_from = rng() % (m + 1);
    for (std::size_t j = 0; j < m; ++j) d[j] = j < free_from ? static_cast<Digit>(j % p) : static_cast<Digit>(rng() % p);
    out.push_back(PAdicInt::from_digits(p, d));
  }
  return out;
}

TEST(RealPairCorrTest, Examples) {
  const std::vector<double> wrap = {0.05, 0.95};
  auto row = real_pair_corr(std::span<const double>(wrap), 2, Alpha(), ExactRational::parse("0.3"));
  EXPECT_EQ(row.count, 2u);
  EXPECT_DOUBLE_EQ(row.f, 1.0);

  const std::vector<ExactRational> half = {ExactRational(0), ExactRational(1, 2)};
  row = real_pair_corr(half, 2, Alpha(), ExactRational(1, 2));
  EXPECT_EQ(row.count, 0u);
  EXPECT_EQ(row.f, 0.0);
  EXPECT_EQ(row.p, 0u);

  row = real_pair_corr(half, 1, Alpha(), ExactRational(100));
  EXPECT_EQ(row.count, 0u);
  EXPECT_EQ(row.f, 0.0);

  EXPECT_THROW(real_pair_corr(half, 3, Alpha(), ExactRational(1)), std::invalid_argument);
  const std::vector<ExactRational> outside = {ExactRational(0), ExactRational(1)};
  EXPECT_THROW(real_pair_corr(outside, 2, Alpha(), ExactRational(1)), std::domain_error);
}

TEST(RealPairCorrTest, FloatInputUsesExactBinaryValue) {
  // 0.1 + 0.2 != 0.3 in binary; the comparison sees the true values.
  const std::vector<double> y = {0.1, 0.4};
  const auto at = [&](const ExactRational& s) { return real_pair_corr(std::span<const double>(y), 2, Alpha(), s).count; };
  const ExactRational gap = ExactRational::from_double(0.4) - ExactRational::from_double(0.1);
  EXPECT_EQ(at(gap * ExactRational(2)), 2u);
  EXPECT_EQ(at(gap * ExactRational(2) - ExactRational(1, BigInt(1) << 80)), 0u);
}

TEST(RealPairCountAbsTest, Examples) {
  const std::vector<ExactRational> wrap = {ExactRational::parse("0.05"), ExactRational::parse("0.95")};
  EXPECT_EQ(real_pair_count_abs(wrap, 2, ExactRational::parse("0.15")), 0u);
  const std::vector<ExactRational> three = {ExactRational::parse("0.1"), ExactRational::parse("0.2"),
                                            ExactRational::parse("0.3")};
  EXPECT_EQ(real_pair_count_abs(three, 3, ExactRational::parse("0.1")), 4u);
  EXPECT_EQ(real_pair_count_abs(three, 3, ExactRational(0)), 0u);
  EXPECT_THROW(real_pair_count_abs(three, 3, ExactRational(-1)), std::invalid_argument);
}

TEST(RealPairCountTest, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto y = random_reals(60, seed, 97);  // coarse grid forces ties and exact boundaries
    for (const char* s_text : {"0", "0.5", "1", "3", "30", "60"}) {
      const auto s = ExactRational::parse(s_text);
      for (Alpha alpha : {Alpha(), Alpha(1, 2), Alpha(2, 3)}) {
        const ScaledRadius radius(s, 60, alpha);
        ASSERT_EQ(real_pair_count(y, 60, radius), brute_real_pair_count(y, 60, radius)) << seed << " " << s_text;
      }
      ASSERT_EQ(real_pair_count_abs(y, 60, s / ExactRational(60)), brute_real_pair_count_abs(y, 60, s / ExactRational(60)));
    }
  }
}

TEST(RealPairCountTest, MonotoneInS) {
  const auto y = gen_vdc(200, 2);
  std::uint64_t previous = 0;
  for (int step = 0; step <= 400; ++step) {
    const ExactRational s(step, 2);  // up to s = 200, where every pair counts
    const auto count = real_pair_corr(y, 200, Alpha(), s).count;
    EXPECT_GE(count, previous);
    EXPECT_EQ(count % 2, 0u);
    EXPECT_LE(count, 200u * 199u);
    previous = count;
  }
  EXPECT_EQ(previous, 200u * 199u);
}

TEST(PrefixCountTest, Examples) {
  const auto nat = gen_naturals(9, 3, 4);
  EXPECT_EQ(padic_pair_count_prefix(nat, 9, 1), 18u);
  EXPECT_EQ(padic_pair_count_prefix(nat, 9, 0), 72u);
  EXPECT_EQ(padic_pair_count_prefix(nat, 9, 2), 0u);
  EXPECT_THROW(padic_pair_count_prefix(nat, 9, 5), std::invalid_argument);
  EXPECT_THROW(padic_pair_count_prefix(nat, 10, 1), std::invalid_argument);

  std::vector<PAdicInt> mixed = {PAdicInt::zero(3, 4), PAdicInt::zero(5, 4)};
  EXPECT_THROW(padic_pair_count_prefix(mixed, 2, 1), std::invalid_argument);
}

TEST(PrefixCountTest, MatchesBruteForceOnTinyExhaustiveSequences) {
  // Every sequence of length <= 4 over the 8 elements of Z/2^3.
  const auto elements = all_elements(2, 3, 100);
  std::vector<std::size_t> idx;
  for (std::size_t len = 1; len <= 4; ++len) {
    idx.assign(len, 0);
    while (true) {
      std::vector<PAdicInt> seq;
      for (auto i : idx) seq.push_back(elements[i]);
      for (std::size_t k = 0; k <= 3; ++k) {
        ASSERT_EQ(padic_pair_count_prefix(seq, len, k), brute_pair_count_padic(seq, len, k));
      }
      std::size_t pos = 0;
      while (pos < len && ++idx[pos] == elements.size()) idx[pos++] = 0;
      if (pos == len) break;
    }
  }
}

TEST(PrefixCountTest, MatchesBruteForceRandomized) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::uint32_t p = std::array<std::uint32_t, 3>{2, 3, 5}[seed % 3];
    const auto xs = seed % 2 ? gen_uniform_random(250, p, 10, seed) : clustered(250, p, 10, seed);
    const auto profile = brute_pair_count_profile(xs, xs.size());
    std::uint64_t previous = xs.size() * (xs.size() - 1);
    for (std::size_t k = 0; k <= 10; ++k) {
      const auto fast = padic_pair_count_prefix(xs, xs.size(), k);
      ASSERT_EQ(fast, profile[k]);
      EXPECT_LE(fast, previous);  // non-increasing in k
      previous = fast;
    }
  }
}

TEST(PrefixCountTest, BridgeInequality) {
  // Same k-prefix means the Monna images lie in one cell of width p^-k.
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::uint32_t p = seed % 2 ? 2 : 3;
    const auto xs = clustered(150, p, 8, seed);
    std::vector<ExactRational> ys;
    for (const auto& x : xs) ys.push_back(monna(x));
    for (std::size_t k = 0; k <= 8; ++k) {
      EXPECT_LE(padic_pair_count_prefix(xs, xs.size(), k),
                real_pair_count_abs(ys, ys.size(), ExactRational::inverse_power(p, k)));
    }
  }
}

TEST(PadicPairCorrTest, Examples) {
  const auto nat = gen_naturals(9, 3, 8);
  const auto row = padic_pair_corr(nat, 9, Alpha(1, 2), ExactRational(1));
  EXPECT_EQ(row.k, 1u);
  EXPECT_EQ(row.mu, ExactRational(1, 3));
  EXPECT_EQ(row.count, 18u);
  EXPECT_EQ(exact_statistic(row), ExactRational(2, 3));
  EXPECT_DOUBLE_EQ(row.f, 2.0 / 3.0);

  const auto single = padic_pair_corr(nat, 1, Alpha(), ExactRational(1));
  EXPECT_EQ(single.count, 0u);
  EXPECT_EQ(single.f, 0.0);
}

TEST(PadicPairCorrTest, ZeroAndNegativeS) {
  std::vector<PAdicInt> xs = {PAdicInt::from_integer(3, 4, 3), PAdicInt::from_integer(3, 4, 3),
                              PAdicInt::from_integer(3, 5, 3)};
  const auto row = padic_pair_corr(xs, 3, Alpha(), ExactRational(0));
  EXPECT_EQ(row.f, 0.0);
  EXPECT_EQ(row.count, 0u);
  EXPECT_EQ(row.collisions, 2u);
  EXPECT_THROW(padic_pair_corr(xs, 3, Alpha(), ExactRational(-1)), std::invalid_argument);
}

TEST(PadicPairCorrTest, InsufficientPrecision) {
  const auto xs = gen_naturals(100, 3, 3);
  // s/N = 0.001 needs k0 = 7 > 3.
  EXPECT_THROW(padic_pair_corr(xs, 100, Alpha(), ExactRational::parse("0.1")), PrecisionError);
}

TEST(PadicPairCorrTest, ScaleIdentityIsExact) {
  const auto xs = gen_uniform_random(400, 5, 12, 17);
  for (const char* s_text : {"0.1", "0.25", "1", "2", "7/3"}) {
    for (std::size_t n : {1u, 2u, 50u, 399u, 400u}) {
      const auto row = padic_pair_corr(xs, n, Alpha(), ExactRational::parse(s_text));
      EXPECT_EQ(exact_statistic(row) * ExactRational(BigInt(n) * n) * row.mu, ExactRational(BigInt(row.count)));
      EXPECT_EQ(row.f, exact_statistic(row).to_double());
      EXPECT_EQ(row.count % 2, 0u);
    }
  }
}

TEST(IncrementalCounterTest, TracksEveryLevel) {
  const auto xs = clustered(300, 3, 9, 4);
  IncrementalPairCounter counter(3, 9);
  for (std::size_t n = 1; n <= xs.size(); ++n) {
    counter.insert(xs[n - 1]);
    if (n % 37 == 0 || n == xs.size()) {
      for (std::size_t k = 0; k <= 9; ++k) ASSERT_EQ(counter.count(k), padic_pair_count_prefix(xs, n, k));
    }
  }
  EXPECT_EQ(counter.size(), 300u);
  EXPECT_THROW(counter.insert(PAdicInt::zero(3, 8)), std::invalid_argument);
}

TEST(SweepTest, EqualsRowByRowRecomputation) {
  const auto xs = gen_uniform_random(300, 3, 16, 1);
  const std::vector<ExactRational> s_list = {ExactRational::parse("0.1"), ExactRational(1), ExactRational(2)};
  const auto rows = sweep(xs, Alpha(), s_list, 1, 300);
  ASSERT_EQ(rows.size(), 900u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    EXPECT_EQ(row.n, i / 3 + 1);
    EXPECT_EQ(row.s, s_list[i % 3]);
    const auto batch = padic_pair_corr(xs, row.n, Alpha(), row.s);
    ASSERT_EQ(row.count, batch.count);
    ASSERT_EQ(row.k, batch.k);
    ASSERT_EQ(row.mu, batch.mu);
    ASSERT_EQ(row.collisions, batch.collisions);
    ASSERT_EQ(row.f, batch.f);
  }
}

TEST(SweepTest, RationalAlphaAndPartialRange) {
  const auto xs = clustered(200, 2, 20, 9);
  const std::vector<ExactRational> s_list = {ExactRational(1, 2), ExactRational(0), ExactRational(3)};
  const auto rows = sweep(xs, Alpha(1, 2), s_list, 120, 200);
  ASSERT_EQ(rows.size(), 81u * 3);
  for (const auto& row : rows) {
    const auto batch = padic_pair_corr(xs, row.n, Alpha(1, 2), row.s);
    ASSERT_EQ(row.count, batch.count);
    ASSERT_EQ(row.k, batch.k);
  }
}

TEST(SweepTest, SingleRowAndErrors) {
  const auto xs = gen_naturals(5, 3, 8);
  const std::vector<ExactRational> s_list = {ExactRational(1)};
  const auto rows = sweep(xs, Alpha(), s_list, 1, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].f, 0.0);
  EXPECT_THROW(sweep(xs, Alpha(), s_list, 0, 1), std::invalid_argument);
  EXPECT_THROW(sweep(xs, Alpha(), s_list, 3, 2), std::invalid_argument);
  EXPECT_THROW(sweep(xs, Alpha(), s_list, 1, 6), std::invalid_argument);
  const auto shallow = gen_naturals(100, 3, 2);
  EXPECT_THROW(sweep(shallow, Alpha(), s_list, 1, 100), PrecisionError);
  EXPECT_THROW(sweep(shallow, Alpha(), s_list, 1, 100, 4), PrecisionError);
}

TEST(SweepTest, CountsAreMonotoneInN) {
  const auto xs = gen_uniform_random(500, 2, 16, 8);
  IncrementalPairCounter counter(2, 16);
  std::vector<std::uint64_t> previous(17, 0);
  for (const auto& x : xs) {
    counter.insert(x);
    for (std::size_t k = 0; k <= 16; ++k) {
      EXPECT_GE(counter.count(k), previous[k]);
      previous[k] = counter.count(k);
    }
  }
}

TEST(SweepTest, IndependentOfThreadCount) {
  const auto xs = gen_uniform_random(600, 3, 16, 42);
  const std::vector<ExactRational> s_list = {ExactRational::parse("0.1"), ExactRational::parse("0.25"),
                                             ExactRational::parse("0.5"), ExactRational(1), ExactRational(2)};
  const auto one = sweep(xs, Alpha(), s_list, 1, 600, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto many = sweep(xs, Alpha(), s_list, 1, 600, threads);
    ASSERT_EQ(many.size(), one.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      ASSERT_EQ(many[i].n, one[i].n);
      ASSERT_EQ(many[i].s, one[i].s);
      ASSERT_EQ(many[i].count, one[i].count);
      ASSERT_EQ(many[i].f, one[i].f);
    }
  }
}

std::vector<PairCorrRow> column(std::span<const PairCorrRow> rows) { return {rows.begin(), rows.end()}; }

TEST(JumpLocationsTest, Examples) {
  const auto xs = gen_naturals(120, 3, 12);
  const std::vector<ExactRational> one = {ExactRational(1)};
  EXPECT_EQ(jump_locations(column(sweep(xs, Alpha(), one, 1, 120))), (std::vector<std::uint64_t>{2, 4, 10, 28, 82}));

  const std::vector<ExactRational> two = {ExactRational(2)};
  const auto rows = sweep(xs, Alpha(), two, 1, 120);
  EXPECT_EQ(rows[1].k, 0u);  // N = 2: radius 1
  EXPECT_EQ(rows[2].k, 1u);  // N = 3: 1/3 <= 2/3
  EXPECT_EQ(rows[6].k, 2u);  // N = 7: 1/9 <= 2/7 < 1/3
  EXPECT_EQ(jump_locations(column(rows)), (std::vector<std::uint64_t>{3, 7, 19, 55}));

  const std::vector<ExactRational> tenth = {ExactRational(1, 10)};
  EXPECT_EQ(jump_locations(column(sweep(xs, Alpha(), tenth, 1, 120))), (std::vector<std::uint64_t>{1, 3, 9, 25, 73}));
}

TEST(JumpLocationsTest, NoJumpsWhileRadiusCoversEverything) {
  const auto xs = gen_naturals(10, 3, 6);
  const std::vector<ExactRational> big = {ExactRational(50)};
  EXPECT_TRUE(jump_locations(column(sweep(xs, Alpha(), big, 1, 10))).empty());
  // A run starting past N = 1 is measured against its own first row.
  const std::vector<ExactRational> one = {ExactRational(1)};
  EXPECT_EQ(jump_locations(column(sweep(xs, Alpha(), one, 5, 10))), (std::vector<std::uint64_t>{10}));
  EXPECT_TRUE(jump_locations({}).empty());
}

TEST(JumpLocationsTest, RejectsMixedOrUnsortedRows) {
  const auto xs = gen_naturals(10, 3, 6);
  const std::vector<ExactRational> s_list = {ExactRational(1), ExactRational(2)};
  EXPECT_THROW(jump_locations(column(sweep(xs, Alpha(), s_list, 1, 10))), std::invalid_argument);
}

}  // namespace
}  // namespace padic
