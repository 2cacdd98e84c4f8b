#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "error.hpp"
#include "oracles.hpp"
#include "random_model.hpp"
#include "repr_engine.hpp"

using namespace bhset;

namespace {

IntSet make(const oracle::Vec& v) { return IntSet::from_sorted(v); }

std::vector<std::uint64_t> counts_of(const ReprTable& t) { return {t.counts().begin(), t.counts().end()}; }

}  // namespace

TEST_CASE("multiset examples") {
  const auto t = repr_multiset(make({1, 2, 3}), 2, 6);
  CHECK(t[4] == 2);
  CHECK(t[2] == 1);
  CHECK(t[6] == 1);
  const auto empty = repr_multiset(IntSet{}, 3, 10);
  for (auto c : empty.counts()) CHECK(c == 0);
}

TEST_CASE("strict examples") {
  const auto t = repr_strict(make({1, 2, 3, 4}), 2, 7);
  CHECK(t[5] == 2);
  CHECK(t[7] == 1);
  CHECK(repr_strict(make({1, 2}), 2, 3)[3] == 1);
  const auto single = repr_strict(make({1, 2, 3, 9}), 1, 20);
  for (auto c : single.counts()) CHECK(c == 0);
}

TEST_CASE("weighted examples") {
  const std::vector<std::uint32_t> f{1, 2};
  CHECK(repr_weighted(make({1, 2, 3}), f, 8)[5] == 2);
  const std::vector<std::uint32_t> g{3};
  const auto t = repr_weighted(make({5}), g, 20);
  for (std::uint64_t m = 0; m <= 20; ++m) CHECK(t[m] == (m == 15 ? 1u : 0u));
}

TEST_CASE("pairsum histogram") {
  CHECK(pairsum_histogram(make({1, 2}), 1) == std::vector<std::uint64_t>{0, 1, 1});
  CHECK(pairsum_histogram(make({1, 2, 3}), 2) == std::vector<std::uint64_t>{0, 0, 1, 1, 2, 1, 1});
  const auto a = make({2, 7, 11, 30});
  const auto hist = pairsum_histogram(a, 3);
  std::uint64_t total = 0;
  for (auto c : hist) total += c;
  CHECK(total == binomial(4 + 3 - 1, 3));
}

TEST_CASE("backends agree with naive enumeration") {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = oracle::random_set(rng, 30, 200);
    const auto a = make(v);
    for (int h : {2, 3}) {
      const std::uint64_t max_n = 200 * static_cast<std::uint64_t>(h);
      const auto expect_m = oracle::multiset_counts(v, h, max_n);
      const auto expect_s = oracle::strict_counts(v, h, max_n);
      for (auto backend : {Backend::DynamicProgram, Backend::Enumeration, Backend::Auto}) {
        CHECK(counts_of(repr_multiset(a, h, max_n, backend)) == expect_m);
        CHECK(counts_of(repr_strict(a, h, max_n, backend)) == expect_s);
      }
    }
  }
}

TEST_CASE("weighted backends agree with naive enumeration") {
  std::mt19937_64 rng(7);
  const std::vector<std::vector<std::uint32_t>> specs{{1, 1, 2}, {1, 2}, {3, 1}, {1, 1, 1}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = oracle::random_set(rng, 20, 100);
    const auto d = make(v);
    for (const auto& f : specs) {
      const std::uint64_t max_m = 4 * 100;
      const auto expect = oracle::weighted_counts(v, f, max_m);
      for (auto backend : {Backend::DynamicProgram, Backend::Enumeration})
        CHECK(counts_of(repr_weighted(d, f, max_m, backend)) == expect);
    }
  }
}

TEST_CASE("mass conservation and monotonicity") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto v = oracle::random_set(rng, 25, 300);
    if (v.empty()) continue;
    const auto a = make(v);
    const int h = 3;
    const auto t = repr_multiset(a, h, h * a.max());
    CHECK(t.total() == binomial(a.size() + h - 1, h));
    const auto bigger = repr_multiset(a.with(a.max() + 13), h, h * a.max());
    for (std::uint64_t n = 0; n <= t.max_n(); ++n) CHECK(bigger[n] >= t[n]);
  }
}

TEST_CASE("overflow is reported") {
  std::vector<Element> v;
  for (Element x = 1; x <= 60; ++x) v.push_back(x);
  try {
    repr_multiset(IntSet::from_sorted(v), 30, 1800, Backend::DynamicProgram);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}

TEST_CASE("serialization round trip") {
  const std::vector<std::uint32_t> f{2, 1};
  const auto t = repr_weighted(make({1, 4, 9, 16}), f, 60);
  std::stringstream bin;
  write_binary(bin, t);
  CHECK(read_binary(bin) == t);
  std::ostringstream csv;
  write_csv(csv, repr_multiset(make({1, 2}), 2, 4));
  CHECK(csv.str() == "n,count\n0,0\n1,0\n2,1\n3,1\n4,1\n");
  std::stringstream junk("BHRX");
  CHECK_THROWS_AS(read_binary(junk), Error);
}

TEST_CASE("mean strict count matches the tuple-sum oracle") {
  constexpr int kSeeds = 200;
  constexpr std::uint64_t N = 200;
  for (int k : {2, 3}) {
    std::vector<double> sum(N + 1, 0), sq(N + 1, 0);
    for (int s = 0; s < kSeeds; ++s) {
      const auto b = sample_set(ModelParams(2, N, static_cast<std::uint64_t>(1000 + s))).elements;
      const auto t = repr_strict(b, k, N);
      for (std::uint64_t n = 0; n <= N; ++n) {
        sum[n] += static_cast<double>(t[n]);
        sq[n] += static_cast<double>(t[n]) * static_cast<double>(t[n]);
      }
    }
    for (std::uint64_t n : {20ull, 50ull, 100ull, 150ull, 200ull}) {
      // E r_k(n) = sum over strictly increasing k-tuples of prod p(a_i)
      double expect = 0;
      std::function<void(std::uint64_t, int, std::uint64_t, double)> rec = [&](std::uint64_t from, int left,
                                                                                std::uint64_t rest, double prod) {
        if (left == 0) {
          if (rest == 0) expect += prod;
          return;
        }
        for (std::uint64_t x = from; x <= rest; ++x) rec(x + 1, left - 1, rest - x, prod * std::pow(double(x), -5.0 / 7.0));
      };
      rec(1, k, n, 1.0);
      const double mean = sum[n] / kSeeds;
      const double var = sq[n] / kSeeds - mean * mean;
      const double se = std::sqrt(std::max(var, 1e-9) / kSeeds);
      CHECK(std::fabs(mean - expect) <= 4 * se + 1e-9);
    }
  }
}
