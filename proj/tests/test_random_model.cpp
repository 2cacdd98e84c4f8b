#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random_model.hpp"

using namespace bhset;

TEST_CASE("inclusion probability values") {
  CHECK(inclusion_probability(1, 2) == 1.0);
  CHECK(inclusion_probability(128, 2) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(std::fabs(inclusion_probability(3, 2) - 0.45624) < 1e-5);
  CHECK(std::fabs(inclusion_probability(3, 2) - std::pow(3.0, -5.0 / 7.0)) < 1e-12);
  for (int h = 2; h <= 6; ++h)
    for (std::uint64_t n : {1ull, 2ull, 17ull, 1000000ull}) {
      const double p = inclusion_probability(n, h);
      CHECK(p > 0.0);
      CHECK(p <= 1.0);
    }
}

TEST_CASE("domain and parameter errors") {
  try {
    inclusion_probability(0, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  CHECK_THROWS_AS(ModelParams(1, 10, 0), Error);
  CHECK_THROWS_AS(ModelParams(2, 0, 0), Error);
}

TEST_CASE("alpha is exact") {
  const ModelParams p(2, 100, 7);
  CHECK(p.alpha() == Rational{2, 7});
  CHECK(p.decay() == Rational{5, 7});
  CHECK(ModelParams(5, 100, 7).alpha() == Rational{2, 19});
}

TEST_CASE("sampling contract") {
  CHECK(sample_set(ModelParams(2, 1, 12345)).elements.vector() == std::vector<Element>{1});
  const auto a = sample_set(ModelParams(2, 10000, 99)).elements;
  const auto b = sample_set(ModelParams(2, 10000, 99)).elements;
  CHECK(a == b);
  CHECK(sample_set(ModelParams(2, 10000, 100)).elements != a);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_set(ModelParams(3, 5000, seed)).elements;
    REQUIRE(!s.empty());
    CHECK(s.min() == 1);
    CHECK(s.max() <= 5000);
  }
}

TEST_CASE("nested windows agree on their common prefix") {
  for (std::uint64_t seed : {1ull, 2ull, 77ull}) {
    const auto big = sample_set(ModelParams(2, 100000, seed)).elements;
    const auto small = sample_set(ModelParams(2, 3000, seed)).elements;
    CHECK(big.prefix(3000) == small);
  }
}

// Smallest k with P(X >= k) <= tail, and largest k with P(X <= k) <= tail.
static std::pair<int, int> binomial_band(int m, double p, double tail) {
  std::vector<double> pmf(m + 1);
  for (int k = 0; k <= m; ++k)
    pmf[k] = std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) + k * std::log(p) +
                      (m - k) * std::log1p(-p));
  int lo = -1, hi = m + 1;
  double acc = 0;
  for (int k = 0; k <= m && acc + pmf[k] <= tail; ++k) acc += pmf[k], lo = k;
  acc = 0;
  for (int k = m; k >= 0 && acc + pmf[k] <= tail; --k) acc += pmf[k], hi = k;
  return {lo, hi};
}

TEST_CASE("per-index inclusion frequencies within 4 sigma binomial bands") {
  constexpr int kSeeds = 500;
  constexpr std::uint64_t N = 10000;
  const double tail = 0.5 * std::erfc(4 / std::sqrt(2.0));
  std::vector<int> hits(N + 1, 0);
  for (int s = 0; s < kSeeds; ++s)
    for (auto x : sample_set(ModelParams(2, N, static_cast<std::uint64_t>(s))).elements) ++hits[x];
  int outside = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const auto [lo, hi] = binomial_band(kSeeds, inclusion_probability(n, 2), tail);
    if (hits[n] <= lo || hits[n] >= hi) ++outside;
  }
  // 10^4 indices at two-sided 6.3e-5 each: about 0.6 expected, P(more than 5) < 1e-5
  CHECK(outside <= 5);
}

TEST_CASE("expected count") {
  CHECK(expected_count(2, 1, 1) == 1.0);
  CHECK(std::fabs(expected_count(2, 1, 4) - 2.4374) < 1e-3);
  double direct = 0;
  for (int n = 1; n <= 4; ++n) direct += std::pow(n, -5.0 / 7.0);
  CHECK(expected_count(2, 1, 4) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(expected_count(2, 5, 4) == 0.0);
}

TEST_CASE("mean sample size matches the expected count") {
  constexpr std::uint64_t N = 1000000;
  const double v = expected_count(2, 1, N);
  double total = 0;
  for (std::uint64_t s = 0; s < 200; ++s) total += static_cast<double>(sample_set(ModelParams(2, N, s)).elements.size());
  const double mean = total / 200;
  CHECK(std::fabs(mean - v) <= 3 * std::sqrt(v));
  // the standard error of the mean is far tighter
  CHECK(std::fabs(mean - v) <= 4 * std::sqrt(count_variance(2, 1, N) / 200));
}
