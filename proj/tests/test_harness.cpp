#include <doctest.h>

#include <random>
#include <sstream>

#include "collision.hpp"
#include "error.hpp"
#include "harness.hpp"
#include "oracles.hpp"
#include "random_model.hpp"
#include "serialize.hpp"

using namespace bhset;

TEST_CASE("run_construction is deterministic") {
  const auto a = to_json(run_construction(2, 1000, 1)).dump();
  const auto b = to_json(run_construction(2, 1000, 1)).dump();
  CHECK(a == b);
  const auto r = run_construction(2, 1000, 1);
  CHECK(r.bhg.holds);
  CHECK(r.size_A + r.size_C == r.size_B);
  CHECK(r.audit.violations == 0);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.h = 2;
  c.N = 9;
  c.seeds = {1};
  CHECK_THROWS_AS(c.resolved(), Error);
  c.N = 1000;
  c.seeds = {1, 2, 1};
  CHECK_THROWS_AS(c.resolved(), Error);
  c.seeds = {3, 1};
  const auto r = c.resolved();
  CHECK(r.basis_lo == 1000);
  CHECK(r.basis_hi == 1000);
  CHECK(!r.tracked.empty());
  c.tracked = {{1, 1, 1, 1}};
  CHECK_THROWS_AS(c.resolved(), Error);
}

TEST_CASE("default cutoffs") {
  ExperimentConfig c;
  c.h = 2;
  c.N = 10000000;
  c.seeds = {1};
  const auto r = c.resolved();
  CHECK(r.basis_lo == 3163);
  CHECK(r.lemma5_lo == 3163);
  CHECK(r.audit_max_n == 1000000);
}

TEST_CASE("experiment report ordering and replay") {
  ExperimentConfig c;
  c.h = 2;
  c.N = 3000;
  c.seeds = {5, 2, 9};
  c.threads = 2;
  const auto report = run_experiment(c);
  REQUIRE(report.records.size() == 3);
  CHECK(report.records[0].seed == 2);
  CHECK(report.records[2].seed == 9);
  CHECK(report.aggregate.bhg_passes == 3);
  const std::string text = canonical_dump(to_json(report));
  CHECK(replay(parse_json(text), 1) == text);
  c.threads = 1;
  CHECK(canonical_dump(to_json(run_experiment(c))) == text);
}

TEST_CASE("series rows cover the window") {
  const auto rows = construction_series(2, 5000, 4, 100, 900);
  CHECK(rows.size() == 801);
  CHECK(rows.front().n == 100);
  for (const auto& r : rows) CHECK(r.count_A <= r.count_B);
  std::ostringstream os;
  write_series_csv(os, rows);
  std::istringstream in(os.str());
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == rows.size() + 1);
}

TEST_CASE("lemma 5 summary") {
  const auto s = lemma5_check(2, 100000, {3, 1, 2}, 10000);
  CHECK(s.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(s.minima.size() == 3);
  CHECK(s.median >= 0);
  // small n lie below the basis onset
  const auto low = lemma5_check(2, 2000, {1}, 1);
  CHECK(low.minima[0] == 0.0);
}

TEST_CASE("lemma 6/8 statistics on nested windows") {
  const auto s = lemma6_8_check(2, {20000, 2000}, {1, 2, 3, 4}, {{1, 2}, {1, 1, 1}}, {WeightSpec{{2}, {1, 1}}});
  REQUIRE(s.per_window.size() == 2);
  CHECK(s.windows == std::vector<std::uint64_t>{2000, 20000});
  CHECK(s.lemma8_specs[0] == family_of(WeightSpec{{1, 1}, {2}}));
  for (std::size_t i = 0; i < s.seeds.size(); ++i) {
    CHECK(s.per_window[0].lemma8_total[i] <= s.per_window[1].lemma8_total[i]);
    CHECK(s.per_window[0].lemma6_max[i][0] <= s.per_window[1].lemma6_max[i][0]);
  }
  CHECK_THROWS_AS(lemma6_8_check(2, {1000}, {1}, {{1, 1, 1, 1}}, {}), Error);
}

TEST_CASE("lemma 6 maximum against the naive oracle") {
  const std::vector<std::uint32_t> f{1, 2};
  const auto b = sample_set(ModelParams(2, 100000, 8)).elements;
  const std::vector<Element> sub(b.begin(), b.begin() + std::min<std::size_t>(20, b.size()));
  const auto s = lemma6_8_check(2, {sub.back()}, {8}, {f}, {});
  const auto counts = oracle::weighted_counts(sub, f, 3 * sub.back());
  CHECK(s.per_window[0].lemma6_max[0][0] == *std::max_element(counts.begin(), counts.end()));
}
