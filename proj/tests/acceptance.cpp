// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance --criterion N     run one criterion (1..8)
//   acceptance                   run all of them

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collision.hpp"
#include "harness.hpp"
#include "lemma4.hpp"
#include "oracles.hpp"
#include "random_model.hpp"
#include "repr_engine.hpp"
#include "serialize.hpp"
#include "verifier.hpp"

using namespace bhset;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::uint64_t> seed_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> s;
  for (auto x = lo; x <= hi; ++x) s.push_back(x);
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome backend_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::size_t mismatches = 0, tables = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = oracle::random_set(rng, 30, 200);
    const auto a = IntSet::from_sorted(v);
    for (int h : {2, 3}) {
      const std::uint64_t max_n = 200 * static_cast<std::uint64_t>(2 * h);
      auto same = [&](const ReprTable& t, const oracle::Vec& expect) {
        ++tables;
        if (!std::equal(t.counts().begin(), t.counts().end(), expect.begin(), expect.end())) ++mismatches;
      };
      same(repr_multiset(a, h, max_n, Backend::DynamicProgram), oracle::multiset_counts(v, h, max_n));
      same(repr_strict(a, h, max_n, Backend::DynamicProgram), oracle::strict_counts(v, h, max_n));
      for (const auto& f : lemma6_specs(h)) {
        if (f.size() > 3) continue;
        const std::uint64_t max_m = std::accumulate(f.begin(), f.end(), std::uint64_t{0}) * 200;
        same(repr_weighted(a, f, max_m, Backend::DynamicProgram), oracle::weighted_counts(v, f, max_m));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 60,
          std::to_string(tables) + " tables, " + std::to_string(mismatches) + " mismatches, " + fmt("%.1f s", secs)};
}

Outcome pipeline_bh1() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (int h : {2, 3}) {
    std::size_t passes = 0;
    std::vector<std::uint64_t> seeds = seed_range(1, 100);
    std::vector<char> good(seeds.size(), 0);
    parallel_for(seeds.size(), 0, [&](std::size_t i) {
      const auto b = sample_set(ModelParams(h, 100000, seeds[i])).elements;
      good[i] = is_bhg(construct_A(b, h), h, 1).holds;
    });
    for (char g : good) passes += g ? 1 : 0;
    ok = ok && passes == seeds.size();
    detail += "h=" + std::to_string(h) + ": " + std::to_string(passes) + "/100; ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 600, detail + fmt("%.1f s", secs)};
}

Outcome basis_half() {
  const auto t0 = Clock::now();
  ExperimentConfig c;
  c.h = 2;
  c.N = 10000000;
  c.seeds = seed_range(1, 20);
  c.basis_lo = 100000;
  c.basis_hi = 10000000;
  const auto report = run_experiment(c);
  const auto& g = report.aggregate;
  const double exponent = g.mean_fit_B.exponent.value_or(-1);
  const bool coverage_ok = g.median_coverage_A >= 0.99;
  const bool exponent_ok = exponent >= 0.09 && exponent <= 0.20;
  std::string detail = "median coverage(A) " + fmt("%.4f", g.median_coverage_A) + (coverage_ok ? " ok" : " < 0.99") +
                       ", mean-B fit exponent " + fmt("%.4f", exponent) + (exponent_ok ? " ok" : " outside [0.09,0.20]") +
                       ", median |B| " + fmt("%.0f", g.median_size_B) + ", |C| " + fmt("%.0f", g.median_size_C) +
                       ", |A| " + fmt("%.0f", g.median_size_A) + ", " + fmt("%.0f s", seconds_since(t0));
  return {coverage_ok && exponent_ok, detail};
}

Outcome lemma5() {
  const auto s = lemma5_check(2, 1000000, seed_range(1, 20), 10000);
  std::size_t zeros = 0;
  for (double m : s.minima) zeros += m == 0.0 ? 1 : 0;
  return {s.median > 0, "median min r_4(n)/n^(1/7) = " + fmt("%.4f", s.median) + " (empirical c), " +
                            std::to_string(zeros) + "/20 seeds with a zero"};
}

Outcome lemma4_ratios() {
  const auto t0 = Clock::now();
  using namespace lemma4;
  std::vector<RatioCurve> curves;
  for (int h : {2, 3}) {
    const double g = static_cast<double>(4 * h - 3) / (4 * h - 1);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{g, g}, {0.5, 0.5}, {0.3, 0.8}})
      curves.push_back(part_i(a, b, 10000));
    for (auto [a, b] : std::vector<std::pair<double, double>>{{g, g}, {0.6, 0.6}, {0.55, 0.9}})
      curves.push_back(part_ii(a, b, -10000, 10000));
    for (int l = 1; l <= 2 * h; ++l) curves.push_back(part_iii(l, h, 10000));
    for (int t = 1; t <= 2 * h; ++t)
      for (int s = 0; s <= t; ++s) {
        if (s > 0 && s < t && t == 2 * h) continue;  // divergent
        curves.push_back(part_iv(s, t, h, -10000, 10000));
      }
  }
  std::size_t branches = 0, bounded = 0, flat = 0;
  double worst_slope = -1e9, worst_growth = 0;
  for (const auto& c : curves)
    for (const auto& st : stability(c)) {
      ++branches;
      bounded += st.bounded;
      flat += st.flat;
      worst_slope = std::max(worst_slope, st.slope);
      worst_growth = std::max(worst_growth, st.sup_beyond / st.ratio_at_anchor);
    }
  const bool ok = bounded == branches && flat == branches;
  return {ok, std::to_string(curves.size()) + " curves, " + std::to_string(branches) + " branches: sup<=2x(M=100) " +
                  std::to_string(bounded) + "/" + std::to_string(branches) + " (worst " + fmt("%.3f", worst_growth) +
                  "x), slope<=0.01 " + std::to_string(flat) + "/" + std::to_string(branches) + " (worst " +
                  fmt("%.4f", worst_slope) + "), " + fmt("%.0f s", seconds_since(t0))};
}

Outcome decomposition() {
  std::mt19937_64 rng(6);
  std::uint64_t checked = 0, violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto v = oracle::random_set(rng, 20, 150);
    if (v.empty()) v = {1};
    const auto b = IntSet::from_sorted(v);
    const auto records = enumerate_collisions(b, 2);
    const auto s = summarize(decomposition_audit_all(b, records, 2, 4 * b.max()));
    checked += s.checked;
    violations += s.violations;
  }
  return {violations == 0, std::to_string(checked) + " (set, n) pairs, " + std::to_string(violations) + " violations"};
}

Outcome boundedness() {
  const auto t0 = Clock::now();
  const auto s = lemma6_8_check(2, {10000, 100000, 1000000}, seed_range(1, 20), {}, {});
  const auto& first = s.per_window.front();
  const auto& mid = s.per_window[1];
  const auto& last = s.per_window.back();
  const bool lemma8_ok = last.lemma8_total_median <= first.lemma8_total_median + 2 * s.h;
  std::size_t steady = 0;
  std::ostringstream l6;
  for (std::size_t j = 0; j < s.lemma6_specs.size(); ++j) {
    steady += last.lemma6_median[j] <= mid.lemma6_median[j];
    l6 << " [";
    for (std::size_t k = 0; k < s.lemma6_specs[j].size(); ++k) l6 << (k ? "," : "") << s.lemma6_specs[j][k];
    l6 << "]:" << first.lemma6_median[j] << "/" << mid.lemma6_median[j] << "/" << last.lemma6_median[j];
  }
  const bool lemma6_ok = steady == s.lemma6_specs.size();
  return {lemma8_ok && lemma6_ok,
          "lemma-8 median totals " + fmt("%.1f", first.lemma8_total_median) + " / " +
              fmt("%.1f", mid.lemma8_total_median) + " / " + fmt("%.1f", last.lemma8_total_median) +
              (lemma8_ok ? " ok" : " grew") + "; lemma-6 medians non-increasing past 1e5 for " + std::to_string(steady) +
              "/" + std::to_string(s.lemma6_specs.size()) + " specs;" + l6.str() + "; " +
              fmt("%.0f s", seconds_since(t0))};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome determinism() {
  const std::string dir = BHSET_GOLDEN_DIR;
  const auto config = config_from_json(parse_json(slurp(dir + "/config.json")));
  const std::string golden = slurp(dir + "/report.json");
  auto c1 = config, c2 = config;
  c1.threads = 1;
  c2.threads = 4;
  const std::string a = canonical_dump(to_json(run_experiment(c1)));
  const std::string b = canonical_dump(to_json(run_experiment(c2)));
  const bool replay_ok = replay(parse_json(golden), 2) == golden;
  const bool ok = a == golden && b == golden && replay_ok;
  return {ok, std::string("golden ") + (a == golden ? "matches" : "DIFFERS") + " (1 thread), " +
                  (b == golden ? "matches" : "DIFFERS") + " (4 threads), replay " + (replay_ok ? "identical" : "DIFFERS") +
                  ", " + std::to_string(golden.size()) + " bytes"};
}

struct Criterion {
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"backend oracle equivalence", backend_equivalence},
    {"construction yields B_h[1] sets", pipeline_bh1},
    {"basis half at desk scale", basis_half},
    {"lemma 5 surrogate", lemma5},
    {"lemma 4 bounded ratios", lemma4_ratios},
    {"decomposition audit", decomposition},
    {"lemma 6/8 boundedness trend", boundedness},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string write_golden;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 8));
  app.add_option("--write-golden", write_golden, "regenerate the golden report into this file and exit");
  CLI11_PARSE(app, argc, argv);

  if (!write_golden.empty()) {
    const auto config = config_from_json(parse_json(slurp(std::string(BHSET_GOLDEN_DIR) + "/config.json")));
    std::ofstream(write_golden, std::ios::binary) << canonical_dump(to_json(run_experiment(config)));
    return 0;
  }

  int failed = 0;
  for (int i = 1; i <= 8; ++i) {
    if (only && i != only) continue;
    Outcome o;
    try {
      o = kCriteria[i - 1].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d (%s): %s | %s\n", i, kCriteria[i - 1].title, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
