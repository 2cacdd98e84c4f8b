#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "collision.hpp"
#include "verifier.hpp"

namespace bhset {

struct ExperimentConfig {
  int h = 2;
  std::uint64_t N = 0;
  std::vector<std::uint64_t> seeds;
  // 0 selects the default: lo = max(10^3, sqrt N) capped at N, hi = N
  std::uint64_t basis_lo = 0;
  std::uint64_t basis_hi = 0;
  std::uint64_t lemma5_lo = 0;
  // 0 selects min(N, 10^6)
  std::uint64_t audit_max_n = 0;
  // empty selects every Lemma-6 weight vector with at most 3 entries
  std::vector<std::vector<std::uint32_t>> tracked;
  unsigned threads = 0;

  /// Validates and fills every defaulted field.
  ExperimentConfig resolved() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct WeightedMax {
  std::vector<std::uint32_t> f;
  std::uint64_t max_count = 0;
  std::uint64_t argmax = 0;
};

struct SeedRecord {
  std::uint64_t seed = 0;
  std::size_t size_B = 0;
  std::size_t size_C = 0;
  std::size_t size_A = 0;
  std::size_t collisions_distinct = 0;
  std::size_t collisions_weighted = 0;
  BhgResult bhg;
  BasisReport basis_A;
  BasisReport basis_B;
  double lemma5_min = 0.0;
  std::uint64_t lemma5_argmin = 0;
  std::vector<WeightedMax> weighted;
  AuditSummary audit;
};

struct Aggregate {
  std::size_t runs = 0;
  std::size_t bhg_passes = 0;
  double median_size_B = 0.0;
  double median_size_C = 0.0;
  double median_size_A = 0.0;
  double median_coverage_A = 0.0;
  double median_coverage_B = 0.0;
  double median_lemma5_min = 0.0;
  std::uint64_t audit_violations = 0;
  /// Fit of the seed-mean R_{2h,B}(n) over the basis window.
  PowerFit mean_fit_B;
};

struct ExperimentReport {
  ExperimentConfig config;
  double expected_size_B = 0.0;
  double size_B_sd = 0.0;
  std::vector<SeedRecord> records;  // ordered by seed
  Aggregate aggregate;
};

/// sample -> collisions -> C -> A -> verification for one seed. Throws
/// Invariant when A fails to be a B_h[1]-set.
SeedRecord run_construction(const ExperimentConfig& config, std::uint64_t seed);
SeedRecord run_construction(int h, std::uint64_t N, std::uint64_t seed);

/// Runs every seed (in parallel when threads > 1) and reduces in seed order.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Rows (n, R_{2h,B}(n), R_{2h,A}(n)) for n in [lo, hi].
struct SeriesRow {
  std::uint64_t n;
  std::uint64_t count_B;
  std::uint64_t count_A;
};
std::vector<SeriesRow> construction_series(int h, std::uint64_t N, std::uint64_t seed, std::uint64_t lo,
                                           std::uint64_t hi);

struct Lemma5Summary {
  int h = 2;
  std::uint64_t N = 0;
  std::uint64_t n_lo = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> minima;  // per seed, min r_{2h,B}(n) / n^(1/(4h-1))
  std::vector<std::uint64_t> argmin;
  double median = 0.0;
  /// Empirical c: the median of the per-seed minima.
  double empirical_c() const { return median; }
};

Lemma5Summary lemma5_check(int h, std::uint64_t N, const std::vector<std::uint64_t>& seeds, std::uint64_t n_lo,
                           unsigned threads = 0);

/// Lemma-6 / Lemma-8 statistics on nested windows of one sample per seed.
struct NestedStats {
  std::uint64_t N = 0;
  // indexed [seed][spec]
  std::vector<std::vector<std::uint64_t>> lemma6_max;
  std::vector<std::vector<std::uint64_t>> lemma8_count;
  std::vector<std::uint64_t> lemma8_total;
  std::vector<double> lemma6_median;
  std::vector<double> lemma8_median;
  double lemma8_total_median = 0.0;
};

struct Lemma68Summary {
  int h = 2;
  std::vector<std::uint64_t> windows;  // ascending
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<std::uint32_t>> lemma6_specs;
  std::vector<WeightSpec> lemma8_specs;
  std::vector<NestedStats> per_window;
};

/// Specs are validated against the Lemma-6 and Lemma-8 constraints; empty
/// lists select the full generated families.
Lemma68Summary lemma6_8_check(int h, std::vector<std::uint64_t> windows, const std::vector<std::uint64_t>& seeds,
                              std::vector<std::vector<std::uint32_t>> lemma6, std::vector<WeightSpec> lemma8,
                              unsigned threads = 0);

double median(std::vector<double> values);

/// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace bhset
