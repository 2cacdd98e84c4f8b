#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "error.hpp"
#include "random_model.hpp"
#include "repr_engine.hpp"

namespace bhset {

namespace {

std::uint64_t default_lo(std::uint64_t N) {
  const auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(N))));
  return std::min(N, std::max<std::uint64_t>(1000, root));
}

std::uint64_t weight_sum(const std::vector<std::uint32_t>& f) {
  return std::accumulate(f.begin(), f.end(), std::uint64_t{0});
}

WeightedMax weighted_max(const IntSet& b, const std::vector<std::uint32_t>& f) {
  WeightedMax w;
  w.f = f;
  if (b.empty()) return w;
  const auto table = repr_weighted(b, f, weight_sum(f) * b.max());
  const auto counts = table.counts();
  for (std::uint64_t m = 0; m < counts.size(); ++m)
    if (counts[m] > w.max_count) {
      w.max_count = counts[m];
      w.argmax = m;
    }
  return w;
}

struct Lemma5Min {
  double value = 0.0;
  std::uint64_t argmin = 0;
};

Lemma5Min lemma5_min(const IntSet& b, int h, std::uint64_t lo, std::uint64_t hi) {
  const auto table = repr_strict(b, 2 * h, hi);
  const double exponent = 1.0 / static_cast<double>(4 * h - 1);
  Lemma5Min best{std::numeric_limits<double>::infinity(), lo};
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double v = static_cast<double>(table[n]) / std::pow(static_cast<double>(n), exponent);
    if (v < best.value) best = {v, n};
    if (best.value == 0.0) break;
  }
  return best;
}

SeedRecord construct(const ExperimentConfig& c, std::uint64_t seed, std::vector<std::uint64_t>* sum_B,
                     std::mutex* sum_lock) {
  const auto sample = sample_set(ModelParams(c.h, c.N, seed));
  const IntSet& b = sample.elements;
  const auto records = enumerate_collisions(b, c.h);
  const IntSet deleted = deletion_set(records);
  const IntSet a = b.minus(deleted);

  SeedRecord r;
  r.seed = seed;
  r.size_B = b.size();
  r.size_C = deleted.size();
  r.size_A = a.size();
  for (const auto& rec : records)
    (rec.kind == CollisionKind::Distinct2h ? r.collisions_distinct : r.collisions_weighted) += 1;

  r.bhg = is_bhg(a, c.h, 1);
  if (!r.bhg.holds)
    fail(ErrorCode::Invariant, "A is not a B_h[1]-set for seed " + std::to_string(seed) + ", witness n = " +
                                   std::to_string(*r.bhg.witness));

  {
    const auto table_B = repr_multiset(b, 2 * c.h, c.basis_hi);
    r.basis_B = basis_window(table_B, c.basis_lo, c.basis_hi);
    if (sum_B) {
      std::lock_guard lock(*sum_lock);
      const auto counts = table_B.counts();
      for (std::uint64_t n = 0; n < counts.size(); ++n) (*sum_B)[n] += counts[n];
    }
  }
  r.basis_A = basis_window(repr_multiset(a, 2 * c.h, c.basis_hi), c.basis_lo, c.basis_hi);

  const auto m = lemma5_min(b, c.h, c.lemma5_lo, c.N);
  r.lemma5_min = m.value;
  r.lemma5_argmin = m.argmin;

  for (const auto& f : c.tracked) r.weighted.push_back(weighted_max(b, f));

  const auto audits = decomposition_audit_tables(b, records, c.h, c.audit_max_n);
  r.audit = summarize(audits);
  return r;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_lock);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ExperimentConfig ExperimentConfig::resolved() const {
  validate_order(h);
  if (N < 10) fail(ErrorCode::InvalidArgument, "N must be >= 10");
  if (seeds.empty()) fail(ErrorCode::InvalidArgument, "at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    fail(ErrorCode::InvalidArgument, "seeds must be distinct");
  ExperimentConfig c = *this;
  if (c.basis_hi == 0) c.basis_hi = N;
  if (c.basis_lo == 0) c.basis_lo = std::min(default_lo(N), c.basis_hi);
  if (c.lemma5_lo == 0) c.lemma5_lo = default_lo(N);
  if (c.audit_max_n == 0) c.audit_max_n = std::min<std::uint64_t>(N, 1000000);
  if (c.basis_lo < 1 || c.basis_lo > c.basis_hi || c.basis_hi > N)
    fail(ErrorCode::InvalidArgument, "basis window must satisfy 1 <= lo <= hi <= N");
  if (c.lemma5_lo < 1 || c.lemma5_lo > N) fail(ErrorCode::InvalidArgument, "lemma 5 cutoff must lie in [1, N]");
  if (c.tracked.empty()) {
    for (auto& f : lemma6_specs(h))
      if (f.size() <= 3) c.tracked.push_back(f);
  }
  for (const auto& f : c.tracked) validate_lemma6_spec(f, h);
  return c;
}

SeedRecord run_construction(const ExperimentConfig& config, std::uint64_t seed) {
  return construct(config.resolved(), seed, nullptr, nullptr);
}

SeedRecord run_construction(int h, std::uint64_t N, std::uint64_t seed) {
  ExperimentConfig c;
  c.h = h;
  c.N = N;
  c.seeds = {seed};
  return run_construction(c, seed);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config.resolved();
  const auto& c = report.config;
  report.expected_size_B = expected_count(c.h, 1, c.N);
  report.size_B_sd = std::sqrt(count_variance(c.h, 1, c.N));

  std::vector<std::uint64_t> order = c.seeds;
  std::sort(order.begin(), order.end());
  std::vector<std::uint64_t> sum_B(c.basis_hi + 1, 0);
  std::mutex lock;
  report.records.resize(order.size());
  parallel_for(order.size(), c.threads,
               [&](std::size_t i) { report.records[i] = construct(c, order[i], &sum_B, &lock); });

  auto& g = report.aggregate;
  g.runs = report.records.size();
  std::vector<double> sb, sc, sa, cov_a, cov_b, l5;
  for (const auto& r : report.records) {
    g.bhg_passes += r.bhg.holds ? 1 : 0;
    g.audit_violations += r.audit.violations;
    sb.push_back(static_cast<double>(r.size_B));
    sc.push_back(static_cast<double>(r.size_C));
    sa.push_back(static_cast<double>(r.size_A));
    cov_a.push_back(r.basis_A.coverage);
    cov_b.push_back(r.basis_B.coverage);
    l5.push_back(r.lemma5_min);
  }
  g.median_size_B = median(sb);
  g.median_size_C = median(sc);
  g.median_size_A = median(sa);
  g.median_coverage_A = median(cov_a);
  g.median_coverage_B = median(cov_b);
  g.median_lemma5_min = median(l5);
  g.mean_fit_B = fit_dyadic_power_law(std::span<const std::uint64_t>(sum_B), c.basis_lo, c.basis_hi);
  // the fit of the sum differs from the fit of the mean only in the coefficient
  if (g.mean_fit_B.coefficient) *g.mean_fit_B.coefficient /= static_cast<double>(g.runs);
  return report;
}

std::vector<SeriesRow> construction_series(int h, std::uint64_t N, std::uint64_t seed, std::uint64_t lo,
                                           std::uint64_t hi) {
  if (lo > hi || hi > N) fail(ErrorCode::InvalidArgument, "series window must satisfy lo <= hi <= N");
  const auto sample = sample_set(ModelParams(h, N, seed));
  const IntSet a = construct_A(sample.elements, h);
  const auto tb = repr_multiset(sample.elements, 2 * h, hi);
  const auto ta = repr_multiset(a, 2 * h, hi);
  std::vector<SeriesRow> rows;
  rows.reserve(hi - lo + 1);
  for (std::uint64_t n = lo; n <= hi; ++n) rows.push_back({n, tb[n], ta[n]});
  return rows;
}

Lemma5Summary lemma5_check(int h, std::uint64_t N, const std::vector<std::uint64_t>& seeds, std::uint64_t n_lo,
                           unsigned threads) {
  validate_order(h);
  if (seeds.empty()) fail(ErrorCode::InvalidArgument, "at least one seed is required");
  if (n_lo == 0) n_lo = default_lo(N);
  if (n_lo > N) fail(ErrorCode::InvalidArgument, "n_lo must not exceed N");
  Lemma5Summary s;
  s.h = h;
  s.N = N;
  s.n_lo = n_lo;
  s.seeds = seeds;
  std::sort(s.seeds.begin(), s.seeds.end());
  s.minima.resize(s.seeds.size());
  s.argmin.resize(s.seeds.size());
  parallel_for(s.seeds.size(), threads, [&](std::size_t i) {
    const auto b = sample_set(ModelParams(h, N, s.seeds[i])).elements;
    const auto m = lemma5_min(b, h, n_lo, N);
    s.minima[i] = m.value;
    s.argmin[i] = m.argmin;
  });
  s.median = median(s.minima);
  return s;
}

Lemma68Summary lemma6_8_check(int h, std::vector<std::uint64_t> windows, const std::vector<std::uint64_t>& seeds,
                              std::vector<std::vector<std::uint32_t>> lemma6, std::vector<WeightSpec> lemma8,
                              unsigned threads) {
  validate_order(h);
  if (windows.empty()) fail(ErrorCode::InvalidArgument, "at least one window is required");
  if (seeds.empty()) fail(ErrorCode::InvalidArgument, "at least one seed is required");
  std::sort(windows.begin(), windows.end());
  windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
  if (windows.front() < 1) fail(ErrorCode::InvalidArgument, "windows must be positive");
  if (lemma6.empty()) lemma6 = lemma6_specs(h);
  for (const auto& f : lemma6) validate_lemma6_spec(f, h);
  if (lemma8.empty()) lemma8 = lemma8_specs(h);
  for (auto& spec : lemma8) {
    validate_lemma8_spec(spec, h);
    spec = family_of(spec);
  }

  Lemma68Summary out;
  out.h = h;
  out.windows = windows;
  out.seeds = seeds;
  std::sort(out.seeds.begin(), out.seeds.end());
  out.lemma6_specs = lemma6;
  out.lemma8_specs = lemma8;
  out.per_window.resize(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    auto& st = out.per_window[w];
    st.N = windows[w];
    st.lemma6_max.assign(out.seeds.size(), std::vector<std::uint64_t>(lemma6.size(), 0));
    st.lemma8_count.assign(out.seeds.size(), std::vector<std::uint64_t>(lemma8.size(), 0));
    st.lemma8_total.assign(out.seeds.size(), 0);
  }

  parallel_for(out.seeds.size(), threads, [&](std::size_t i) {
    const auto full = sample_set(ModelParams(h, windows.back(), out.seeds[i])).elements;
    const auto records = enumerate_collisions(full, h);
    for (std::size_t w = 0; w < windows.size(); ++w) {
      auto& st = out.per_window[w];
      const IntSet b = full.prefix(windows[w]);
      for (std::size_t j = 0; j < lemma6.size(); ++j) st.lemma6_max[i][j] = weighted_max(b, lemma6[j]).max_count;
      // records of a prefix are exactly those whose largest element lies in it
      for (const auto& rec : records) {
        if (rec.largest > windows[w] || rec.kind != CollisionKind::Weighted) continue;
        const auto fam = family_of(rec.spec);
        for (std::size_t j = 0; j < lemma8.size(); ++j)
          if (lemma8[j] == fam) {
            ++st.lemma8_count[i][j];
            ++st.lemma8_total[i];
          }
      }
    }
  });

  for (auto& st : out.per_window) {
    for (std::size_t j = 0; j < lemma6.size(); ++j) {
      std::vector<double> v;
      for (const auto& row : st.lemma6_max) v.push_back(static_cast<double>(row[j]));
      st.lemma6_median.push_back(median(v));
    }
    for (std::size_t j = 0; j < lemma8.size(); ++j) {
      std::vector<double> v;
      for (const auto& row : st.lemma8_count) v.push_back(static_cast<double>(row[j]));
      st.lemma8_median.push_back(median(v));
    }
    std::vector<double> v(st.lemma8_total.begin(), st.lemma8_total.end());
    st.lemma8_total_median = median(v);
  }
  return out;
}

}  // namespace bhset
