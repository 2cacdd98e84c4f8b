#include "verifier.hpp"

#include <cmath>

#include "random_model.hpp"

namespace bhset {

BhgResult is_bhg(const IntSet& a, int h, std::uint64_t g, std::uint64_t max_n) {
  if (h < 1) fail(ErrorCode::InvalidArgument, "is_bhg needs h >= 1");
  if (g < 1) fail(ErrorCode::InvalidArgument, "is_bhg needs g >= 1");
  BhgResult result;
  if (a.empty()) return result;
  result.window_limited = max_n < static_cast<std::uint64_t>(h) * a.max();
  const auto table = repr_multiset(a, h, max_n);
  const auto counts = table.counts();
  for (std::uint64_t n = 0; n < counts.size(); ++n)
    if (counts[n] > g) {
      result.holds = false;
      result.witness = n;
      break;
    }
  return result;
}

BhgResult is_bhg(const IntSet& a, int h, std::uint64_t g) {
  const std::uint64_t top = a.empty() ? 0 : static_cast<std::uint64_t>(h) * a.max();
  return is_bhg(a, h, g, top);
}

namespace {

struct Block {
  std::uint64_t from = 0, to = 0;  // inclusive
  double mean = 0.0;
  std::size_t used = 0;
  double log_geo = 0.0;
};

template <typename T>
PowerFit fit_impl(std::span<const T> values, std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || lo > hi) fail(ErrorCode::InvalidArgument, "empty fit window");
  if (hi >= values.size()) fail(ErrorCode::InvalidArgument, "fit window exceeds the table");
  std::vector<Block> blocks;
  for (std::uint64_t start = std::uint64_t{1} << static_cast<unsigned>(std::floor(std::log2(static_cast<double>(lo))));
       start <= hi; start *= 2) {
    Block b;
    b.from = std::max(start, lo);
    b.to = std::min(2 * start - 1, hi);
    double sum = 0.0, logs = 0.0;
    for (std::uint64_t n = b.from; n <= b.to; ++n)
      if (values[n] > 0) {
        sum += static_cast<double>(values[n]);
        logs += std::log(static_cast<double>(n));
        ++b.used;
      }
    if (b.used == 0) continue;
    b.mean = sum / static_cast<double>(b.used);
    b.log_geo = logs / static_cast<double>(b.used);
    blocks.push_back(b);
  }
  PowerFit fit;
  fit.bins = blocks.size();
  if (blocks.size() < 2) return fit;

  std::vector<double> x(blocks.size()), y(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    x[i] = blocks[i].log_geo;
    y[i] = std::log(blocks[i].mean);
  }
  auto ols = [&](double& slope, double& intercept) {
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    slope = sxx > 0 ? sxy / sxx : 0.0;
    intercept = my - slope * mx;
  };

  double slope = 0, intercept = 0;
  ols(slope, intercept);
  for (int iter = 0; iter < 12; ++iter) {
    if (std::fabs(slope) < 1e-12) break;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      // log of the power mean, computed relative to the geometric mean
      double acc = 0.0;
      for (std::uint64_t n = blocks[i].from; n <= blocks[i].to; ++n)
        if (values[n] > 0) acc += std::exp(slope * (std::log(static_cast<double>(n)) - blocks[i].log_geo));
      x[i] = blocks[i].log_geo + std::log(acc / static_cast<double>(blocks[i].used)) / slope;
    }
    const double previous = slope;
    ols(slope, intercept);
    if (std::fabs(slope - previous) < 1e-14) break;
  }
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  fit.exponent = slope;
  fit.coefficient = std::exp(intercept);
  fit.residual_rms = std::sqrt(ss / static_cast<double>(x.size()));
  return fit;
}

}  // namespace

PowerFit fit_dyadic_power_law(std::span<const double> values, std::uint64_t lo, std::uint64_t hi) {
  return fit_impl(values, lo, hi);
}

PowerFit fit_dyadic_power_law(std::span<const std::uint64_t> counts, std::uint64_t lo, std::uint64_t hi) {
  return fit_impl(counts, lo, hi);
}

BasisReport basis_window(const ReprTable& table, std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1 || lo > hi) fail(ErrorCode::InvalidArgument, "empty basis window");
  if (hi > table.max_n()) fail(ErrorCode::InvalidArgument, "basis window exceeds the table");
  BasisReport report;
  report.k = table.semantics().order;
  report.lo = lo;
  report.hi = hi;
  const auto counts = table.counts();
  std::uint64_t covered = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    if (counts[n] > 0)
      ++covered;
    else
      report.last_zero = n;
  }
  report.coverage = static_cast<double>(covered) / static_cast<double>(hi - lo + 1);
  report.fit = fit_dyadic_power_law(counts, lo, hi);
  return report;
}

BasisReport basis_window(const IntSet& a, int k, std::uint64_t lo, std::uint64_t hi) {
  return basis_window(repr_multiset(a, k, hi), lo, hi);
}

namespace {

struct TupleWalker {
  std::span<const Element> elems;
  std::uint64_t max_n;
  std::vector<char> in_distinct, in_weighted;  // by index into elems
  std::vector<std::uint32_t> cur;
  std::vector<DecompositionAudit>* out;
  std::uint64_t only_n = 0;
  bool single = false;

  void visit(std::uint64_t sum) {
    DecompositionAudit& a = single ? (*out)[0] : (*out)[sum];
    bool repeated = false, hit_d = false, hit_w = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (i > 0 && cur[i] == cur[i - 1]) repeated = true;
      hit_d = hit_d || in_distinct[cur[i]];
      hit_w = hit_w || in_weighted[cur[i]];
    }
    if (repeated) {
      ++a.r1;
    } else {
      if (hit_d) ++a.r2;
      if (hit_w) ++a.r3;
    }
  }

  void walk(std::size_t slot, std::size_t start, std::uint64_t sum) {
    const std::size_t left = cur.size() - slot;
    for (std::size_t j = start; j < elems.size(); ++j) {
      const std::uint64_t s = sum + elems[j];
      if (s + static_cast<std::uint64_t>(left - 1) * elems[j] > max_n) break;
      cur[slot] = static_cast<std::uint32_t>(j);
      if (left == 1) {
        if (!single || s == only_n) visit(s);
      } else {
        walk(slot + 1, j, s);
      }
    }
  }
};

TupleWalker make_walker(const IntSet& b, const std::vector<CollisionRecord>& records, int h, std::uint64_t max_n) {
  const auto split = split_deletion(records);
  TupleWalker w;
  w.elems = b.elements();
  w.max_n = max_n;
  w.in_distinct.assign(b.size(), 0);
  w.in_weighted.assign(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    w.in_distinct[i] = split.by_distinct.contains(b[i]);
    w.in_weighted[i] = split.by_weighted.contains(b[i]);
  }
  w.cur.assign(static_cast<std::size_t>(2 * h), 0);
  return w;
}

}  // namespace

DecompositionAudit decomposition_audit(const IntSet& b, const IntSet& c, int h, std::uint64_t n) {
  validate_order(h);
  const auto records = enumerate_collisions(b, h);
  if (!(deletion_set(records) == c)) fail(ErrorCode::Contract, "C is not the deletion set of B");
  const IntSet a = b.minus(c);
  std::vector<DecompositionAudit> slot(1);
  slot[0].n = n;
  auto walker = make_walker(b, records, h, n);
  walker.out = &slot;
  walker.single = true;
  walker.only_n = n;
  walker.walk(0, 0, 0);
  slot[0].lhs = repr_multiset(b, 2 * h, n)[n] - repr_multiset(a, 2 * h, n)[n];
  return slot[0];
}

std::vector<DecompositionAudit> decomposition_audit_all(const IntSet& b, const std::vector<CollisionRecord>& records,
                                                        int h, std::uint64_t max_n) {
  validate_order(h);
  std::vector<DecompositionAudit> out(max_n + 1);
  for (std::uint64_t n = 0; n <= max_n; ++n) out[n].n = n;
  auto walker = make_walker(b, records, h, max_n);
  walker.out = &out;
  if (!b.empty()) walker.walk(0, 0, 0);
  const IntSet a = b.minus(deletion_set(records));
  const auto rb = repr_multiset(b, 2 * h, max_n);
  const auto ra = repr_multiset(a, 2 * h, max_n);
  for (std::uint64_t n = 0; n <= max_n; ++n) out[n].lhs = rb[n] - ra[n];
  return out;
}

std::vector<DecompositionAudit> decomposition_audit_tables(const IntSet& b, const std::vector<CollisionRecord>& records,
                                                           int h, std::uint64_t max_n) {
  validate_order(h);
  const auto split = split_deletion(records);
  const IntSet a = b.minus(deletion_set(records));
  const int k = 2 * h;
  const auto rb = repr_multiset(b, k, max_n);
  const auto ra = repr_multiset(a, k, max_n);
  const auto sb = repr_strict(b, k, max_n);
  const auto sd = repr_strict(b.minus(split.by_distinct), k, max_n);
  const auto sw = repr_strict(b.minus(split.by_weighted), k, max_n);
  std::vector<DecompositionAudit> out(max_n + 1);
  for (std::uint64_t n = 0; n <= max_n; ++n) {
    out[n].n = n;
    out[n].lhs = rb[n] - ra[n];
    out[n].r1 = rb[n] - sb[n];
    out[n].r2 = sb[n] - sd[n];
    out[n].r3 = sb[n] - sw[n];
  }
  return out;
}

AuditSummary summarize(std::span<const DecompositionAudit> audits) {
  AuditSummary s;
  for (const auto& a : audits) {
    s.max_n = std::max(s.max_n, a.n);
    ++s.checked;
    if (!a.holds()) {
      ++s.violations;
      if (!s.first_violation) s.first_violation = a.n;
    }
    s.max_lhs = std::max(s.max_lhs, a.lhs);
    s.max_r1 = std::max(s.max_r1, a.r1);
    s.max_r2 = std::max(s.max_r2, a.r2);
    s.max_r3 = std::max(s.max_r3, a.r3);
  }
  return s;
}

}  // namespace bhset
