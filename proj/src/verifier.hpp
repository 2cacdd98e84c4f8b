#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "collision.hpp"
#include "int_set.hpp"
#include "repr_engine.hpp"

namespace bhset {

struct BhgResult {
  bool holds = true;
  std::optional<std::uint64_t> witness;  // smallest n with R_h(n) > g
  bool window_limited = false;           // max_n < h * max(A): not exhaustive
};

BhgResult is_bhg(const IntSet& a, int h, std::uint64_t g, std::uint64_t max_n);
/// Exhaustive check with max_n = h * max(A).
BhgResult is_bhg(const IntSet& a, int h, std::uint64_t g);

/// Least-squares fit of value ~ coefficient * n^exponent on log-log axes over
/// dyadic blocks [2^j, 2^(j+1)) of the window. Only n with a positive value
/// enter a block. Each block is represented by the power mean of its n taken
/// at the fitted exponent, iterated to a fixed point, so an exact power law is
/// recovered exactly.
struct PowerFit {
  std::optional<double> coefficient;
  std::optional<double> exponent;
  std::size_t bins = 0;
  double residual_rms = 0.0;
};

PowerFit fit_dyadic_power_law(std::span<const double> values, std::uint64_t lo, std::uint64_t hi);
PowerFit fit_dyadic_power_law(std::span<const std::uint64_t> counts, std::uint64_t lo, std::uint64_t hi);

struct BasisReport {
  int k = 0;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::optional<std::uint64_t> last_zero;
  double coverage = 0.0;
  PowerFit fit;
};

BasisReport basis_window(const ReprTable& counts, std::uint64_t lo, std::uint64_t hi);
BasisReport basis_window(const IntSet& a, int k, std::uint64_t lo, std::uint64_t hi);

/// lhs = R_{2h,B}(n) - R_{2h,B\C}(n) against the three case counts: r1 tuples
/// with a repeated term, r2 / r3 strictly increasing tuples containing an
/// element deleted through the distinct / weighted branch.
struct DecompositionAudit {
  std::uint64_t n = 0;
  std::uint64_t lhs = 0;
  std::uint64_t r1 = 0;
  std::uint64_t r2 = 0;
  std::uint64_t r3 = 0;

  bool holds() const { return lhs <= r1 + r2 + r3; }
  friend bool operator==(const DecompositionAudit&, const DecompositionAudit&) = default;
};

/// Brute-force route for a single n. Throws Contract when c is not the
/// deletion set of b.
DecompositionAudit decomposition_audit(const IntSet& b, const IntSet& c, int h, std::uint64_t n);

/// Brute-force route for every n in 0..max_n via one tuple enumeration.
std::vector<DecompositionAudit> decomposition_audit_all(const IntSet& b, const std::vector<CollisionRecord>& records,
                                                        int h, std::uint64_t max_n);

struct AuditSummary {
  std::uint64_t max_n = 0;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::uint64_t> first_violation;
  std::uint64_t max_lhs = 0;
  std::uint64_t max_r1 = 0;
  std::uint64_t max_r2 = 0;
  std::uint64_t max_r3 = 0;
};

/// Table route: r1 = R_B - r_B, r2 = r_B - r_{B\C_distinct},
/// r3 = r_B - r_{B\C_weighted}, all with 2h parts.
std::vector<DecompositionAudit> decomposition_audit_tables(const IntSet& b, const std::vector<CollisionRecord>& records,
                                                           int h, std::uint64_t max_n);
AuditSummary summarize(std::span<const DecompositionAudit> audits);

}  // namespace bhset
