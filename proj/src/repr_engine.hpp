#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "int_set.hpp"

namespace bhset {

enum class SemanticsKind : std::uint8_t {
  Multiset = 1,  // nondecreasing h-tuples
  Strict = 2,    // strictly increasing k-tuples, largest part < n
  Weighted = 3,  // ordered tuples of pairwise distinct elements, sum f_i x_i
};

struct Semantics {
  SemanticsKind kind = SemanticsKind::Multiset;
  int order = 0;                        // h, k, or t = weights.size()
  std::vector<std::uint32_t> weights;   // only for Weighted

  static Semantics multiset(int h) { return {SemanticsKind::Multiset, h, {}}; }
  static Semantics strict(int k) { return {SemanticsKind::Strict, k, {}}; }
  static Semantics weighted(std::vector<std::uint32_t> f) {
    const int t = static_cast<int>(f.size());
    return {SemanticsKind::Weighted, t, std::move(f)};
  }

  std::string label() const;
  friend bool operator==(const Semantics&, const Semantics&) = default;
};

/// Exact representation counts indexed by target value 0..max_n.
class ReprTable {
 public:
  ReprTable(Semantics semantics, std::vector<std::uint64_t> counts, std::size_t source_size);

  const Semantics& semantics() const noexcept { return semantics_; }
  std::uint64_t max_n() const noexcept { return counts_.size() - 1; }
  std::size_t source_size() const noexcept { return source_size_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t operator[](std::uint64_t n) const { return counts_[n]; }
  /// Returns 0 beyond max_n.
  std::uint64_t at(std::uint64_t n) const { return n < counts_.size() ? counts_[n] : 0; }
  /// Sum of all counts; throws Overflow if it does not fit.
  std::uint64_t total() const;

  friend bool operator==(const ReprTable&, const ReprTable&) = default;

 private:
  Semantics semantics_;
  std::vector<std::uint64_t> counts_;
  std::size_t source_size_;
};

enum class Backend {
  Auto,
  DynamicProgram,  // dense tables, O(order * |A| * max_n)
  Enumeration,     // sorted index enumeration with sum pruning
};

ReprTable repr_multiset(const IntSet& a, int h, std::uint64_t max_n, Backend backend = Backend::Auto);

/// r_k(n): strictly increasing k-tuples with largest part < n. For k = 1 the
/// only candidate part equals n itself, so every count is 0.
ReprTable repr_strict(const IntSet& a, int k, std::uint64_t max_n, Backend backend = Backend::Auto);

/// Ordered tuples (x_1..x_t) of pairwise distinct elements with
/// f_1 x_1 + ... + f_t x_t = m. The DP backend uses inclusion-exclusion over
/// set partitions of the t slots.
ReprTable repr_weighted(const IntSet& d, std::span<const std::uint32_t> f, std::uint64_t max_m,
                        Backend backend = Backend::Auto);

/// Dense histogram of all h-fold nondecreasing sums, indexed 0..h*max(A).
std::vector<std::uint64_t> pairsum_histogram(const IntSet& a, int h);

/// Binomial coefficient with overflow check.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Serialization. CSV: header "n,count" then one row per n in 0..max_n.
// Binary (little-endian):
//   "BHRT" | u32 version=1 | u8 kind | u8 order | u16 weight_count
//   | u32 weights[weight_count] | u64 source_size | u64 max_n
//   | u64 counts[max_n + 1]
void write_csv(std::ostream& out, const ReprTable& table);
void write_binary(std::ostream& out, const ReprTable& table);
ReprTable read_binary(std::istream& in);

}  // namespace bhset
