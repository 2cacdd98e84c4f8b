#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "int_set.hpp"

namespace bhset {

/// Weights of a reduced equation d_1 x_1 + ... + d_k x_k = e_1 y_1 + ... + e_l y_l.
struct WeightSpec {
  std::vector<std::uint32_t> d;
  std::vector<std::uint32_t> e;

  std::uint64_t left_total() const;
  std::uint64_t right_total() const;
  std::size_t arity() const { return d.size() + e.size(); }
  std::string label() const;

  auto operator<=>(const WeightSpec&) const = default;
  bool operator==(const WeightSpec&) const = default;
};

enum class CollisionKind : std::uint8_t {
  Distinct2h,  // b + b_2 + ... + b_h = b_{h+1} + ... + b_{2h}, all distinct
  Weighted,    // grouped form with k + l <= 2h - 1
};

const char* collision_kind_name(CollisionKind kind);

/// One equality among pairwise distinct elements of a set. elements[i] carries
/// weight d[i] for i < k and e[i - k] afterwards. The largest element always
/// sits in slot 0.
struct CollisionRecord {
  CollisionKind kind = CollisionKind::Weighted;
  WeightSpec spec;
  std::vector<Element> elements;
  Element largest = 0;

  /// Substitutes the elements and checks the equation and distinctness.
  bool holds() const;

  auto operator<=>(const CollisionRecord& o) const {
    if (auto c = largest <=> o.largest; c != 0) return c;
    if (auto c = spec <=> o.spec; c != 0) return c;
    if (auto c = elements <=> o.elements; c != 0) return c;
    return kind <=> o.kind;
  }
  bool operator==(const CollisionRecord&) const = default;
};

struct Canonical {
  CollisionRecord record;
  /// True when the largest element came from the second multiset and the
  /// sides were exchanged.
  bool swapped = false;
};

/// Cancels common terms of two h-multisets with equal sums and groups repeats
/// into weights. Returns nullopt when the multisets are identical.
std::optional<Canonical> canonicalize(std::span<const Element> first, std::span<const Element> second);

struct CollisionProgress {
  int level = 0;            // total weight s of the equations being joined
  std::size_t buckets = 0;  // distinct s-fold sums processed so far
  std::size_t records = 0;
};

/// Every equality witnessing membership of an element in the deletion set,
/// sorted by (largest, spec, elements).
std::vector<CollisionRecord> enumerate_collisions(const IntSet& b, int h,
                                                  const std::function<void(const CollisionProgress&)>& progress = {});

IntSet deletion_set(const IntSet& b, int h);
IntSet deletion_set(const std::vector<CollisionRecord>& records);
IntSet construct_A(const IntSet& b, int h);

/// Largest elements split by the branch that witnesses them.
struct DeletionSplit {
  IntSet by_distinct;
  IntSet by_weighted;
};
DeletionSplit split_deletion(const std::vector<CollisionRecord>& records);

/// All distinct-element solutions of one weighted equation, found by a
/// meet-in-the-middle join of the two sides; returned in canonical form.
std::vector<CollisionRecord> solve_weight_spec(const IntSet& b, const WeightSpec& spec, int h);

/// Reduced-equation families {d, e} (weights sorted descending, unordered
/// pair) with d_1 + ... = e_1 + ... <= h and k + l <= 2h - 1.
std::vector<WeightSpec> lemma8_specs(int h);
void validate_lemma8_spec(const WeightSpec& spec, int h);
/// Family key of a record: both sides sorted descending, lexicographically
/// larger side first.
WeightSpec family_of(const WeightSpec& spec);

/// Weight vectors f (sorted descending) with f_1 + ... + f_t <= 2h, t <= 2h - 1.
std::vector<std::vector<std::uint32_t>> lemma6_specs(int h);
void validate_lemma6_spec(std::span<const std::uint32_t> f, int h);

}  // namespace bhset
