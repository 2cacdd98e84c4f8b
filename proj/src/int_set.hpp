#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace bhset {

using Element = std::uint64_t;
__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;

/// Finite set of positive integers stored as a strictly increasing sequence.
class IntSet {
 public:
  IntSet() = default;

  /// Takes ownership of an already strictly increasing sequence of positive
  /// integers; throws InvalidArgument otherwise.
  static IntSet from_sorted(std::vector<Element> elements) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i] == 0)
        fail(ErrorCode::InvalidArgument, "set elements must be positive");
      if (i > 0 && elements[i - 1] >= elements[i])
        fail(ErrorCode::InvalidArgument,
             "set elements must be strictly increasing");
    }
    IntSet s;
    s.elements_ = std::move(elements);
    return s;
  }

  /// Sorts and deduplicates.
  static IntSet from_unsorted(std::vector<Element> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()),
                   elements.end());
    return from_sorted(std::move(elements));
  }

  std::span<const Element> elements() const noexcept { return elements_; }
  const std::vector<Element>& vector() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  Element min() const { return elements_.front(); }
  Element max() const { return elements_.back(); }
  Element operator[](std::size_t i) const { return elements_[i]; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  bool contains(Element x) const {
    return std::binary_search(elements_.begin(), elements_.end(), x);
  }

  /// Elements <= bound.
  IntSet prefix(Element bound) const {
    IntSet s;
    auto last = std::upper_bound(elements_.begin(), elements_.end(), bound);
    s.elements_.assign(elements_.begin(), last);
    return s;
  }

  IntSet minus(const IntSet& other) const {
    IntSet s;
    std::set_difference(elements_.begin(), elements_.end(),
                        other.elements_.begin(), other.elements_.end(),
                        std::back_inserter(s.elements_));
    return s;
  }

  IntSet with(Element x) const {
    auto v = elements_;
    v.push_back(x);
    return from_unsorted(std::move(v));
  }

  bool is_subset_of(const IntSet& other) const {
    return std::includes(other.elements_.begin(), other.elements_.end(),
                         elements_.begin(), elements_.end());
  }

  friend bool operator==(const IntSet&, const IntSet&) = default;

 private:
  std::vector<Element> elements_;
};

}  // namespace bhset
