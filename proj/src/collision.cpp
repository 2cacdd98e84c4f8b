#include "collision.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "random_model.hpp"

namespace bhset {

namespace {

using SignedTerms = std::map<Element, std::int64_t>;

// Builds the canonical record from element -> signed weight (left positive).
CollisionRecord record_from_terms(const SignedTerms& terms, int h, bool* swapped) {
  const auto& [top, top_weight] = *terms.rbegin();
  const std::int64_t sign = top_weight > 0 ? 1 : -1;
  if (swapped) *swapped = sign < 0;

  std::vector<std::pair<std::uint32_t, Element>> left, right;
  for (const auto& [x, w] : terms) {
    const std::int64_t sw = w * sign;
    if (x == top) continue;
    if (sw > 0)
      left.emplace_back(static_cast<std::uint32_t>(sw), x);
    else
      right.emplace_back(static_cast<std::uint32_t>(-sw), x);
  }
  auto by_weight_then_element = [](const auto& p, const auto& q) {
    return p.first != q.first ? p.first > q.first : p.second > q.second;
  };
  std::sort(left.begin(), left.end(), by_weight_then_element);
  std::sort(right.begin(), right.end(), by_weight_then_element);

  CollisionRecord r;
  r.largest = top;
  r.spec.d.push_back(static_cast<std::uint32_t>(top_weight * sign));
  r.elements.push_back(top);
  for (const auto& [w, x] : left) {
    r.spec.d.push_back(w);
    r.elements.push_back(x);
  }
  for (const auto& [w, x] : right) {
    r.spec.e.push_back(w);
    r.elements.push_back(x);
  }

  const bool unit = std::all_of(r.spec.d.begin(), r.spec.d.end(), [](auto w) { return w == 1; }) &&
                    std::all_of(r.spec.e.begin(), r.spec.e.end(), [](auto w) { return w == 1; });
  const auto hh = static_cast<std::size_t>(h);
  if (unit && r.spec.d.size() == hh && r.spec.e.size() == hh) {
    r.kind = CollisionKind::Distinct2h;
  } else {
    r.kind = CollisionKind::Weighted;
    if (r.spec.left_total() != r.spec.right_total() || r.spec.left_total() > hh || r.spec.arity() > 2 * hh - 1)
      fail(ErrorCode::Internal, "reduced equation outside the deletion-set shapes: " + r.spec.label());
  }
  return r;
}

std::uint64_t sum_of(std::span<const Element> xs) {
  std::uint64_t s = 0;
  for (auto x : xs) s += x;
  return s;
}

std::vector<std::vector<std::uint32_t>> partitions_of(std::uint32_t total) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t left, std::uint32_t cap) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::uint32_t p = std::min(left, cap); p >= 1; --p) {
      cur.push_back(p);
      rec(left - p, p);
      cur.pop_back();
    }
  };
  rec(total, total);
  return out;
}

// Ordered tuples of distinct indices with their weighted sums.
struct SideTuples {
  std::size_t width = 0;
  std::vector<std::uint32_t> index;
  std::vector<std::uint64_t> sum;
};

SideTuples ordered_tuples(std::span<const Element> elems, std::span<const std::uint32_t> w) {
  SideTuples out;
  out.width = w.size();
  std::vector<std::uint32_t> cur;
  std::vector<char> used(elems.size(), 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t slot, std::uint64_t s) {
    if (slot == w.size()) {
      out.index.insert(out.index.end(), cur.begin(), cur.end());
      out.sum.push_back(s);
      return;
    }
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      cur.push_back(static_cast<std::uint32_t>(j));
      rec(slot + 1, s + static_cast<std::uint64_t>(w[slot]) * elems[j]);
      cur.pop_back();
      used[j] = 0;
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

std::uint64_t WeightSpec::left_total() const { return std::accumulate(d.begin(), d.end(), std::uint64_t{0}); }
std::uint64_t WeightSpec::right_total() const { return std::accumulate(e.begin(), e.end(), std::uint64_t{0}); }

std::string WeightSpec::label() const {
  std::ostringstream os;
  os << "d=(";
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ") e=(";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << ")";
  return os.str();
}

const char* collision_kind_name(CollisionKind kind) {
  return kind == CollisionKind::Distinct2h ? "DISTINCT_2H" : "WEIGHTED";
}

bool CollisionRecord::holds() const {
  const std::size_t k = spec.d.size();
  if (elements.size() != spec.arity() || elements.empty()) return false;
  std::vector<Element> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (largest != sorted.back() || elements.front() != largest) return false;
  UInt128 lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i < k)
      lhs += static_cast<UInt128>(spec.d[i]) * elements[i];
    else
      rhs += static_cast<UInt128>(spec.e[i - k]) * elements[i];
  }
  return lhs == rhs && spec.left_total() == spec.right_total();
}

std::optional<Canonical> canonicalize(std::span<const Element> first, std::span<const Element> second) {
  if (first.size() != second.size() || first.empty())
    fail(ErrorCode::Contract, "canonicalize needs two multisets of the same positive size");
  if (sum_of(first) != sum_of(second)) fail(ErrorCode::Contract, "canonicalize needs equal sums");
  SignedTerms terms;
  for (auto x : first) ++terms[x];
  for (auto x : second) --terms[x];
  std::erase_if(terms, [](const auto& kv) { return kv.second == 0; });
  if (terms.empty()) return std::nullopt;
  Canonical c;
  c.record = record_from_terms(terms, static_cast<int>(first.size()), &c.swapped);
  return c;
}

std::vector<CollisionRecord> enumerate_collisions(const IntSet& b, int h,
                                                  const std::function<void(const CollisionProgress&)>& progress) {
  validate_order(h);
  std::vector<CollisionRecord> records;
  const auto elems = b.elements();
  const std::size_t size = elems.size();

  for (int s = 2; s <= h; ++s) {
    // all s-multisets as nondecreasing index tuples, hash-joined on their sums
    const auto width = static_cast<std::size_t>(s);
    std::vector<std::uint32_t> index;
    std::vector<std::uint64_t> sums;
    std::vector<std::uint32_t> cur(width, 0);
    std::function<void(std::size_t, std::size_t, std::uint64_t)> rec = [&](std::size_t slot, std::size_t start,
                                                                           std::uint64_t acc) {
      if (slot == width) {
        index.insert(index.end(), cur.begin(), cur.end());
        sums.push_back(acc);
        return;
      }
      for (std::size_t j = start; j < size; ++j) {
        cur[slot] = static_cast<std::uint32_t>(j);
        rec(slot + 1, j, acc + elems[j]);
      }
    };
    rec(0, 0, 0);

    std::vector<std::uint32_t> order(sums.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto p, auto q) { return sums[p] < sums[q]; });

    CollisionProgress status{s, 0, records.size()};
    for (std::size_t lo = 0; lo < order.size();) {
      std::size_t hi = lo + 1;
      while (hi < order.size() && sums[order[hi]] == sums[order[lo]]) ++hi;
      for (std::size_t i = lo; i < hi; ++i) {
        const std::uint32_t* p = &index[order[i] * width];
        for (std::size_t j = i + 1; j < hi; ++j) {
          const std::uint32_t* q = &index[order[j] * width];
          // overlapping supports reduce to an equation of smaller total weight
          bool disjoint = true;
          for (std::size_t x = 0, y = 0; x < width && y < width;) {
            if (p[x] == q[y]) {
              disjoint = false;
              break;
            }
            if (p[x] < q[y]) ++x; else ++y;
          }
          if (!disjoint) continue;
          SignedTerms terms;
          for (std::size_t x = 0; x < width; ++x) {
            ++terms[elems[p[x]]];
            --terms[elems[q[x]]];
          }
          records.push_back(record_from_terms(terms, h, nullptr));
        }
      }
      ++status.buckets;
      if (progress && (status.buckets & 0xFFFF) == 0) {
        status.records = records.size();
        progress(status);
      }
      lo = hi;
    }
    if (progress) {
      status.records = records.size();
      progress(status);
    }
  }

  std::sort(records.begin(), records.end());
  records.erase(std::unique(records.begin(), records.end()), records.end());
  return records;
}

IntSet deletion_set(const std::vector<CollisionRecord>& records) {
  std::vector<Element> c;
  c.reserve(records.size());
  for (const auto& r : records) c.push_back(r.largest);
  return IntSet::from_unsorted(std::move(c));
}

IntSet deletion_set(const IntSet& b, int h) { return deletion_set(enumerate_collisions(b, h)); }

IntSet construct_A(const IntSet& b, int h) { return b.minus(deletion_set(b, h)); }

DeletionSplit split_deletion(const std::vector<CollisionRecord>& records) {
  std::vector<Element> distinct, weighted;
  for (const auto& r : records) (r.kind == CollisionKind::Distinct2h ? distinct : weighted).push_back(r.largest);
  return {IntSet::from_unsorted(std::move(distinct)), IntSet::from_unsorted(std::move(weighted))};
}

std::vector<CollisionRecord> solve_weight_spec(const IntSet& b, const WeightSpec& spec, int h) {
  validate_order(h);
  if (spec.d.empty() || spec.e.empty()) fail(ErrorCode::InvalidArgument, "both sides of the equation need terms");
  if (spec.left_total() != spec.right_total()) fail(ErrorCode::InvalidArgument, "weight totals must agree");
  for (auto w : spec.d)
    if (w == 0) fail(ErrorCode::InvalidArgument, "weights must be positive");
  for (auto w : spec.e)
    if (w == 0) fail(ErrorCode::InvalidArgument, "weights must be positive");

  const auto elems = b.elements();
  const SideTuples left = ordered_tuples(elems, spec.d);
  const SideTuples right = ordered_tuples(elems, spec.e);

  std::unordered_multimap<std::uint64_t, std::size_t> by_sum;
  by_sum.reserve(left.sum.size());
  for (std::size_t i = 0; i < left.sum.size(); ++i) by_sum.emplace(left.sum[i], i);

  std::vector<CollisionRecord> out;
  for (std::size_t j = 0; j < right.sum.size(); ++j) {
    auto [it, end] = by_sum.equal_range(right.sum[j]);
    for (; it != end; ++it) {
      const std::uint32_t* p = &left.index[it->second * left.width];
      const std::uint32_t* q = &right.index[j * right.width];
      bool distinct = true;
      for (std::size_t x = 0; x < left.width && distinct; ++x)
        for (std::size_t y = 0; y < right.width; ++y)
          if (p[x] == q[y]) {
            distinct = false;
            break;
          }
      if (!distinct) continue;
      SignedTerms terms;
      for (std::size_t x = 0; x < left.width; ++x) terms[elems[p[x]]] += spec.d[x];
      for (std::size_t y = 0; y < right.width; ++y) terms[elems[q[y]]] -= spec.e[y];
      out.push_back(record_from_terms(terms, h, nullptr));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WeightSpec family_of(const WeightSpec& spec) {
  WeightSpec f = spec;
  std::sort(f.d.begin(), f.d.end(), std::greater<>());
  std::sort(f.e.begin(), f.e.end(), std::greater<>());
  if (f.d < f.e) std::swap(f.d, f.e);
  return f;
}

void validate_lemma8_spec(const WeightSpec& spec, int h) {
  validate_order(h);
  if (spec.d.empty() || spec.e.empty()) fail(ErrorCode::InvalidArgument, "both sides of the equation need terms");
  for (auto w : spec.d)
    if (w == 0) fail(ErrorCode::InvalidArgument, "weights must be positive");
  for (auto w : spec.e)
    if (w == 0) fail(ErrorCode::InvalidArgument, "weights must be positive");
  if (spec.left_total() != spec.right_total())
    fail(ErrorCode::InvalidArgument, "weight totals must agree: " + spec.label());
  if (spec.left_total() > static_cast<std::uint64_t>(h))
    fail(ErrorCode::InvalidArgument, "weight total exceeds h: " + spec.label());
  if (spec.arity() > static_cast<std::size_t>(2 * h - 1))
    fail(ErrorCode::InvalidArgument, "k + l exceeds 2h - 1: " + spec.label());
}

std::vector<WeightSpec> lemma8_specs(int h) {
  validate_order(h);
  std::vector<WeightSpec> out;
  for (std::uint32_t s = 1; s <= static_cast<std::uint32_t>(h); ++s) {
    const auto parts = partitions_of(s);
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i; j < parts.size(); ++j) {
        if (parts[i].size() + parts[j].size() > static_cast<std::size_t>(2 * h - 1)) continue;
        if (parts[i].size() == 1 && parts[j].size() == 1) continue;  // only x = y
        out.push_back(family_of(WeightSpec{parts[i], parts[j]}));
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void validate_lemma6_spec(std::span<const std::uint32_t> f, int h) {
  validate_order(h);
  if (f.empty()) fail(ErrorCode::InvalidArgument, "weight vector must be nonempty");
  std::uint64_t total = 0;
  for (auto w : f) {
    if (w == 0) fail(ErrorCode::InvalidArgument, "weights must be positive");
    total += w;
  }
  if (f.size() > static_cast<std::size_t>(2 * h - 1))
    fail(ErrorCode::InvalidArgument, "t exceeds 2h - 1 (" + std::to_string(f.size()) + " weights)");
  if (total > static_cast<std::uint64_t>(2 * h))
    fail(ErrorCode::InvalidArgument, "weight total exceeds 2h (" + std::to_string(total) + ")");
}

std::vector<std::vector<std::uint32_t>> lemma6_specs(int h) {
  validate_order(h);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t s = 1; s <= static_cast<std::uint32_t>(2 * h); ++s)
    for (auto& p : partitions_of(s))
      if (p.size() <= static_cast<std::size_t>(2 * h - 1)) out.push_back(std::move(p));
  return out;
}

}  // namespace bhset
