#pragma once

// Naive reference implementations. Nothing here calls into the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<std::uint64_t>;

inline Vec multiset_counts(const Vec& a, int h, std::uint64_t max_n) {
  Vec counts(max_n + 1, 0);
  std::function<void(std::size_t, int, std::uint64_t)> rec = [&](std::size_t from, int left, std::uint64_t sum) {
    if (left == 0) {
      if (sum <= max_n) ++counts[sum];
      return;
    }
    for (std::size_t i = from; i < a.size(); ++i) rec(i, left - 1, sum + a[i]);
  };
  rec(0, h, 0);
  return counts;
}

inline Vec strict_counts(const Vec& a, int k, std::uint64_t max_n) {
  Vec counts(max_n + 1, 0);
  std::function<void(std::size_t, int, std::uint64_t, std::uint64_t)> rec = [&](std::size_t from, int left,
                                                                                std::uint64_t sum, std::uint64_t top) {
    if (left == 0) {
      if (sum <= max_n && top < sum) ++counts[sum];
      return;
    }
    for (std::size_t i = from; i < a.size(); ++i) rec(i + 1, left - 1, sum + a[i], a[i]);
  };
  rec(0, k, 0, 0);
  return counts;
}

inline Vec weighted_counts(const Vec& d, const std::vector<std::uint32_t>& f, std::uint64_t max_m) {
  Vec counts(max_m + 1, 0);
  std::vector<bool> used(d.size(), false);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t slot, std::uint64_t sum) {
    if (slot == f.size()) {
      if (sum <= max_m) ++counts[sum];
      return;
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      rec(slot + 1, sum + f[slot] * d[i]);
      used[i] = false;
    }
  };
  rec(0, 0);
  return counts;
}

// Largest surviving element of every pair of distinct h-multisets with equal sums.
inline std::set<std::uint64_t> deletion_set(const Vec& b, int h) {
  std::map<std::uint64_t, std::vector<Vec>> by_sum;
  Vec cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(cur.size()) == h) {
      std::uint64_t s = 0;
      for (auto x : cur) s += x;
      by_sum[s].push_back(cur);
      return;
    }
    for (std::size_t i = from; i < b.size(); ++i) {
      cur.push_back(b[i]);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
  std::set<std::uint64_t> out;
  for (const auto& [s, group] : by_sum)
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        std::map<std::uint64_t, int> net;
        for (auto x : group[i]) ++net[x];
        for (auto x : group[j]) --net[x];
        std::uint64_t top = 0;
        for (const auto& [x, c] : net)
          if (c != 0) top = std::max(top, x);
        out.insert(top);
      }
  return out;
}

inline Vec random_set(std::mt19937_64& rng, std::size_t max_size, std::uint64_t max_value) {
  std::uniform_int_distribution<std::size_t> size_dist(0, max_size);
  std::uniform_int_distribution<std::uint64_t> value_dist(1, max_value);
  std::set<std::uint64_t> s;
  const std::size_t target = std::min<std::size_t>(size_dist(rng), max_value);
  while (s.size() < target) s.insert(value_dist(rng));
  return {s.begin(), s.end()};
}

}  // namespace oracle
