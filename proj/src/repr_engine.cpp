#include "repr_engine.hpp"

#include <array>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace bhset {

namespace {

constexpr std::uint64_t kMaxTableLength = std::uint64_t{1} << 32;

void check_table_length(std::uint64_t max_n) {
  if (max_n >= kMaxTableLength) fail(ErrorCode::InvalidArgument, "max_n too large for a dense table");
}

std::uint64_t checked_add(std::uint64_t x, std::uint64_t y) {
  std::uint64_t r;
  if (__builtin_add_overflow(x, y, &r)) fail(ErrorCode::Overflow, "representation count overflows 64 bits");
  return r;
}

std::span<const Element> pruned(const IntSet& a, std::uint64_t bound) {
  auto all = a.elements();
  auto last = std::upper_bound(all.begin(), all.end(), bound);
  return all.first(static_cast<std::size_t>(last - all.begin()));
}

// dst[n] += src[n - shift] for n in [shift, dst.size()), detecting wraparound.
void shifted_accumulate(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src,
                        std::uint64_t shift, std::uint64_t src_from) {
  const std::size_t len = dst.size();
  std::size_t begin = static_cast<std::size_t>(shift + src_from);
  if (begin >= len) return;
  std::uint64_t wrapped = 0;
  std::uint64_t* out = dst.data();
  const std::uint64_t* in = src.data() - shift;
  for (std::size_t n = begin; n < len; ++n) {
    const std::uint64_t s = out[n] + in[n];
    wrapped |= static_cast<std::uint64_t>(s < out[n]);
    out[n] = s;
  }
  if (wrapped) fail(ErrorCode::Overflow, "representation count overflows 64 bits");
}

// ---- dynamic programs ----

std::vector<std::uint64_t> multiset_dp(std::span<const Element> a, int h, std::uint64_t max_n) {
  std::vector<std::vector<std::uint64_t>> layer(static_cast<std::size_t>(h) + 1,
                                                std::vector<std::uint64_t>(max_n + 1, 0));
  layer[0][0] = 1;
  if (a.empty()) return std::move(layer[static_cast<std::size_t>(h)]);
  const std::uint64_t smallest = a.front();
  for (Element x : a) {
    // layer j-1 already includes x, which admits repeated parts
    for (int j = 1; j <= h; ++j)
      shifted_accumulate(layer[static_cast<std::size_t>(j)], layer[static_cast<std::size_t>(j) - 1], x,
                         static_cast<std::uint64_t>(j - 1) * smallest);
  }
  return std::move(layer[static_cast<std::size_t>(h)]);
}

std::vector<std::uint64_t> strict_dp(std::span<const Element> a, int k, std::uint64_t max_n) {
  std::vector<std::vector<std::uint64_t>> layer(static_cast<std::size_t>(k) + 1,
                                                std::vector<std::uint64_t>(max_n + 1, 0));
  layer[0][0] = 1;
  if (a.empty()) return std::move(layer[static_cast<std::size_t>(k)]);
  const std::uint64_t smallest = a.front();
  for (Element x : a) {
    // descending j reads layer j-1 before x is added to it: each part used once
    for (int j = k; j >= 1; --j)
      shifted_accumulate(layer[static_cast<std::size_t>(j)], layer[static_cast<std::size_t>(j) - 1], x,
                         static_cast<std::uint64_t>(j - 1) * smallest);
  }
  return std::move(layer[static_cast<std::size_t>(k)]);
}

// Restricted-growth-string enumeration of set partitions of {0..t-1}.
template <typename Fn>
void for_each_set_partition(int t, Fn&& fn) {
  std::vector<int> block(static_cast<std::size_t>(t), 0);
  std::vector<int> max_prefix(static_cast<std::size_t>(t), 0);
  while (true) {
    fn(block);
    int i = t - 1;
    while (i > 0 && block[static_cast<std::size_t>(i)] > max_prefix[static_cast<std::size_t>(i) - 1]) --i;
    if (i <= 0) return;
    ++block[static_cast<std::size_t>(i)];
    max_prefix[static_cast<std::size_t>(i)] =
        std::max(max_prefix[static_cast<std::size_t>(i) - 1], block[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < t; ++j) {
      block[static_cast<std::size_t>(j)] = 0;
      max_prefix[static_cast<std::size_t>(j)] = max_prefix[static_cast<std::size_t>(i)];
    }
  }
}

// Mobius coefficient of each multiset of block weights, summed over all set
// partitions of the slots that produce it.
std::map<std::vector<std::uint64_t>, std::int64_t> partition_terms(std::span<const std::uint32_t> f) {
  std::map<std::vector<std::uint64_t>, std::int64_t> terms;
  const int t = static_cast<int>(f.size());
  for_each_set_partition(t, [&](const std::vector<int>& block) {
    const int blocks = *std::max_element(block.begin(), block.end()) + 1;
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(blocks), 0);
    std::vector<int> size(static_cast<std::size_t>(blocks), 0);
    for (int i = 0; i < t; ++i) {
      weight[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])] += f[static_cast<std::size_t>(i)];
      ++size[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])];
    }
    std::int64_t mu = 1;
    for (int s : size) {
      std::int64_t fact = 1;
      for (int q = 2; q < s; ++q) fact *= q;
      mu *= ((s - 1) % 2 == 0 ? 1 : -1) * fact;
    }
    std::sort(weight.begin(), weight.end());
    terms[weight] += mu;
  });
  return terms;
}

std::vector<std::uint64_t> weighted_dp(std::span<const Element> a, std::span<const std::uint32_t> f,
                                       std::uint64_t max_m) {
  std::vector<Int128> acc(max_m + 1, 0);
  for (const auto& [weights, mu] : partition_terms(f)) {
    if (mu == 0) continue;
    std::vector<std::uint64_t> cur(max_m + 1, 0);
    cur[0] = 1;
    for (std::uint64_t w : weights) {
      std::vector<std::uint64_t> next(max_m + 1, 0);
      for (Element x : a) {
        const std::uint64_t off = w * x;
        if (off > max_m) break;
        shifted_accumulate(next, cur, off, 0);
      }
      cur = std::move(next);
    }
    for (std::uint64_t m = 0; m <= max_m; ++m) acc[m] += static_cast<Int128>(mu) * cur[m];
  }
  std::vector<std::uint64_t> out(max_m + 1, 0);
  for (std::uint64_t m = 0; m <= max_m; ++m) {
    if (acc[m] < 0) fail(ErrorCode::Internal, "inclusion-exclusion produced a negative count");
    if (acc[m] > static_cast<Int128>(std::numeric_limits<std::uint64_t>::max()))
      fail(ErrorCode::Overflow, "representation count overflows 64 bits");
    out[m] = static_cast<std::uint64_t>(acc[m]);
  }
  return out;
}

// ---- enumeration ----
// Counts are incremented by one per tuple, so a count cannot wrap before
// 2^64 tuples have been visited.

void enumerate_nondecreasing(std::span<const Element> a, int left, std::size_t start, std::uint64_t partial,
                             bool strict, std::uint64_t max_n, std::uint64_t* counts) {
  const std::size_t size = a.size();
  if (left == 1) {
    for (std::size_t j = start; j < size; ++j) {
      const std::uint64_t s = partial + a[j];
      if (s > max_n) break;
      ++counts[s];
    }
    return;
  }
  for (std::size_t j = start; j < size; ++j) {
    const std::uint64_t s = partial + a[j];
    if (s + static_cast<std::uint64_t>(left - 1) * a[j] > max_n) break;
    enumerate_nondecreasing(a, left - 1, strict ? j + 1 : j, s, strict, max_n, counts);
  }
}

void enumerate_weighted(std::span<const Element> a, std::span<const std::uint32_t> f, std::size_t slot,
                        std::uint64_t partial, std::uint64_t tail_floor, std::vector<char>& used,
                        std::uint64_t max_m, std::uint64_t* counts) {
  const std::uint64_t w = f[slot];
  const std::uint64_t rest_floor = tail_floor - w * a.front();
  const bool last = slot + 1 == f.size();
  for (std::size_t j = 0; j < a.size(); ++j) {
    const std::uint64_t s = partial + w * a[j];
    if (s + rest_floor > max_m) break;
    if (used[j]) continue;
    if (last) {
      ++counts[s];
    } else {
      used[j] = 1;
      enumerate_weighted(a, f, slot + 1, s, rest_floor, used, max_m, counts);
      used[j] = 0;
    }
  }
}

double approx_binomial(double n, double k) {
  double r = 1.0;
  for (double i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::string Semantics::label() const {
  std::ostringstream os;
  switch (kind) {
    case SemanticsKind::Multiset: os << "multiset(" << order << ")"; break;
    case SemanticsKind::Strict: os << "strict(" << order << ")"; break;
    case SemanticsKind::Weighted:
      os << "weighted(";
      for (std::size_t i = 0; i < weights.size(); ++i) os << (i ? "," : "") << weights[i];
      os << ")";
      break;
  }
  return os.str();
}

ReprTable::ReprTable(Semantics semantics, std::vector<std::uint64_t> counts, std::size_t source_size)
    : semantics_(std::move(semantics)), counts_(std::move(counts)), source_size_(source_size) {
  if (counts_.empty()) fail(ErrorCode::InvalidArgument, "a table needs at least the entry for n = 0");
}

std::uint64_t ReprTable::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts_) sum = checked_add(sum, c);
  return sum;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  UInt128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) fail(ErrorCode::Overflow, "binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

ReprTable repr_multiset(const IntSet& a, int h, std::uint64_t max_n, Backend backend) {
  if (h < 1) fail(ErrorCode::InvalidArgument, "repr_multiset needs h >= 1");
  check_table_length(max_n);
  auto parts = pruned(a, max_n);
  if (backend == Backend::Auto) {
    const double enum_cost = approx_binomial(static_cast<double>(parts.size() + h - 1), h);
    const double dp_cost = static_cast<double>(h) * static_cast<double>(parts.size()) * static_cast<double>(max_n + 1);
    backend = enum_cost <= dp_cost ? Backend::Enumeration : Backend::DynamicProgram;
  }
  std::vector<std::uint64_t> counts;
  if (backend == Backend::DynamicProgram) {
    counts = multiset_dp(parts, h, max_n);
  } else {
    counts.assign(max_n + 1, 0);
    if (!parts.empty()) enumerate_nondecreasing(parts, h, 0, 0, false, max_n, counts.data());
  }
  return ReprTable(Semantics::multiset(h), std::move(counts), a.size());
}

ReprTable repr_strict(const IntSet& a, int k, std::uint64_t max_n, Backend backend) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "repr_strict needs k >= 1");
  check_table_length(max_n);
  if (k == 1) return ReprTable(Semantics::strict(1), std::vector<std::uint64_t>(max_n + 1, 0), a.size());
  auto parts = pruned(a, max_n);
  if (backend == Backend::Auto) {
    const double enum_cost = approx_binomial(static_cast<double>(parts.size()), k);
    const double dp_cost = static_cast<double>(k) * static_cast<double>(parts.size()) * static_cast<double>(max_n + 1);
    backend = enum_cost <= dp_cost ? Backend::Enumeration : Backend::DynamicProgram;
  }
  std::vector<std::uint64_t> counts;
  if (backend == Backend::DynamicProgram) {
    // with positive parts and k >= 2 the largest part is automatically < n
    counts = strict_dp(parts, k, max_n);
  } else {
    counts.assign(max_n + 1, 0);
    if (!parts.empty()) enumerate_nondecreasing(parts, k, 0, 0, true, max_n, counts.data());
  }
  return ReprTable(Semantics::strict(k), std::move(counts), a.size());
}

ReprTable repr_weighted(const IntSet& d, std::span<const std::uint32_t> f, std::uint64_t max_m, Backend backend) {
  if (f.empty()) fail(ErrorCode::InvalidArgument, "repr_weighted needs at least one weight");
  if (f.size() > 8) fail(ErrorCode::InvalidArgument, "repr_weighted supports at most 8 weights");
  for (auto w : f)
    if (w == 0) fail(ErrorCode::InvalidArgument, "weights must be positive");
  check_table_length(max_m);
  const std::uint32_t min_w = *std::min_element(f.begin(), f.end());
  auto parts = pruned(d, max_m / min_w);
  Semantics sem = Semantics::weighted(std::vector<std::uint32_t>(f.begin(), f.end()));
  if (backend == Backend::Auto) {
    double enum_cost = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) enum_cost *= static_cast<double>(parts.size());
    const double dp_cost = static_cast<double>(partition_terms(f).size() * f.size()) *
                           static_cast<double>(parts.size()) * static_cast<double>(max_m + 1);
    backend = enum_cost <= dp_cost ? Backend::Enumeration : Backend::DynamicProgram;
  }
  std::vector<std::uint64_t> counts;
  if (backend == Backend::DynamicProgram) {
    counts = weighted_dp(parts, f, max_m);
  } else {
    counts.assign(max_m + 1, 0);
    if (parts.size() >= f.size()) {
      std::uint64_t floor = 0;
      for (auto w : f) floor += static_cast<std::uint64_t>(w) * parts.front();
      std::vector<char> used(parts.size(), 0);
      enumerate_weighted(parts, f, 0, 0, floor, used, max_m, counts.data());
    }
  }
  return ReprTable(std::move(sem), std::move(counts), d.size());
}

std::vector<std::uint64_t> pairsum_histogram(const IntSet& a, int h) {
  if (h < 1) fail(ErrorCode::InvalidArgument, "pairsum_histogram needs h >= 1");
  const std::uint64_t top = a.empty() ? 0 : static_cast<std::uint64_t>(h) * a.max();
  auto table = repr_multiset(a, h, top);
  return {table.counts().begin(), table.counts().end()};
}

// ---- serialization ----

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) fail(ErrorCode::Io, "truncated table dump");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

constexpr char kMagic[4] = {'B', 'H', 'R', 'T'};

}  // namespace

void write_csv(std::ostream& out, const ReprTable& table) {
  out << "n,count\n";
  const auto counts = table.counts();
  for (std::size_t n = 0; n < counts.size(); ++n) out << n << ',' << counts[n] << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing CSV table");
}

void write_binary(std::ostream& out, const ReprTable& table) {
  const auto& sem = table.semantics();
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(sem.kind));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(sem.order));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(sem.weights.size()));
  for (auto w : sem.weights) put_le<std::uint32_t>(out, w);
  put_le<std::uint64_t>(out, table.source_size());
  put_le<std::uint64_t>(out, table.max_n());
  for (auto c : table.counts()) put_le<std::uint64_t>(out, c);
  if (!out) fail(ErrorCode::Io, "failed writing binary table");
}

ReprTable read_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || !std::equal(magic, magic + 4, kMagic)) fail(ErrorCode::Io, "not a table dump (bad magic)");
  if (get_le<std::uint32_t>(in) != 1) fail(ErrorCode::Io, "unsupported table dump version");
  Semantics sem;
  const auto kind = get_le<std::uint8_t>(in);
  if (kind < 1 || kind > 3) fail(ErrorCode::Io, "unknown semantics tag");
  sem.kind = static_cast<SemanticsKind>(kind);
  sem.order = get_le<std::uint8_t>(in);
  const auto nweights = get_le<std::uint16_t>(in);
  for (std::uint16_t i = 0; i < nweights; ++i) sem.weights.push_back(get_le<std::uint32_t>(in));
  const auto source_size = get_le<std::uint64_t>(in);
  const auto max_n = get_le<std::uint64_t>(in);
  check_table_length(max_n);
  std::vector<std::uint64_t> counts(max_n + 1);
  for (auto& c : counts) c = get_le<std::uint64_t>(in);
  return ReprTable(std::move(sem), std::move(counts), static_cast<std::size_t>(source_size));
}

}  // namespace bhset
