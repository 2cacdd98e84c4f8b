#include "random_model.hpp"

#include <cmath>
#include <string>

namespace bhset {

void validate_order(int h) {
  if (h < 2) fail(ErrorCode::InvalidArgument, "order h must be >= 2, got " + std::to_string(h));
  if (h > 64) fail(ErrorCode::InvalidArgument, "order h is unreasonably large");
}

ModelParams::ModelParams(int h, std::uint64_t window, std::uint64_t seed)
    : h_(h), window_(window), seed_(seed) {
  validate_order(h);
  if (window < 1) fail(ErrorCode::InvalidArgument, "window N must be >= 1");
}

double inclusion_probability(std::uint64_t n, int h) {
  validate_order(h);
  if (n == 0) fail(ErrorCode::Domain, "inclusion probability undefined for n = 0");
  const double decay = static_cast<double>(4 * h - 3) / static_cast<double>(4 * h - 1);
  return std::pow(static_cast<double>(n), -decay);
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t n) noexcept {
  const std::uint64_t key = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  return mix64(mix64(n ^ key) + key);
}

double uniform_draw(std::uint64_t seed, std::uint64_t n) noexcept {
  return static_cast<double>(draw_bits(seed, n) >> 11) * 0x1.0p-53;
}

bool is_included(std::uint64_t seed, std::uint64_t n, int h) {
  return uniform_draw(seed, n) < inclusion_probability(n, h);
}

SampledSet sample_set(const ModelParams& params) {
  const double decay = params.decay().value();
  const std::uint64_t key = mix64(params.seed() ^ 0x6A09E667F3BCC909ULL);
  std::vector<Element> out;
  for (std::uint64_t n = 1; n <= params.window(); ++n) {
    const double u = static_cast<double>(mix64(mix64(n ^ key) + key) >> 11) * 0x1.0p-53;
    if (u < std::pow(static_cast<double>(n), -decay)) out.push_back(n);
  }
  return SampledSet{params, IntSet::from_sorted(std::move(out))};
}

double expected_count(int h, std::uint64_t lo, std::uint64_t hi) {
  validate_order(h);
  if (lo == 0) fail(ErrorCode::Domain, "expected_count range must start at >= 1");
  if (lo > hi) return 0.0;
  const double decay = static_cast<double>(4 * h - 3) / static_cast<double>(4 * h - 1);
  // summed from the small tail end upward keeps the rounding error small
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t n = hi; n >= lo; --n) {
    const double y = std::pow(static_cast<double>(n), -decay) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (n == lo) break;
  }
  return sum;
}

double count_variance(int h, std::uint64_t lo, std::uint64_t hi) {
  validate_order(h);
  if (lo == 0) fail(ErrorCode::Domain, "count_variance range must start at >= 1");
  if (lo > hi) return 0.0;
  const double decay = static_cast<double>(4 * h - 3) / static_cast<double>(4 * h - 1);
  double sum = 0.0;
  for (std::uint64_t n = hi; n >= lo; --n) {
    const double p = std::pow(static_cast<double>(n), -decay);
    sum += p * (1.0 - p);
    if (n == lo) break;
  }
  return sum;
}

}  // namespace bhset
