#pragma once

#include <cstdint>
#include <vector>

#include "int_set.hpp"

namespace bhset {

/// Exact rational exponent stored as numerator/denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Parameters of the random model: order h, window [1, N] and seed.
/// The density exponent alpha = 2/(4h-1) is derived from h and never stored
/// independently.
class ModelParams {
 public:
  ModelParams(int h, std::uint64_t window, std::uint64_t seed);

  int h() const noexcept { return h_; }
  std::uint64_t window() const noexcept { return window_; }
  std::uint64_t seed() const noexcept { return seed_; }

  Rational alpha() const noexcept { return {2, 4 * h_ - 1}; }
  /// 1 - alpha = (4h-3)/(4h-1); n is included with probability n^-(1-alpha).
  Rational decay() const noexcept { return {4 * h_ - 3, 4 * h_ - 1}; }

  ModelParams with_window(std::uint64_t window) const { return {h_, window, seed_}; }
  ModelParams with_seed(std::uint64_t seed) const { return {h_, window_, seed}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  int h_;
  std::uint64_t window_;
  std::uint64_t seed_;
};

void validate_order(int h);

double inclusion_probability(std::uint64_t n, int h);
inline double inclusion_probability(std::uint64_t n, const ModelParams& p) {
  return inclusion_probability(n, p.h());
}

// Counter-based generator. The draw for index n depends only on (seed, n):
//   k    = mix64(seed ^ 0x6A09E667F3BCC909)
//   bits = mix64(mix64(n ^ k) + k)
//   u    = (bits >> 11) * 2^-53
// where mix64 is the SplitMix64 finalizer. n is included iff u < p(n).
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t n) noexcept;
double uniform_draw(std::uint64_t seed, std::uint64_t n) noexcept;
bool is_included(std::uint64_t seed, std::uint64_t n, int h);

struct SampledSet {
  ModelParams params;
  IntSet elements;
};

SampledSet sample_set(const ModelParams& params);

/// Sum of inclusion probabilities over [lo, hi]; 0 for an empty range.
double expected_count(int h, std::uint64_t lo, std::uint64_t hi);
/// Sum of p(1-p) over [lo, hi].
double count_variance(int h, std::uint64_t lo, std::uint64_t hi);

}  // namespace bhset
