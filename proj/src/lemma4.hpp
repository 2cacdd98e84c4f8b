#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bhset::lemma4 {

enum class Part { I = 1, II, III, IV };

const char* part_name(Part part);
Part parse_part(const std::string& text);

struct Params {
  Part part = Part::I;
  double alpha = 0.0;  // parts i, ii
  double beta = 0.0;
  int l = 0;           // part iii
  int s = 0;           // part iv
  int t = 0;
  int h = 0;           // parts iii, iv
};

struct RatioPoint {
  std::int64_t M = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct RatioCurve {
  Params params;
  std::vector<RatioPoint> points;
  double sup_ratio = 0.0;
  std::int64_t argmax_M = 0;
  /// Largest tail error bound (ii) or tail error estimate (iv) relative to lhs.
  double tail_error = 0.0;
  /// lim ratio as M -> infinity, where it is known in closed form.
  std::optional<double> limit_ratio;

  const RatioPoint* find(std::int64_t M) const;
};

/// sum_{n=1}^{M-1} n^-alpha (M-n)^-beta against M^(1-alpha-beta), M in [2, M_max].
RatioCurve part_i(double alpha, double beta, std::int64_t M_max);

/// sum_{n>=1} (|n+M|+1)^-alpha n^-beta against (|M|+1)^(1-alpha-beta), every
/// integer M in [M_lo, M_hi]. The tail past the truncation point is the
/// midpoint integral; its certified error stays below tail_eps * lhs.
RatioCurve part_ii(double alpha, double beta, std::int64_t M_lo, std::int64_t M_hi, double tail_eps = 1e-6);

/// Sum over compositions z_1+..+z_l = M of prod z_i^-(4h-3)/(4h-1) against
/// M^-(1-2l/(4h-1)), M in [l, M_max].
RatioCurve part_iii(int l, int h, std::int64_t M_max);

/// Signed compositions z_1+..+z_s-(z_{s+1}+..+z_t) = M against
/// (|M|+1)^-(1-2t/(4h-1)). s = 0 and s = t reduce to part iii. For 0 < s < t
/// the sum converges only when t <= 2h-1; it is evaluated on the M grid of
/// sweep_grid() as an exact head plus an asymptotic tail.
RatioCurve part_iv(int s, int t, int h, std::int64_t M_lo, std::int64_t M_hi, double tail_eps = 1e-6);

/// Every M with |M| <= 256 in [lo, hi], then 64 geometric steps per decade.
std::vector<std::int64_t> sweep_grid(std::int64_t lo, std::int64_t hi);

// ---- building blocks ----

/// w[z] = z^-gamma for z >= 1, w[0] = 0.
std::vector<double> power_weights(double gamma, std::size_t len);

enum class BuildOrder { Sequential, Balanced };

/// l-fold self-convolution of power_weights truncated to len, by
/// compensated direct summation.
std::vector<double> composition_curve(int l, double gamma, std::size_t len, BuildOrder order = BuildOrder::Sequential);

/// Same curve through a radix-2 FFT; used for the long curves of part iv.
std::vector<double> composition_curve_fft(int l, double gamma, std::size_t len);

/// Leading terms of the composition curve for large M:
///   sum_{j<l} C(l,j) G^(l-j) zeta(gamma)^j M^((l-j)(1-gamma)-1) / Gamma((l-j)(1-gamma)),
/// G = Gamma(1-gamma). Relative error O(1/M).
struct PowerTerm {
  double coefficient;
  double exponent;
};
std::vector<PowerTerm> composition_asymptotics(int l, double gamma);

// ---- stability surrogate for "<<" ----

double theil_sen_slope(std::span<const double> x, std::span<const double> y);

struct StabilityCheck {
  int sign = 1;               // branch: M >= anchor (+1) or M <= -anchor (-1)
  double ratio_at_anchor = 0.0;
  double sup_beyond = 0.0;
  std::int64_t argmax = 0;
  double slope = 0.0;         // Theil-Sen slope of log ratio vs log |M|
  bool bounded = false;       // sup_beyond <= growth_limit * ratio_at_anchor
  bool flat = false;          // slope <= slope_limit
  bool passed() const { return bounded && flat; }
};

std::vector<StabilityCheck> stability(const RatioCurve& curve, std::int64_t anchor = 100, double growth_limit = 2.0,
                                      double slope_limit = 0.01);

}  // namespace bhset::lemma4
