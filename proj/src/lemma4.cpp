#include "lemma4.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "error.hpp"
#include "random_model.hpp"

namespace bhset::lemma4 {

namespace {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) fail(ErrorCode::Domain, std::string(name) + " must lie in (0,1)");
}

double decay_of(int h) { return static_cast<double>(4 * h - 3) / static_cast<double>(4 * h - 1); }

void finish(RatioCurve& curve) {
  curve.sup_ratio = 0.0;
  for (const auto& p : curve.points) {
    if (!(p.lhs > 0.0 && p.rhs > 0.0 && std::isfinite(p.ratio)))
      fail(ErrorCode::Internal, "ratio curve point with non-positive or non-finite value");
    if (p.ratio > curve.sup_ratio) {
      curve.sup_ratio = p.ratio;
      curve.argmax_M = p.M;
    }
  }
}

// Integral of (x + c)^mu x^nu over [X, inf) by the binomial series in c/X.
// Needs |c| <= X/4 and mu + nu < -1. Returns value; remainder bound in *bound.
double tail_integral(double X, double c, double mu, double nu, double* bound) {
  const double ratio = c / X;
  const double scale = std::pow(X, mu + nu + 1.0);
  double binom = 1.0, power = 1.0, total = 0.0, last = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double e = mu + nu + 1.0 - k;
    const double term = binom * power * scale / (-e);
    total += term;
    last = std::fabs(term);
    if (k > 2 && last <= 1e-18 * std::fabs(total)) break;
    binom *= (mu - k) / (k + 1.0);
    power *= ratio;
  }
  if (bound) *bound = last * 2.0;
  return total;
}

using cplx = std::complex<double>;

void fft(std::vector<cplx>& a, const std::vector<cplx>& roots, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx w = roots[k * step];
        if (inverse) w = std::conj(w);
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

std::vector<double> convolve_fft(const std::vector<double>& x, const std::vector<double>& y, std::size_t len) {
  std::size_t n = 1;
  while (n < 2 * len) n <<= 1;
  std::vector<cplx> roots(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    roots[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  std::vector<cplx> fx(n), fy(n);
  for (std::size_t i = 0; i < len && i < x.size(); ++i) fx[i] = x[i];
  for (std::size_t i = 0; i < len && i < y.size(); ++i) fy[i] = y[i];
  fft(fx, roots, false);
  fft(fy, roots, false);
  for (std::size_t i = 0; i < n; ++i) fx[i] *= fy[i];
  fft(fx, roots, true);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = fx[i].real();
  return out;
}

std::vector<double> convolve_direct(const std::vector<double>& x, const std::vector<double>& y, std::size_t len) {
  std::vector<double> out(len, 0.0);
  for (std::size_t m = 0; m < len; ++m) {
    Kahan acc;
    for (std::size_t i = 0; i <= m; ++i) {
      if (x[i] == 0.0 || y[m - i] == 0.0) continue;
      acc.add(x[i] * y[m - i]);
    }
    out[m] = acc.sum;
  }
  return out;
}

std::vector<double> balanced_curve(int l, const std::vector<double>& w, std::size_t len) {
  if (l == 1) return w;
  const auto left = balanced_curve((l + 1) / 2, w, len);
  const auto right = balanced_curve(l / 2, w, len);
  return convolve_direct(left, right, len);
}

}  // namespace

const char* part_name(Part part) {
  switch (part) {
    case Part::I: return "i";
    case Part::II: return "ii";
    case Part::III: return "iii";
    case Part::IV: return "iv";
  }
  return "?";
}

Part parse_part(const std::string& text) {
  if (text == "i" || text == "1") return Part::I;
  if (text == "ii" || text == "2") return Part::II;
  if (text == "iii" || text == "3") return Part::III;
  if (text == "iv" || text == "4") return Part::IV;
  fail(ErrorCode::InvalidArgument, "unknown part '" + text + "' (expected i, ii, iii or iv)");
}

const RatioPoint* RatioCurve::find(std::int64_t M) const {
  auto it = std::lower_bound(points.begin(), points.end(), M, [](const RatioPoint& p, std::int64_t m) { return p.M < m; });
  return it != points.end() && it->M == M ? &*it : nullptr;
}

std::vector<double> power_weights(double gamma, std::size_t len) {
  std::vector<double> w(len, 0.0);
  for (std::size_t z = 1; z < len; ++z) w[z] = std::pow(static_cast<double>(z), -gamma);
  return w;
}

std::vector<double> composition_curve(int l, double gamma, std::size_t len, BuildOrder order) {
  if (l < 1) fail(ErrorCode::InvalidArgument, "composition length must be >= 1");
  const auto w = power_weights(gamma, len);
  if (order == BuildOrder::Balanced) return balanced_curve(l, w, len);
  auto cur = w;
  for (int j = 2; j <= l; ++j) cur = convolve_direct(cur, w, len);
  return cur;
}

std::vector<double> composition_curve_fft(int l, double gamma, std::size_t len) {
  if (l < 1) fail(ErrorCode::InvalidArgument, "composition length must be >= 1");
  const auto w = power_weights(gamma, len);
  auto cur = w;
  for (int j = 2; j <= l; ++j) {
    cur = convolve_fft(cur, w, len);
    for (std::size_t m = 0; m < std::min<std::size_t>(len, static_cast<std::size_t>(j)); ++m) cur[m] = 0.0;
  }
  return cur;
}

std::vector<PowerTerm> composition_asymptotics(int l, double gamma) {
  const double g = std::tgamma(1.0 - gamma);
  const double zeta = std::riemann_zeta(gamma);
  std::vector<PowerTerm> terms;
  double binom = 1.0;
  for (int j = 0; j < l; ++j) {
    const double a = (l - j) * (1.0 - gamma);
    terms.push_back({binom * std::pow(g, l - j) * std::pow(zeta, j) / std::tgamma(a), a - 1.0});
    binom = binom * (l - j) / (j + 1.0);
  }
  return terms;
}

RatioCurve part_i(double alpha, double beta, std::int64_t M_max) {
  require_open_unit(alpha, "alpha");
  require_open_unit(beta, "beta");
  if (M_max < 2) fail(ErrorCode::InvalidArgument, "M_max must be >= 2");
  RatioCurve curve;
  curve.params = {Part::I, alpha, beta, 0, 0, 0, 0};
  const auto pa = power_weights(alpha, static_cast<std::size_t>(M_max));
  const auto pb = power_weights(beta, static_cast<std::size_t>(M_max));
  curve.points.reserve(static_cast<std::size_t>(M_max - 1));
  for (std::int64_t M = 2; M <= M_max; ++M) {
    Kahan acc;
    for (std::int64_t n = 1; n < M; ++n) acc.add(pa[static_cast<std::size_t>(n)] * pb[static_cast<std::size_t>(M - n)]);
    const double rhs = std::pow(static_cast<double>(M), 1.0 - alpha - beta);
    curve.points.push_back({M, acc.sum, rhs, acc.sum / rhs});
  }
  curve.limit_ratio = std::tgamma(1.0 - alpha) * std::tgamma(1.0 - beta) / std::tgamma(2.0 - alpha - beta);
  finish(curve);
  return curve;
}

RatioCurve part_ii(double alpha, double beta, std::int64_t M_lo, std::int64_t M_hi, double tail_eps) {
  require_open_unit(alpha, "alpha");
  require_open_unit(beta, "beta");
  if (alpha + beta <= 1.0) fail(ErrorCode::Divergent, "part ii diverges unless alpha + beta > 1");
  if (M_lo > M_hi) fail(ErrorCode::InvalidArgument, "empty M range");
  if (!(tail_eps > 0.0)) fail(ErrorCode::InvalidArgument, "tail_eps must be positive");
  RatioCurve curve;
  curve.params = {Part::II, alpha, beta, 0, 0, 0, 0};
  const std::int64_t max_abs = std::max<std::int64_t>(std::llabs(M_lo), std::llabs(M_hi));
  std::vector<double> pa = power_weights(alpha, static_cast<std::size_t>(6 * (max_abs + 1) + 1024));
  std::vector<double> pb = power_weights(beta, static_cast<std::size_t>(6 * (max_abs + 1) + 1024));
  auto fetch = [](std::vector<double>& table, double exponent, std::int64_t x) {
    if (static_cast<std::size_t>(x) >= table.size()) return std::pow(static_cast<double>(x), -exponent);
    return table[static_cast<std::size_t>(x)];
  };

  for (std::int64_t M = M_lo; M <= M_hi; ++M) {
    std::int64_t cut = std::max<std::int64_t>(4 * (std::llabs(M) + 1), 256);
    Kahan head;
    std::int64_t done = 0;
    while (true) {
      for (std::int64_t n = done + 1; n <= cut; ++n)
        head.add(fetch(pa, alpha, std::llabs(n + M) + 1) * fetch(pb, beta, n));
      done = cut;
      // past the cut n + M + 1 > 0, so the summand is (x + c)^-alpha x^-beta
      const double c = static_cast<double>(M + 1);
      const double X = static_cast<double>(cut) + 0.5;
      double series_bound = 0.0;
      const double tail = tail_integral(X, c, -alpha, -beta, &series_bound);
      const double u = std::pow(X + c, -alpha), v = std::pow(X, -beta);
      const double d1 = -alpha * u / (X + c) * v - beta * u * v / X;
      const double d2 = alpha * (alpha + 1) * u / ((X + c) * (X + c)) * v + 2 * alpha * beta * u * v / ((X + c) * X) +
                        beta * (beta + 1) * u * v / (X * X);
      const double bound = (d2 + std::fabs(d1)) / 24.0 + series_bound;
      const double lhs = head.sum + tail;
      if (bound <= tail_eps * lhs) {
        const double rhs = std::pow(static_cast<double>(std::llabs(M) + 1), 1.0 - alpha - beta);
        curve.points.push_back({M, lhs, rhs, lhs / rhs});
        curve.tail_error = std::max(curve.tail_error, bound / lhs);
        break;
      }
      if (cut > (std::int64_t{1} << 30)) fail(ErrorCode::Divergent, "part ii tail bound not met");
      cut *= 2;
    }
  }
  finish(curve);
  return curve;
}

RatioCurve part_iii(int l, int h, std::int64_t M_max) {
  validate_order(h);
  if (l < 1 || l > 2 * h) fail(ErrorCode::Domain, "part iii needs 1 <= l <= 2h");
  if (M_max < l) fail(ErrorCode::InvalidArgument, "M_max must be >= l");
  const double gamma = decay_of(h);
  RatioCurve curve;
  curve.params = {Part::III, 0, 0, l, 0, 0, h};
  const auto f = composition_curve(l, gamma, static_cast<std::size_t>(M_max) + 1);
  const double exponent = 1.0 - 2.0 * l / static_cast<double>(4 * h - 1);
  for (std::int64_t M = l; M <= M_max; ++M) {
    const double lhs = f[static_cast<std::size_t>(M)];
    const double rhs = std::pow(static_cast<double>(M), -exponent);
    curve.points.push_back({M, lhs, rhs, lhs / rhs});
  }
  curve.limit_ratio = std::pow(std::tgamma(1.0 - gamma), l) / std::tgamma(l * (1.0 - gamma));
  finish(curve);
  return curve;
}

std::vector<std::int64_t> sweep_grid(std::int64_t lo, std::int64_t hi) {
  std::set<std::int64_t> grid;
  for (std::int64_t M = std::max<std::int64_t>(lo, -256); M <= std::min<std::int64_t>(hi, 256); ++M) grid.insert(M);
  for (int sign : {1, -1}) {
    const std::int64_t reach = sign > 0 ? hi : -lo;
    for (int step = 0;; ++step) {
      const auto m = static_cast<std::int64_t>(std::llround(256.0 * std::pow(10.0, step / 64.0)));
      if (m > reach) break;
      grid.insert(sign * m);
    }
    if (reach > 256) grid.insert(sign * reach);
  }
  return {grid.begin(), grid.end()};
}

RatioCurve part_iv(int s, int t, int h, std::int64_t M_lo, std::int64_t M_hi, double tail_eps) {
  validate_order(h);
  if (t < 1) fail(ErrorCode::Domain, "part iv needs t >= 1");
  if (t > 2 * h) fail(ErrorCode::Domain, "part iv needs t <= 2h");
  if (s < 0 || s > t) fail(ErrorCode::Domain, "part iv needs 0 <= s <= t");
  if (M_lo > M_hi) fail(ErrorCode::InvalidArgument, "empty M range");
  const double gamma = decay_of(h);
  const double exponent = 1.0 - 2.0 * t / static_cast<double>(4 * h - 1);
  RatioCurve curve;
  curve.params = {Part::IV, 0, 0, 0, s, t, h};

  if (s == 0 || s == t) {
    // one-signed compositions: the part iii curve at |M|
    const std::int64_t sign = s == t ? 1 : -1;
    const std::int64_t from = sign > 0 ? std::max<std::int64_t>(M_lo, t) : M_lo;
    const std::int64_t to = sign > 0 ? M_hi : std::min<std::int64_t>(M_hi, -t);
    if (from <= to) {
      const std::int64_t reach = std::max<std::int64_t>(std::llabs(from), std::llabs(to));
      const auto f = composition_curve(t, gamma, static_cast<std::size_t>(reach) + 1);
      for (std::int64_t M = from; M <= to; ++M) {
        const double lhs = f[static_cast<std::size_t>(std::llabs(M))];
        const double rhs = std::pow(static_cast<double>(std::llabs(M) + 1), -exponent);
        curve.points.push_back({M, lhs, rhs, lhs / rhs});
      }
    }
    curve.limit_ratio = std::pow(std::tgamma(1.0 - gamma), t) / std::tgamma(t * (1.0 - gamma));
    finish(curve);
    return curve;
  }

  if (t > 2 * h - 1)
    fail(ErrorCode::Divergent, "part iv with 0 < s < t = 2h diverges: the summand decays like n^-(1-1/(4h-1))");

  const auto grid = sweep_grid(M_lo, M_hi);
  std::int64_t max_abs = 0;
  for (auto M : grid) max_abs = std::max<std::int64_t>(max_abs, std::llabs(M));
  std::int64_t cut = std::int64_t{1} << 19;
  while (cut < 8 * max_abs) cut <<= 1;
  const int r = t - s;
  const auto fs = composition_curve_fft(s, gamma, static_cast<std::size_t>(cut + max_abs + 2));
  const auto fr = composition_curve_fft(r, gamma, static_cast<std::size_t>(cut + 2));
  const auto as = composition_asymptotics(s, gamma);
  const auto ar = composition_asymptotics(r, gamma);

  auto tail_from = [&](std::int64_t from, std::int64_t M) {
    const double X = static_cast<double>(from) + 0.5;
    double total = 0.0;
    for (const auto& p : as)
      for (const auto& q : ar) total += p.coefficient * q.coefficient * tail_integral(X, static_cast<double>(M), p.exponent, q.exponent, nullptr);
    return total;
  };

  for (std::int64_t M : grid) {
    Kahan head;
    double half_head = 0.0;
    for (std::int64_t n = 1; n <= cut; ++n) {
      const std::int64_t x = n + M;
      if (x >= 1) head.add(fs[static_cast<std::size_t>(x)] * fr[static_cast<std::size_t>(n)]);
      if (n == cut / 2) half_head = head.sum;
    }
    const double lhs = head.sum + tail_from(cut, M);
    const double alt = half_head + tail_from(cut / 2, M);
    const double err = std::fabs(lhs - alt) / lhs;
    if (err > tail_eps)
      fail(ErrorCode::Divergent, "part iv tail estimate " + std::to_string(err) + " exceeds tail_eps at M = " + std::to_string(M));
    curve.tail_error = std::max(curve.tail_error, err);
    const double rhs = std::pow(static_cast<double>(std::llabs(M) + 1), -exponent);
    curve.points.push_back({M, lhs, rhs, lhs / rhs});
  }
  finish(curve);
  return curve;
}

double theil_sen_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::InvalidArgument, "theil_sen_slope needs equal lengths");
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
  if (slopes.empty()) return 0.0;
  const std::size_t mid = slopes.size() / 2;
  std::nth_element(slopes.begin(), slopes.begin() + static_cast<std::ptrdiff_t>(mid), slopes.end());
  if (slopes.size() % 2 == 1) return slopes[mid];
  const double upper = slopes[mid];
  const double lower = *std::max_element(slopes.begin(), slopes.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<StabilityCheck> stability(const RatioCurve& curve, std::int64_t anchor, double growth_limit,
                                      double slope_limit) {
  std::vector<StabilityCheck> out;
  for (int sign : {1, -1}) {
    const RatioPoint* at = curve.find(sign * anchor);
    if (!at) continue;
    std::vector<const RatioPoint*> branch;
    for (const auto& p : curve.points)
      if (sign * p.M >= anchor) branch.push_back(&p);
    std::sort(branch.begin(), branch.end(), [](auto* p, auto* q) { return std::llabs(p->M) < std::llabs(q->M); });

    StabilityCheck c;
    c.sign = sign;
    c.ratio_at_anchor = at->ratio;
    for (auto* p : branch)
      if (p->ratio > c.sup_beyond) {
        c.sup_beyond = p->ratio;
        c.argmax = p->M;
      }

    // geometric subsample keeps Theil-Sen quadratic cost bounded
    std::vector<const RatioPoint*> sample;
    const double lo = std::log(static_cast<double>(std::llabs(branch.front()->M)));
    const double hi = std::log(static_cast<double>(std::llabs(branch.back()->M)));
    constexpr int kSamples = 400;
    std::size_t cursor = 0;
    for (int i = 0; i < kSamples && cursor < branch.size(); ++i) {
      const double target = lo + (hi - lo) * i / (kSamples - 1);
      while (cursor + 1 < branch.size() && std::log(static_cast<double>(std::llabs(branch[cursor]->M))) < target) ++cursor;
      if (sample.empty() || sample.back() != branch[cursor]) sample.push_back(branch[cursor]);
    }
    std::vector<double> lx, ly;
    for (auto* p : sample) {
      lx.push_back(std::log(static_cast<double>(std::llabs(p->M))));
      ly.push_back(std::log(p->ratio));
    }
    c.slope = theil_sen_slope(lx, ly);
    c.bounded = c.sup_beyond <= growth_limit * c.ratio_at_anchor;
    c.flat = c.slope <= slope_limit;
    out.push_back(c);
  }
  return out;
}

}  // namespace bhset::lemma4
