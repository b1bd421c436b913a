#include "dcss/mathutil.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace dcss {

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

// Rational approximation of the standard normal quantile (Acklam), used as
// the starting point for one Halley step on erfc. Accurate to ~1e-15 after
// refinement.
double norm_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r, x;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    q = p - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // Halley refinement against the CDF expressed with erfc.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

}  // namespace

double gaussian_q_inv(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  if (p >= 1.0) return -std::numeric_limits<double>::infinity();
  // Q(x) = 1 - Phi(x), so Q^{-1}(p) = Phi^{-1}(1 - p) = -Phi^{-1}(p).
  return -norm_quantile(p);
}

double tail_threshold(const std::vector<double>& sorted_asc, double tail_prob) {
  if (tail_prob >= 1.0) return -std::numeric_limits<double>::infinity();
  if (tail_prob <= 0.0) return std::numeric_limits<double>::infinity();
  const std::size_t n = sorted_asc.size();
  assert(n > 0);
  // Linear-interpolation quantile at 1 - tail_prob.
  const double pos = (1.0 - tail_prob) * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted_asc[lo] * (1.0 - frac) + sorted_asc[hi] * frac;
}

double exceed_fraction(const std::vector<double>& samples, double threshold) {
  if (samples.empty()) return 0.0;
  std::size_t count = 0;
  for (double v : samples) count += (v > threshold) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

void isotonic_increasing(std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) return;
  // Pool-adjacent-violators with unit weights.
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> size(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[blocks] = y[i];
    weight[blocks] = 1.0;
    size[blocks] = 1;
    ++blocks;
    while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
      const double w = weight[blocks - 2] + weight[blocks - 1];
      level[blocks - 2] =
          (level[blocks - 2] * weight[blocks - 2] +
           level[blocks - 1] * weight[blocks - 1]) /
          w;
      weight[blocks - 2] = w;
      size[blocks - 2] += size[blocks - 1];
      --blocks;
    }
  }
  std::size_t idx = 0;
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t j = 0; j < size[b]; ++j) y[idx++] = level[b];
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace dcss
