#include "qaoace/truncated_normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "qaoace/errors.hpp"

namespace qaoace {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Upper-tail probability Q(z) = P(Z > z).
double upper_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// z with Q(z) = q, q in (0, 1).
double upper_tail_inverse(double q) { return kSqrt2 * boost::math::erfc_inv(2.0 * q); }

// Standardized draw on [a, b] with 0 <= a < b (interval in the upper tail).
double upper_tail_quantile(double a, double b, double u) {
  const double qa = upper_tail(a);
  const double qb = upper_tail(b);
  const double mass = qa - qb;
  if (qa > 0.0 && mass > qa * 1e-12) {
    const double q = qa - u * mass;
    if (q > 0.0 && q < 1.0) return upper_tail_inverse(q);
  }
  if (qa == 0.0) {
    // Q(a) underflows: P(Z > a + t | Z > a) ~ exp(-a t).
    const double span = b - a;
    const double t = -std::log1p(-u * -std::expm1(-a * span)) / a;
    return a + t;
  }
  // Interval narrower than the resolution of Q: density is flat on it.
  return a + u * (b - a);
}

}  // namespace

double truncated_normal_quantile(double mean, double variance, double lo, double hi, double u) {
  if (!(lo < hi)) throw InvalidArgument("truncated normal needs lo < hi");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidArgument("truncated normal needs a positive finite variance");
  }
  if (!std::isfinite(mean)) throw InvalidArgument("truncated normal needs a finite mean");
  u = std::clamp(u, 0.0, 1.0);

  const double sd = std::sqrt(variance);
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;

  double z;
  if (a >= 0.0) {
    z = upper_tail_quantile(a, b, u);
  } else if (b <= 0.0) {
    z = -upper_tail_quantile(-b, -a, 1.0 - u);
  } else {
    // Interval contains the mean; plain CDF arithmetic is accurate here.
    const double pa = upper_tail(-a);  // P(Z < a) = Q(-a)
    const double pb = 1.0 - upper_tail(b);
    const double p = pa + u * (pb - pa);
    z = (p <= 0.0) ? a : (p >= 1.0) ? b : -upper_tail_inverse(p);
  }
  return std::clamp(mean + sd * z, lo, hi);
}

double sample_truncated_normal(double mean, double variance, double lo, double hi, Rng& rng) {
  // Midpoint of one of 2^53 cells, never exactly 0 or 1.
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return truncated_normal_quantile(mean, variance, lo, hi, u);
}

}  // namespace qaoace
