#pragma once

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ldplab::stats {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson(std::size_t hits, std::size_t trials, double z = kZ95) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// A probability estimate mapped through x -> -(1/n) log x.
struct RateInterval {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool lower_bound_only = false;  // zero hits: `value` is a one-sided bound
  double half_width() const noexcept { return 0.5 * (upper - lower); }
};

inline RateInterval rate_from_hits(std::size_t hits, std::size_t trials, double n) {
  RateInterval out;
  if (hits == 0) {
    out.value = std::log(static_cast<double>(trials)) / n;
    out.lower = out.value;
    out.upper = INFINITY;
    out.lower_bound_only = true;
    return out;
  }
  const Interval ci = wilson(hits, trials);
  out.value = -std::log(static_cast<double>(hits) / static_cast<double>(trials)) / n;
  out.lower = -std::log(ci.upper) / n;
  out.upper = -std::log(ci.lower) / n;
  return out;
}

struct MeanEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% interval from batch means
};

/// Batch-means estimate of the mean of `values` with a Student-t interval.
inline MeanEstimate batch_means(std::span<const double> values, std::size_t batches = 20) {
  MeanEstimate out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  double total = 0.0;
  for (double v : values) total += v;
  out.mean = total / static_cast<double>(n);
  batches = std::min(batches, n);
  if (batches < 2) {
    out.half_width = INFINITY;
    return out;
  }
  const std::size_t per = n / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += values[i];
    means[b] = s / static_cast<double>(per);
  }
  double mbar = 0.0;
  for (double m : means) mbar += m;
  mbar /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - mbar) * (m - mbar);
  const double se = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  const boost::math::students_t dist(static_cast<double>(batches - 1));
  out.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  return out;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Weighted least squares y ~ a + b x with weights 1/sigma^2.
inline SlopeFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> sigma) {
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sxx += w * (x[i] - xbar) * (x[i] - xbar);
    sxy += w * (x[i] - xbar) * (y[i] - ybar);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.slope_se = std::sqrt(1.0 / sxx);
  return fit;
}

}  // namespace ldplab::stats
