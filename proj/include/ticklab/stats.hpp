#pragma once

// Small statistics toolbox shared by the analysis modules.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ticklab {

/// Descriptive moments in the layout of the per-asset return tables.
/// variance is the unbiased sample variance; skewness and kurtosis are the
/// moment ratios m3/m2^1.5 and m4/m2^2 (kurtosis of a normal sample is 3).
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;

  double excess_kurtosis() const { return kurtosis - 3.0; }
};

Moments describe(std::span<const double> x);

double mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs n >= 2 and a
/// non-constant x; standard errors are zero when n == 2.
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Pearson correlation, empty when either variable has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
/// Spearman rank correlation (average ranks for ties).
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

std::vector<double> ranks(std::span<const double> x);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Same, for inputs that are already sorted ascending.
double ks_two_sample_sorted(std::span<const double> a, std::span<const double> b);

/// One-sample KS distance between sorted data and a continuous CDF.
template <class Cdf>
double ks_one_sample_sorted(std::span<const double> sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return d;
}

}  // namespace ticklab
