#pragma once

// Return-distribution scaling: density histograms of sampled returns, the
// probability density at zero return, the Levy stability index from its
// power-law decay in dt, and the rescaling that collapses the histograms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ticklab/tickdata.hpp"

namespace ticklab {

/// Bin width used for index returns in the published histograms.
inline constexpr double kIndexBinWidth = 1e-5;

struct ReturnHistogram {
  std::vector<double> bin_edges;  // size() == densities.size() + 1
  std::vector<double> densities;
  std::optional<double> dt;
  std::size_t n = 0;

  std::size_t bins() const { return densities.size(); }
  double center(std::size_t k) const { return 0.5 * (bin_edges[k] + bin_edges[k + 1]); }
  double width(std::size_t k) const { return bin_edges[k + 1] - bin_edges[k]; }
  /// Sum of density * width; 1 for a normalized histogram.
  double mass() const;
  /// Step-function value at x (0 outside the support).
  double density_at(double x) const;
  double peak() const;
};

/// Normalized histogram with one bin centered on zero and a layout symmetric
/// about it.
ReturnHistogram return_histogram(const ReturnSample& sample, double bin_width);

struct WindowSpec {
  double fraction = 0.02;       // share of order statistics around r = 0
  std::size_t min_points = 50;
};

struct ZeroDensity {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t window_points = 0;
  /// Estimates with the window halved and doubled (empty when infeasible).
  std::optional<double> half_window;
  std::optional<double> double_window;
};

/// Slope of the empirical CDF at r = 0 by OLS over a central window of
/// order statistics.
ZeroDensity density_at_zero(const ReturnSample& sample, const WindowSpec& window = {});
ZeroDensity density_at_zero(std::span<const double> returns, const WindowSpec& window = {});

struct LevyPoint {
  double dt = 0.0;
  double p0 = 0.0;
  double p0_stderr = 0.0;
};

struct LevyEstimate {
  double alpha_l = 0.0;
  double slope = 0.0;  // magnitude of d log P0 / d log dt, = 1 / alpha_l
  double slope_stderr = 0.0;
  /// Regression intercept; absorbs the time-scale constant of the stable law.
  double intercept = 0.0;
  bool in_stable_range = false;
  std::vector<LevyPoint> points;
};

/// Log-log OLS of P0 against dt over at least three sampling widths.
LevyEstimate levy_index(std::span<const std::pair<double, ReturnSample>> samples, const WindowSpec& window = {});

/// Divides abscissae by dt^(1/alpha_l) and multiplies densities by it.
ReturnHistogram rescale_distribution(const ReturnHistogram& histogram, double alpha_l);

/// Largest pairwise gap between histograms on |x| <= half_width, relative to
/// the largest peak. Probed at every bin center inside the region.
double collapse_distance(std::span<const ReturnHistogram> histograms, double half_width);

/// Raw bin counts of floor(x / width + 1/2) + offset, OpenMP kernel.
std::vector<std::uint64_t> bin_counts(std::span<const double> x, double width, std::int64_t offset, std::size_t bins);

namespace serial {
std::vector<std::uint64_t> bin_counts(std::span<const double> x, double width, std::int64_t offset, std::size_t bins);
}

}  // namespace ticklab
