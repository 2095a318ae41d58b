#include "ticklab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ticklab/error.hpp"
#include "ticklab/parallel.hpp"
#include "ticklab/stats.hpp"

namespace ticklab {

double ReturnHistogram::mass() const {
  double m = 0.0;
  for (std::size_t k = 0; k < bins(); ++k) m += densities[k] * width(k);
  return m;
}

double ReturnHistogram::density_at(double x) const {
  if (bin_edges.empty() || x < bin_edges.front() || x >= bin_edges.back()) return 0.0;
  const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), x);
  return densities[static_cast<std::size_t>(it - bin_edges.begin()) - 1];
}

double ReturnHistogram::peak() const {
  return densities.empty() ? 0.0 : *std::max_element(densities.begin(), densities.end());
}

// ---- histogram ------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxBins = 50'000'000;

inline std::int64_t bin_index(double x, double width) {
  return static_cast<std::int64_t>(std::floor(x / width + 0.5));
}

}  // namespace

std::vector<std::uint64_t> bin_counts(std::span<const double> x, double width, std::int64_t offset, std::size_t bins) {
  std::vector<std::uint64_t> counts(bins, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i) {
      const std::int64_t k = bin_index(x[static_cast<std::size_t>(i)], width) + offset;
      if (k >= 0 && static_cast<std::size_t>(k) < bins) ++local[static_cast<std::size_t>(k)];
    }
#pragma omp critical(ticklab_bin_merge)
    for (std::size_t k = 0; k < bins; ++k) counts[k] += local[k];
  }
  return counts;
}

namespace serial {

std::vector<std::uint64_t> bin_counts(std::span<const double> x, double width, std::int64_t offset, std::size_t bins) {
  std::vector<std::uint64_t> counts(bins, 0);
  for (double v : x) {
    const std::int64_t k = bin_index(v, width) + offset;
    if (k >= 0 && static_cast<std::size_t>(k) < bins) ++counts[static_cast<std::size_t>(k)];
  }
  return counts;
}

}  // namespace serial

ReturnHistogram return_histogram(const ReturnSample& sample, double bin_width) {
  require(!sample.returns.empty(), Error::Kind::insufficient_data, "return_histogram: empty sample");
  require(bin_width > 0.0 && std::isfinite(bin_width), Error::Kind::invalid_argument, "return_histogram: bin width must be positive");
  std::int64_t reach = 0;
  for (double r : sample.returns) {
    require(std::isfinite(r), Error::Kind::invalid_argument, "return_histogram: non-finite return");
    reach = std::max(reach, std::abs(bin_index(r, bin_width)));
  }
  const auto bins = static_cast<std::size_t>(2 * reach + 1);
  require(bins <= kMaxBins, Error::Kind::invalid_argument, "return_histogram: bin width too small for the return range");

  const auto counts = bin_counts(sample.returns, bin_width, reach, bins);
  ReturnHistogram h;
  h.dt = sample.dt;
  h.n = sample.returns.size();
  h.bin_edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    h.bin_edges[k] = (static_cast<double>(static_cast<std::int64_t>(k) - reach) - 0.5) * bin_width;
  h.densities.resize(bins);
  const double norm = static_cast<double>(h.n) * bin_width;
  for (std::size_t k = 0; k < bins; ++k) h.densities[k] = static_cast<double>(counts[k]) / norm;
  return h;
}

// ---- density at zero -----------------------------------------------------------------------

namespace {

struct WindowFit {
  double slope;
  double stderr_slope;
  std::size_t points;
};

WindowFit fit_window(const std::vector<double>& sorted, double fraction, std::size_t min_points) {
  const std::size_t n = sorted.size();
  std::size_t m = std::max(min_points, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  require(m >= 3 && m <= n, Error::Kind::insufficient_data, "density_at_zero: too few points for the window");
  const auto lo0 = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin());
  const auto hi0 = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin());
  // An atom at zero wider than the window is kept whole, with half a window of
  // non-zero returns on each side, so the slope stays finite.
  if (hi0 - lo0 >= m) m = std::min(n, hi0 - lo0 + 2 * (m / 2));
  const std::size_t center = (lo0 + hi0) / 2;
  std::size_t begin = center >= m / 2 ? center - m / 2 : 0;
  std::size_t end = std::min(n, begin + m);
  begin = end - m;

  std::vector<double> x(sorted.begin() + static_cast<std::ptrdiff_t>(begin), sorted.begin() + static_cast<std::ptrdiff_t>(end));
  require(x.back() > x.front(), Error::Kind::degenerate, "density_at_zero: zero-width window");
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = static_cast<double>(begin + i + 1) / static_cast<double>(n);
  const auto fit = ols(x, f);
  return {fit.slope, fit.slope_stderr, m};
}

}  // namespace

ZeroDensity density_at_zero(std::span<const double> returns, const WindowSpec& window) {
  require(window.fraction > 0.0 && window.fraction <= 1.0, Error::Kind::invalid_argument,
          "density_at_zero: window fraction must lie in (0, 1]");
  require(returns.size() >= std::max<std::size_t>(window.min_points, 3), Error::Kind::insufficient_data,
          "density_at_zero: too few returns");
  std::vector<double> sorted(returns.begin(), returns.end());
  std::sort(sorted.begin(), sorted.end());
  require(sorted.front() <= 0.0 && sorted.back() >= 0.0 && sorted.front() < sorted.back(), Error::Kind::degenerate,
          "density_at_zero: returns do not straddle zero");

  const auto main = fit_window(sorted, window.fraction, window.min_points);
  ZeroDensity out;
  out.value = main.slope;
  out.standard_error = main.stderr_slope;
  out.window_points = main.points;
  auto probe = [&](double fraction) -> std::optional<double> {
    if (fraction > 1.0) return std::nullopt;
    try {
      return fit_window(sorted, fraction, window.min_points).slope;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  out.half_window = probe(window.fraction / 2.0);
  out.double_window = probe(window.fraction * 2.0);
  return out;
}

ZeroDensity density_at_zero(const ReturnSample& sample, const WindowSpec& window) {
  return density_at_zero(std::span<const double>(sample.returns), window);
}

// ---- Levy index -----------------------------------------------------------------------------

LevyEstimate levy_index(std::span<const std::pair<double, ReturnSample>> samples, const WindowSpec& window) {
  require(samples.size() >= 3, Error::Kind::insufficient_data, "levy_index needs at least three sampling widths");
  std::set<double> distinct;
  for (const auto& [dt, s] : samples) {
    require(dt > 0.0, Error::Kind::invalid_argument, "levy_index: dt must be positive");
    distinct.insert(dt);
  }
  require(distinct.size() >= 3, Error::Kind::insufficient_data, "levy_index needs at least three distinct sampling widths");

  LevyEstimate est;
  est.points.resize(samples.size());
  par::for_each_index(samples.size(), [&](std::size_t i) {
    const auto z = density_at_zero(samples[i].second, window);
    est.points[i] = {samples[i].first, z.value, z.standard_error};
  });

  std::vector<double> x, y;
  for (const auto& p : est.points) {
    require(p.p0 > 0.0, Error::Kind::numeric, "levy_index: non-positive density at zero");
    x.push_back(std::log(p.dt));
    y.push_back(std::log(p.p0));
  }
  const auto fit = ols(x, y);
  est.slope = -fit.slope;
  est.slope_stderr = fit.slope_stderr;
  est.intercept = fit.intercept;
  est.alpha_l = 1.0 / est.slope;
  est.in_stable_range = est.slope > 0.0 && est.alpha_l <= 2.0;
  return est;
}

ReturnHistogram rescale_distribution(const ReturnHistogram& histogram, double alpha_l) {
  require(alpha_l > 0.0, Error::Kind::invalid_argument, "rescale_distribution: alpha_L must be positive");
  require(histogram.dt.has_value() && *histogram.dt > 0.0, Error::Kind::invalid_argument,
          "rescale_distribution: histogram has no sampling width");
  const double factor = std::pow(*histogram.dt, 1.0 / alpha_l);
  ReturnHistogram out = histogram;
  for (double& e : out.bin_edges) e /= factor;
  for (double& d : out.densities) d *= factor;
  return out;
}

double collapse_distance(std::span<const ReturnHistogram> histograms, double half_width) {
  require(histograms.size() >= 2, Error::Kind::insufficient_data, "collapse_distance needs two or more histograms");
  require(half_width > 0.0, Error::Kind::invalid_argument, "collapse_distance: half width must be positive");
  double peak = 0.0;
  std::vector<double> probes;
  for (const auto& h : histograms) {
    peak = std::max(peak, h.peak());
    for (std::size_t k = 0; k < h.bins(); ++k)
      if (std::abs(h.center(k)) <= half_width) probes.push_back(h.center(k));
  }
  require(peak > 0.0 && !probes.empty(), Error::Kind::degenerate, "collapse_distance: nothing to compare");
  double worst = 0.0;
  for (double x : probes) {
    double lo = histograms[0].density_at(x), hi = lo;
    for (const auto& h : histograms.subspan(1)) {
      const double v = h.density_at(x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst / peak;
}

}  // namespace ticklab
