#include "ticklab/waitstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>

#include "ticklab/error.hpp"
#include "ticklab/parallel.hpp"
#include "ticklab/stats.hpp"

namespace ticklab {

double WeibullFit::scale() const { return std::pow(alpha, -1.0 / beta); }

double WeibullFit::survival(double t) const { return std::exp(-alpha * std::pow(t, beta)); }

double WeibullFit::implied_mean() const { return scale() * std::tgamma(1.0 + 1.0 / beta); }

// ---- survival curves -----------------------------------------------------------

namespace {

std::vector<double> make_grid(double lo, double hi, const GridSpec& spec) {
  require(spec.points >= 2, Error::Kind::invalid_argument, "survival grid needs at least two points");
  std::vector<double> grid(spec.points);
  const double steps = static_cast<double>(spec.points - 1);
  if (spec.kind == GridSpec::Kind::logarithmic) {
    require(lo > 0.0, Error::Kind::invalid_argument, "logarithmic grid needs a positive lower end");
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < spec.points; ++i) grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / steps);
    grid.front() = lo;
    grid.back() = hi;
  } else {
    for (std::size_t i = 0; i < spec.points; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / steps;
  }
  return grid;
}

std::vector<double> survival_on(std::vector<double> sorted, std::span<const double> grid) {
  std::vector<double> out(grid.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), grid[i]);
    out[i] = static_cast<double>(above) / n;
  }
  return out;
}

}  // namespace

SurvivalCurve empirical_survival_at(const WaitingTimeSample& sample, std::span<const double> grid) {
  require(!sample.durations.empty(), Error::Kind::insufficient_data, "empirical_survival: empty sample");
  std::vector<double> sorted = sample.durations;
  std::sort(sorted.begin(), sorted.end());
  return {std::vector<double>(grid.begin(), grid.end()), survival_on(std::move(sorted), grid)};
}

SurvivalCurve empirical_survival(const WaitingTimeSample& sample, const GridSpec& spec) {
  require(!sample.durations.empty(), Error::Kind::insufficient_data, "empirical_survival: empty sample");
  const auto [lo, hi] = std::minmax_element(sample.durations.begin(), sample.durations.end());
  const auto grid = make_grid(*lo, *hi, spec);
  return empirical_survival_at(sample, grid);
}

// ---- Weibull moment fit ------------------------------------------------------------

namespace {

// log(1 + cv^2) as a function of the shape.
double log_cv2p1(double beta) { return std::lgamma(1.0 + 2.0 / beta) - 2.0 * std::lgamma(1.0 + 1.0 / beta); }

double log_cv2p1_derivative(double beta) {
  using boost::math::digamma;
  const double b2 = beta * beta;
  return (-2.0 * digamma(1.0 + 2.0 / beta) + 2.0 * digamma(1.0 + 1.0 / beta)) / b2;
}

}  // namespace

double weibull_cv(double beta) {
  require(beta > 0.0, Error::Kind::invalid_argument, "Weibull shape must be positive");
  return std::sqrt(std::expm1(log_cv2p1(beta)));
}

double solve_weibull_shape(double cv) {
  require(std::isfinite(cv) && cv > 0.0, Error::Kind::degenerate, "Weibull fit: coefficient of variation must be positive");
  const double target = std::log1p(cv * cv);
  // log(1 + cv^2) decreases strictly in beta, so a sign change on the
  // bracket pins a unique root.
  auto g = [&](double b) { return log_cv2p1(b) - target; };
  double lo = kBetaLow, hi = kBetaHigh;
  const double g_lo = g(lo), g_hi = g(hi);
  require(g_lo > 0.0 && g_hi < 0.0, Error::Kind::numeric,
          "Weibull fit: coefficient of variation " + std::to_string(cv) + " outside the shape bracket [" +
              std::to_string(kBetaLow) + ", " + std::to_string(kBetaHigh) + "]");
  for (int it = 0; it < 200 && (hi - lo) > 1e-6 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double beta = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double step = g(beta) / log_cv2p1_derivative(beta);
    double next = beta - step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);  // keep Newton inside the bracket
    (g(next) > 0.0 ? lo : hi) = next;
    const bool converged = std::abs(next - beta) <= 1e-12 * beta;
    beta = next;
    if (converged) break;
  }
  require(std::abs(g(beta)) < 1e-9 || (hi - lo) <= 1e-10 * beta, Error::Kind::numeric,
          "Weibull fit: shape solver did not converge");
  return beta;
}

WeibullFit fit_weibull_moments(const WaitingTimeSample& sample) {
  require(sample.durations.size() >= 2, Error::Kind::insufficient_data, "Weibull fit needs at least two durations");
  WeibullFit fit;
  fit.mean_tau = mean(sample.durations);
  const double var = sample_variance(sample.durations);
  require(var > 0.0 && fit.mean_tau > 0.0, Error::Kind::degenerate, "Weibull fit: zero-variance sample");
  fit.std_tau = std::sqrt(var);
  fit.beta = solve_weibull_shape(fit.std_tau / fit.mean_tau);
  const double scale = fit.mean_tau / std::exp(std::lgamma(1.0 + 1.0 / fit.beta));
  fit.alpha = std::pow(scale, -fit.beta);
  return fit;
}

// ---- Anderson-Darling -------------------------------------------------------------

namespace {

constexpr double kProbFloor = 1e-300;

struct ClampedLogs {
  double log_cdf;
  double log_survival;
  bool clamped;
};

// ln F(z) and ln(1 - F(z)) for the unit exponential, F(z) = 1 - e^-z.
ClampedLogs exp_logs(double z) {
  const double cdf = -std::expm1(-z);
  const double surv = std::exp(-z);
  bool clamped = false;
  double log_cdf, log_surv;
  if (cdf < kProbFloor) {
    log_cdf = std::log(kProbFloor);
    clamped = true;
  } else {
    log_cdf = std::log(cdf);
  }
  if (surv < kProbFloor) {
    log_surv = std::log(kProbFloor);
    clamped = true;
  } else {
    log_surv = -z;
  }
  return {log_cdf, log_surv, clamped};
}

void check_ad_input(std::span<const double> z) {
  require(z.size() >= 8, Error::Kind::insufficient_data, "Anderson-Darling needs at least 8 observations");
  for (double v : z) require(std::isfinite(v) && v >= 0.0, Error::Kind::invalid_argument, "Anderson-Darling: invalid value");
}

AdResult finish(double sum, std::size_t n, std::size_t clamped) {
  AdResult r;
  r.n = n;
  r.statistic = -static_cast<double>(n) - sum / static_cast<double>(n);
  r.reject = r.statistic > AdResult::critical_005;
  r.clamped = clamped;
  return r;
}

}  // namespace

AdResult anderson_darling_unit_exponential(std::span<const double> z) {
  check_ad_input(z);
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<ClampedLogs> logs(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    logs[static_cast<std::size_t>(i)] = exp_logs(sorted[static_cast<std::size_t>(i)]);
  const double sum = par::blocked_sum(n, [&](std::size_t i) {
    const double w = 2.0 * static_cast<double>(i + 1) - 1.0;
    return w * (logs[i].log_cdf + logs[n - 1 - i].log_survival);
  });
  const auto clamped = static_cast<std::size_t>(
      std::count_if(logs.begin(), logs.end(), [](const ClampedLogs& l) { return l.clamped; }));
  return finish(sum, n, clamped);
}

namespace serial {

AdResult anderson_darling_unit_exponential(std::span<const double> z) {
  check_ad_input(z);
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  double sum = 0.0;
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = exp_logs(sorted[i]);
    const auto hi = exp_logs(sorted[n - 1 - i]);
    clamped += lo.clamped ? 1 : 0;
    sum += (2.0 * static_cast<double>(i + 1) - 1.0) * (lo.log_cdf + hi.log_survival);
  }
  return finish(sum, n, clamped);
}

}  // namespace serial

AdResult ad_exponentiality(const WaitingTimeSample& sample, const WeibullFit& fit) {
  require(fit.alpha > 0.0 && fit.beta > 0.0, Error::Kind::invalid_argument, "Anderson-Darling: invalid Weibull fit");
  std::vector<double> z(sample.durations.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = fit.alpha * std::pow(sample.durations[i], fit.beta);
  return anderson_darling_unit_exponential(z);
}

// ---- scaling collapse ---------------------------------------------------------------

RescaledSurvival rescale_survival_at(const WaitingTimeSample& sample, double beta_star, std::span<const double> x) {
  require(!sample.durations.empty(), Error::Kind::insufficient_data, "rescale_survival: empty sample");
  require(beta_star > 0.0, Error::Kind::invalid_argument, "rescale_survival: beta_star must be positive");
  const double m = mean(sample.durations);
  require(m > 0.0, Error::Kind::degenerate, "rescale_survival: non-positive mean duration");
  std::vector<double> scaled(sample.durations.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = sample.durations[i] / m;
  std::sort(scaled.begin(), scaled.end());

  RescaledSurvival out;
  out.mean_tau = m;
  out.empirical.grid.assign(x.begin(), x.end());
  out.empirical.survival = survival_on(std::move(scaled), x);
  out.reference.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.reference[i] = std::exp(-std::pow(x[i], beta_star));
  return out;
}

RescaledSurvival rescale_survival(const WaitingTimeSample& sample, double beta_star, const GridSpec& spec) {
  require(!sample.durations.empty(), Error::Kind::insufficient_data, "rescale_survival: empty sample");
  const double m = mean(sample.durations);
  require(m > 0.0, Error::Kind::degenerate, "rescale_survival: non-positive mean duration");
  const auto [lo, hi] = std::minmax_element(sample.durations.begin(), sample.durations.end());
  const auto grid = make_grid(*lo / m, *hi / m, spec);
  return rescale_survival_at(sample, beta_star, grid);
}

}  // namespace ticklab
