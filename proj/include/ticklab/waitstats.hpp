#pragma once

// Waiting-time statistics: Weibull survival fit by the method of moments,
// Anderson-Darling test of the transformed variable z = alpha * tau^beta
// against the unit exponential, and survival curves for scaling collapse.

#include <cstddef>
#include <span>
#include <vector>

#include "ticklab/tickdata.hpp"

namespace ticklab {

/// Survival law P(tau > t) = exp(-alpha * t^beta).
struct WeibullFit {
  double alpha = 0.0;  // s^-beta
  double beta = 0.0;
  double mean_tau = 0.0;
  double std_tau = 0.0;

  /// Scale s with alpha = s^-beta.
  double scale() const;
  double survival(double t) const;
  double implied_mean() const;
};

struct AdResult {
  static constexpr double critical_005 = 1.34;

  double statistic = 0.0;
  std::size_t n = 0;
  bool reject = false;
  /// Probabilities that had to be clamped away from 0 or 1.
  std::size_t clamped = 0;
};

struct SurvivalCurve {
  std::vector<double> grid;
  std::vector<double> survival;
};

struct GridSpec {
  enum class Kind { linear, logarithmic };
  Kind kind = Kind::logarithmic;
  std::size_t points = 200;
};

/// Survival curve on a grid spanning [min tau, max tau].
SurvivalCurve empirical_survival(const WaitingTimeSample& sample, const GridSpec& grid = {});
/// Survival (# durations > t) / N at explicit abscissae.
SurvivalCurve empirical_survival_at(const WaitingTimeSample& sample, std::span<const double> grid);

/// Bracket for the shape solver.
inline constexpr double kBetaLow = 0.05;
inline constexpr double kBetaHigh = 20.0;

/// Coefficient of variation of a Weibull law with the given shape.
double weibull_cv(double beta);

/// Solves weibull_cv(beta) = cv on [kBetaLow, kBetaHigh] (bisection, then
/// Newton polish) to relative tolerance 1e-10.
double solve_weibull_shape(double cv);

WeibullFit fit_weibull_moments(const WaitingTimeSample& sample);

AdResult ad_exponentiality(const WaitingTimeSample& sample, const WeibullFit& fit);

/// A^2 of data against the unit exponential, OpenMP kernel.
AdResult anderson_darling_unit_exponential(std::span<const double> z);

struct RescaledSurvival {
  SurvivalCurve empirical;       // abscissa t / <tau>
  std::vector<double> reference;  // exp(-x^beta_star) on the same grid
  double mean_tau = 0.0;
};

/// Empirical survival against t / <tau>, paired with exp(-x^beta_star).
/// The default grid is logarithmic over the sample's rescaled range.
RescaledSurvival rescale_survival(const WaitingTimeSample& sample, double beta_star, const GridSpec& grid = {});
RescaledSurvival rescale_survival_at(const WaitingTimeSample& sample, double beta_star, std::span<const double> x);

/// Weibull shape used for the collapse reference curve.
inline constexpr double kBetaStar = 0.78;

namespace serial {
AdResult anderson_darling_unit_exponential(std::span<const double> z);
}

}  // namespace ticklab
