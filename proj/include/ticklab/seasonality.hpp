#pragma once

// Intraday seasonality: the gamma volatility indicator and trade activity on
// a fixed grid of width dt, their scatter relation, and the leverage
// correlation function of grid-sampled returns.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ticklab/tickdata.hpp"

namespace ticklab {

struct IntradayProfile {
  double dt = 0.0;
  std::size_t intervals = 0;
  bool last_partial = false;
  /// Day-averaged gamma(k); NaN where no day had two or more returns.
  std::vector<double> gamma;
  /// Number of days contributing to gamma(k).
  std::vector<std::size_t> gamma_days;
  /// Day-averaged trade count N_k.
  std::vector<double> activity;
  std::size_t days_averaged = 0;

  bool has_gamma(std::size_t k) const;
};

/// Per-day interval statistics; the building block of intraday_profile.
struct DayIntervals {
  std::vector<double> gamma;           // NaN when fewer than two returns
  std::vector<std::size_t> trades;
  std::vector<std::size_t> returns;
};

/// Mean absolute deviation from the mean with the (m - 1) normalizer;
/// empty for fewer than two values.
std::optional<double> gamma_indicator(std::span<const double> returns);

/// Splits one day into intervals of width dt. Trade-by-trade returns go to
/// the interval holding the later trade of their pair.
DayIntervals day_intervals(const TickSeries& day, double dt);

IntradayProfile intraday_profile(std::span<const TickSeries> days, double dt);

/// Index variant: activity counts returns instead of trades.
IntradayProfile intraday_profile(const ReturnSample& sample, double dt, const SessionBounds& session);

struct VolatilityActivity {
  std::vector<std::pair<double, double>> pairs;  // (N, gamma), ordered by k
  std::optional<double> correlation;              // empty for zero variance
};

VolatilityActivity volatility_activity_scatter(const IntradayProfile& profile);

struct LeverageCurve {
  std::vector<double> lags;
  std::vector<double> values;
  /// Standard error of each value from the spread of the products.
  std::vector<double> standard_errors;
  std::vector<std::size_t> pairs;
  double variance = 0.0;

  /// True when every |L| lies within sigmas standard errors of zero.
  bool inside_null_band(double sigmas = 3.0) const;
};

/// L(lag) = mean[r(t+lag)^2 r(t)] / var[r]^2 over pairs inside one day.
/// Lags may be negative and must be multiples of the sample's grid spacing.
LeverageCurve leverage(const ReturnSample& sample, std::span<const double> lags);

/// Symmetric lag set {-max..-step, 0, step..max}.
std::vector<double> symmetric_lags(double step, double max_lag);

namespace serial {
IntradayProfile intraday_profile(std::span<const TickSeries> days, double dt);
}

}  // namespace ticklab
