#include "ticklab/seasonality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ticklab/error.hpp"
#include "ticklab/parallel.hpp"
#include "ticklab/stats.hpp"

namespace ticklab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t interval_count(double length, double dt) {
  return static_cast<std::size_t>(std::ceil(length / dt - 1e-9));
}

std::size_t interval_of(double epoch, const SessionBounds& session, double dt, std::size_t intervals) {
  const double offset = std::max(0.0, epoch - session.open);
  return std::min(static_cast<std::size_t>(offset / dt), intervals - 1);
}

// Gamma per interval from returns already ordered by epoch.
void fill_gamma(std::span<const double> returns, std::span<const double> epochs, const SessionBounds& session, double dt,
                DayIntervals& out) {
  const std::size_t intervals = out.trades.size();
  out.gamma.assign(intervals, kNaN);
  out.returns.assign(intervals, 0);
  std::size_t i = 0;
  while (i < returns.size()) {
    const std::size_t k = interval_of(epochs[i], session, dt, intervals);
    std::size_t j = i;
    while (j < returns.size() && interval_of(epochs[j], session, dt, intervals) == k) ++j;
    out.returns[k] += j - i;
    if (const auto g = gamma_indicator(returns.subspan(i, j - i))) out.gamma[k] = *g;
    i = j;
  }
}

void check_grid(const SessionBounds& session, double dt) {
  require(dt > 0.0, Error::Kind::invalid_argument, "intraday profile: dt must be positive");
  require(dt <= session.length(), Error::Kind::invalid_argument, "intraday profile: dt exceeds the session length");
}

IntradayProfile reduce(const std::vector<DayIntervals>& per_day, const SessionBounds& session, double dt) {
  IntradayProfile p;
  p.dt = dt;
  p.intervals = interval_count(session.length(), dt);
  p.last_partial = static_cast<double>(p.intervals) * dt > session.length() + 1e-9;
  p.gamma.assign(p.intervals, 0.0);
  p.gamma_days.assign(p.intervals, 0);
  p.activity.assign(p.intervals, 0.0);
  p.days_averaged = per_day.size();
  for (const auto& day : per_day) {
    for (std::size_t k = 0; k < p.intervals; ++k) {
      p.activity[k] += static_cast<double>(day.trades[k]);
      if (!std::isnan(day.gamma[k])) {
        p.gamma[k] += day.gamma[k];
        ++p.gamma_days[k];
      }
    }
  }
  for (std::size_t k = 0; k < p.intervals; ++k) {
    p.activity[k] /= static_cast<double>(p.days_averaged);
    p.gamma[k] = p.gamma_days[k] > 0 ? p.gamma[k] / static_cast<double>(p.gamma_days[k]) : kNaN;
  }
  return p;
}

std::vector<const TickSeries*> complete_days(std::span<const TickSeries> days, double dt) {
  std::vector<const TickSeries*> usable;
  for (const auto& d : days) {
    if (d.ticks.size() < 2) continue;
    check_grid(d.session, dt);
    if (!usable.empty())
      require(d.session == usable.front()->session, Error::Kind::invalid_argument,
              "intraday profile: days have different session bounds");
    usable.push_back(&d);
  }
  require(!usable.empty(), Error::Kind::insufficient_data, "intraday profile: no day with two or more ticks");
  return usable;
}

}  // namespace

bool IntradayProfile::has_gamma(std::size_t k) const { return k < gamma.size() && !std::isnan(gamma[k]); }

std::optional<double> gamma_indicator(std::span<const double> returns) {
  if (returns.size() < 2) return std::nullopt;
  const double m = mean(returns);
  double acc = 0.0;
  for (double r : returns) acc += std::abs(r - m);
  return acc / static_cast<double>(returns.size() - 1);
}

DayIntervals day_intervals(const TickSeries& day, double dt) {
  check_grid(day.session, dt);
  const std::size_t intervals = interval_count(day.session.length(), dt);
  DayIntervals out;
  out.trades.assign(intervals, 0);
  for (const auto& t : day.ticks) ++out.trades[interval_of(t.epoch, day.session, dt, intervals)];
  std::vector<double> returns, epochs;
  if (day.ticks.size() >= 2) {
    returns.reserve(day.ticks.size() - 1);
    epochs.reserve(day.ticks.size() - 1);
    for (std::size_t i = 1; i < day.ticks.size(); ++i) {
      returns.push_back(std::log(day.ticks[i].price / day.ticks[i - 1].price));
      epochs.push_back(day.ticks[i].epoch);
    }
  }
  fill_gamma(returns, epochs, day.session, dt, out);
  return out;
}

IntradayProfile intraday_profile(std::span<const TickSeries> days, double dt) {
  const auto usable = complete_days(days, dt);
  std::vector<DayIntervals> per_day(usable.size());
  par::for_each_index(usable.size(), [&](std::size_t d) { per_day[d] = day_intervals(*usable[d], dt); });
  return reduce(per_day, usable.front()->session, dt);
}

namespace serial {

IntradayProfile intraday_profile(std::span<const TickSeries> days, double dt) {
  const auto usable = complete_days(days, dt);
  std::vector<DayIntervals> per_day;
  for (const auto* d : usable) per_day.push_back(day_intervals(*d, dt));
  return reduce(per_day, usable.front()->session, dt);
}

}  // namespace serial

IntradayProfile intraday_profile(const ReturnSample& sample, double dt, const SessionBounds& session) {
  check_grid(session, dt);
  require(sample.epochs.size() == sample.returns.size(), Error::Kind::invalid_argument,
          "intraday profile: returns carry no epochs");
  const std::size_t intervals = interval_count(session.length(), dt);
  std::vector<DayIntervals> per_day;
  for (std::size_t d = 0; d < sample.day_count(); ++d) {
    const auto [begin, end] = sample.day_range(d);
    if (end - begin < 1) continue;
    const auto r = std::span<const double>(sample.returns).subspan(begin, end - begin);
    const auto e = std::span<const double>(sample.epochs).subspan(begin, end - begin);
    DayIntervals day;
    day.trades.assign(intervals, 0);
    fill_gamma(r, e, session, dt, day);
    day.trades = day.returns;
    per_day.push_back(std::move(day));
  }
  require(!per_day.empty(), Error::Kind::insufficient_data, "intraday profile: no day with returns");
  return reduce(per_day, session, dt);
}

VolatilityActivity volatility_activity_scatter(const IntradayProfile& profile) {
  VolatilityActivity out;
  std::vector<double> n, g;
  for (std::size_t k = 0; k < profile.intervals; ++k) {
    if (!profile.has_gamma(k)) continue;
    out.pairs.emplace_back(profile.activity[k], profile.gamma[k]);
    n.push_back(profile.activity[k]);
    g.push_back(profile.gamma[k]);
  }
  require(out.pairs.size() >= 3, Error::Kind::insufficient_data, "volatility-activity scatter needs three or more intervals");
  out.correlation = pearson(n, g);
  return out;
}

// ---- leverage ------------------------------------------------------------------------------

bool LeverageCurve::inside_null_band(double sigmas) const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) > sigmas * standard_errors[i]) return false;
  return true;
}

std::vector<double> symmetric_lags(double step, double max_lag) {
  require(step > 0.0 && max_lag >= 0.0, Error::Kind::invalid_argument, "symmetric_lags: invalid step or range");
  const auto m = static_cast<long>(std::floor(max_lag / step + 1e-9));
  std::vector<double> lags;
  for (long k = -m; k <= m; ++k) lags.push_back(static_cast<double>(k) * step);
  return lags;
}

LeverageCurve leverage(const ReturnSample& sample, std::span<const double> lags) {
  require(sample.mode == ReturnMode::sampled && sample.dt.has_value(), Error::Kind::invalid_argument,
          "leverage needs grid-sampled returns");
  require(!lags.empty(), Error::Kind::invalid_argument, "leverage: no lags requested");
  const double dt = *sample.dt;
  const std::span<const double> r(sample.returns);
  require(r.size() >= 2, Error::Kind::insufficient_data, "leverage: too few returns");

  const double m = mean(r);
  double var = 0.0;
  for (double v : r) var += (v - m) * (v - m);
  var /= static_cast<double>(r.size());
  require(var > 0.0, Error::Kind::degenerate, "leverage: zero return variance");

  LeverageCurve curve;
  curve.variance = var;
  const double norm = var * var;
  for (double lag : lags) {
    const double steps_f = lag / dt;
    const double rounded = std::round(steps_f);
    require(std::abs(steps_f - rounded) <= 1e-9 * std::max(1.0, std::abs(steps_f)), Error::Kind::invalid_argument,
            "leverage: lag " + std::to_string(lag) + " is not a multiple of the grid spacing");
    const auto shift = static_cast<long>(rounded);
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t d = 0; d < sample.day_count(); ++d) {
      const auto [begin, end] = sample.day_range(d);
      for (std::size_t t = begin; t < end; ++t) {
        const long u = static_cast<long>(t) + shift;
        if (u < static_cast<long>(begin) || u >= static_cast<long>(end)) continue;
        const double future = r[static_cast<std::size_t>(u)];
        const double p = future * future * r[t];
        sum += p;
        sum_sq += p * p;
        ++count;
      }
    }
    require(count >= 2, Error::Kind::insufficient_data, "leverage: lag " + std::to_string(lag) + " leaves fewer than two pairs");
    const double n = static_cast<double>(count);
    const double mean_p = sum / n;
    const double var_p = std::max(0.0, (sum_sq - n * mean_p * mean_p) / (n - 1.0));
    curve.lags.push_back(lag);
    curve.values.push_back(mean_p / norm);
    curve.standard_errors.push_back(std::sqrt(var_p / n) / norm);
    curve.pairs.push_back(count);
  }
  return curve;
}

}  // namespace ticklab
