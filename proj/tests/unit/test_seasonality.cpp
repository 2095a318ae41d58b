#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ticklab/error.hpp"
#include "ticklab/ncpp.hpp"
#include "ticklab/pipeline.hpp"
#include "ticklab/seasonality.hpp"

using namespace ticklab;

namespace {

TickSeries day_of(std::vector<std::pair<double, double>> ticks, double close = 100.0) {
  TickSeries s;
  s.session = {0.0, close};
  for (auto [e, lp] : ticks) s.ticks.push_back({e, std::exp(lp), std::nullopt});
  return s;
}

ReturnSample grid_sample(std::vector<double> r, double dt, std::size_t days = 1) {
  ReturnSample s;
  s.mode = ReturnMode::sampled;
  s.dt = dt;
  const std::size_t per_day = r.size() / days;
  for (std::size_t d = 0; d < days; ++d) s.day_starts.push_back(d * per_day);
  for (std::size_t i = 0; i < r.size(); ++i) s.epochs.push_back(dt * static_cast<double>(i % per_day + 1));
  s.returns = std::move(r);
  return s;
}

}  // namespace

TEST(Gamma, TwoOppositeReturns) {
  const double a = 0.003;
  const std::vector<double> r{a, -a};
  EXPECT_NEAR(*gamma_indicator(r), 2.0 * a, 1e-18);
  const std::vector<double> one{a};
  EXPECT_FALSE(gamma_indicator(one).has_value());
}

TEST(Gamma, TranslationInvariantAndHomogeneous) {
  oracle::Rng rng(1);
  std::normal_distribution<double> z(0.0, 0.01);
  std::vector<double> r(37);
  for (auto& v : r) v = z(rng);
  const double g = *gamma_indicator(r);
  std::vector<double> shifted(r), scaled(r);
  for (auto& v : shifted) v += 0.05;
  for (auto& v : scaled) v *= -3.0;
  EXPECT_NEAR(*gamma_indicator(shifted), g, 1e-14);
  EXPECT_NEAR(*gamma_indicator(scaled), 3.0 * g, 1e-14);
}

TEST(DayIntervalsTest, SingleTradeIntervalHasNoGamma) {
  // Returns land in the interval of their later trade.
  const auto d = day_intervals(day_of({{1, 0.0}, {12, 0.01}, {15, 0.0}, {25, 0.02}}, 30.0), 10.0);
  ASSERT_EQ(d.trades.size(), 3u);
  EXPECT_EQ(d.trades, (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(d.returns, (std::vector<std::size_t>{0, 2, 1}));
  EXPECT_TRUE(std::isnan(d.gamma[0]));
  EXPECT_NEAR(d.gamma[1], 0.02, 1e-15);
  EXPECT_TRUE(std::isnan(d.gamma[2]));
}

TEST(Profile, ActivitySumsToTradeCount) {
  const auto spec = SyntheticSpec{};
  auto profile = synthetic_profile(spec, 3);
  const auto sim = simulate(profile, 4, 3);
  for (const auto& day : sim.days) {
    const auto d = day_intervals(day, 300.0);
    std::size_t total = 0;
    for (auto n : d.trades) total += n;
    EXPECT_EQ(total, day.size());
  }
  const auto p = intraday_profile(sim.days, 300.0);
  double total = 0.0;
  for (double a : p.activity) total += a;
  EXPECT_NEAR(total * 3.0, static_cast<double>(sim.tick_count()), 1e-6);
}

TEST(Profile, PartialLastInterval) {
  const auto p = intraday_profile(std::vector<TickSeries>{day_of({{0, 0}, {1, 0.1}, {95, 0.2}, {96, 0.1}}, 100.0)}, 30.0);
  EXPECT_EQ(p.intervals, 4u);
  EXPECT_TRUE(p.last_partial);
  EXPECT_TRUE(p.has_gamma(3));
  EXPECT_FALSE(p.has_gamma(1));
}

TEST(Profile, KernelMatchesSerialReference) {
  const auto sim = simulate(synthetic_profile(SyntheticSpec{}, 5), 6, 4);
  const auto a = intraday_profile(sim.days, 300.0);
  const auto b = serial::intraday_profile(sim.days, 300.0);
  ASSERT_EQ(a.intervals, b.intervals);
  for (std::size_t k = 0; k < a.intervals; ++k) {
    EXPECT_EQ(a.activity[k], b.activity[k]);
    EXPECT_EQ(a.gamma_days[k], b.gamma_days[k]);
    if (a.has_gamma(k)) EXPECT_EQ(a.gamma[k], b.gamma[k]);
  }
}

TEST(Profile, SimulatedUShapeCorrelatesVolatilityAndActivity) {
  SyntheticSpec spec;
  spec.base_lambda = 1.0;
  const auto sim = simulate(synthetic_profile(spec, 7), 8, 1);
  const auto scatter = volatility_activity_scatter(intraday_profile(sim.days, 300.0));
  ASSERT_TRUE(scatter.correlation.has_value());
  EXPECT_GT(*scatter.correlation, 0.8);
}

TEST(Scatter, ProportionalAndConstant) {
  IntradayProfile p;
  p.dt = 1.0;
  p.intervals = 4;
  p.activity = {1, 2, 3, 4};
  p.gamma = {0.1, 0.2, 0.3, 0.4};
  p.gamma_days = {1, 1, 1, 1};
  EXPECT_NEAR(*volatility_activity_scatter(p).correlation, 1.0, 1e-12);
  p.gamma = {0.2, 0.2, 0.2, 0.2};
  const auto flat = volatility_activity_scatter(p);
  EXPECT_FALSE(flat.correlation.has_value());
  EXPECT_EQ(flat.pairs.size(), 4u);
}

TEST(Leverage, IidReturnsInsideNullBand) {
  oracle::Rng rng(9);
  std::normal_distribution<double> z(0.0, 1e-3);
  std::vector<double> r(100000);
  for (auto& v : r) v = z(rng);
  const auto s = grid_sample(r, 3.0, 10);
  const auto lags = symmetric_lags(3.0, 30.0);
  const auto c = leverage(s, lags);
  ASSERT_EQ(c.values.size(), 21u);
  EXPECT_TRUE(c.inside_null_band(3.0));
  // Pairs never cross days: lag 30 drops 10 pairs per day.
  EXPECT_EQ(c.pairs.back(), 100000u - 10u * 10u);
}

TEST(Leverage, ZeroLagVanishesOnSymmetricSample) {
  oracle::Rng rng(10);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> r;
  for (int i = 0; i < 5000; ++i) {
    const double v = z(rng);
    r.push_back(v);
    r.push_back(-v);
  }
  const double lag0[] = {0.0};
  EXPECT_NEAR(leverage(grid_sample(r, 1.0), lag0).values[0], 0.0, 1e-12);
}

TEST(Leverage, TimeReversalMirrorsLags) {
  // Periodic input: the reversed series at +lag equals the original at -lag.
  std::vector<double> r;
  for (int i = 0; i < 4200; ++i)
    r.push_back(std::sin(2.0 * std::numbers::pi * i / 7.0) + 0.4 * std::cos(2.0 * std::numbers::pi * i / 3.0 + 1.0));
  std::vector<double> rev(r.rbegin(), r.rend());
  const auto lags = symmetric_lags(1.0, 6.0);
  const auto a = leverage(grid_sample(r, 1.0), lags);
  const auto b = leverage(grid_sample(rev, 1.0), lags);
  const std::size_t m = lags.size();
  for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(b.values[i], a.values[m - 1 - i], 1e-12);
  EXPECT_GT(std::abs(a.values[m / 2 + 1]), 1e-3);
}

TEST(Leverage, Preconditions) {
  std::vector<double> r(100, 0.1);
  r[3] = -0.2;
  const double bad_lag[] = {4.0};
  EXPECT_THROW(leverage(grid_sample(r, 3.0), bad_lag), Error);
  ReturnSample trades = grid_sample(r, 3.0);
  trades.mode = ReturnMode::trade_by_trade;
  const double ok_lag[] = {3.0};
  EXPECT_THROW(leverage(trades, ok_lag), Error);
}

TEST(Leverage, SymmetricLagSet) {
  EXPECT_EQ(symmetric_lags(3.0, 9.0), (std::vector<double>{-9, -6, -3, 0, 3, 6, 9}));
}
