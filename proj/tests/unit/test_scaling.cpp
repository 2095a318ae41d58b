#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ticklab/error.hpp"
#include "ticklab/scaling.hpp"
#include "ticklab/stats.hpp"

using namespace ticklab;

namespace {

ReturnSample returns_of(std::vector<double> r, std::optional<double> dt = std::nullopt) {
  ReturnSample s;
  s.returns = std::move(r);
  s.epochs.resize(s.returns.size());
  for (std::size_t i = 0; i < s.epochs.size(); ++i) s.epochs[i] = static_cast<double>(i + 1);
  s.day_starts = {0};
  s.dt = dt;
  if (dt) s.mode = ReturnMode::sampled;
  return s;
}

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  oracle::Rng rng(seed);
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = z(rng);
  return x;
}

constexpr double kInvSqrt2Pi = 0.3989422804014327;

}  // namespace

TEST(Histogram, AllZeroReturnsSingleBin) {
  for (double w : {1e-5, 0.5}) {
    const auto h = return_histogram(returns_of({0, 0, 0, 0}), w);
    ASSERT_EQ(h.bins(), 1u);
    EXPECT_DOUBLE_EQ(h.densities[0], 1.0 / w);
    EXPECT_DOUBLE_EQ(h.center(0), 0.0);
  }
  EXPECT_DOUBLE_EQ(kIndexBinWidth, 1e-5);
}

TEST(Histogram, CenteredSymmetricLayout) {
  const auto h = return_histogram(returns_of({-0.26, 0.04, 0.31}), 0.1);
  EXPECT_EQ(h.bins() % 2, 1u);
  EXPECT_NEAR(h.center(h.bins() / 2), 0.0, 1e-15);
  EXPECT_NEAR(h.bin_edges.front(), -h.bin_edges.back(), 1e-12);
  EXPECT_NEAR(h.mass(), 1.0, 1e-12);
  EXPECT_NEAR(h.density_at(0.3), 1.0 / 3.0 / 0.1, 1e-9);
  EXPECT_DOUBLE_EQ(h.density_at(5.0), 0.0);
}

TEST(Histogram, NormalCentralBin) {
  const auto h = return_histogram(returns_of(normal_draws(1'000'000, 1)), 0.1);
  EXPECT_NEAR(h.density_at(0.0), kInvSqrt2Pi, 0.01 * kInvSqrt2Pi);
  EXPECT_NEAR(h.mass(), 1.0, 1e-12);
}

TEST(Histogram, KernelMatchesSerialReference) {
  const auto x = normal_draws(200001, 2);
  const auto a = bin_counts(x, 0.05, 200, 401);
  const auto b = serial::bin_counts(x, 0.05, 200, 401);
  EXPECT_EQ(a, b);
}

TEST(ZeroDensityTest, Uniform) {
  oracle::Rng rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> x(100000);
  for (auto& v : x) v = u(rng);
  const auto z = density_at_zero(std::span<const double>(x));
  EXPECT_NEAR(z.value, 1.0, 0.03);
  EXPECT_TRUE(z.half_window.has_value());
  EXPECT_TRUE(z.double_window.has_value());
  EXPECT_EQ(z.window_points, 2000u);
}

TEST(ZeroDensityTest, Normal) {
  const auto x = normal_draws(100000, 4);
  EXPECT_NEAR(density_at_zero(std::span<const double>(x)).value, kInvSqrt2Pi, 0.03 * kInvSqrt2Pi);
}

TEST(ZeroDensityTest, NoStraddleIsAnError) {
  const std::vector<double> x(100, 0.01);
  EXPECT_THROW(density_at_zero(std::span<const double>(x)), Error);
}

TEST(ZeroDensityTest, NegationSymmetry) {
  auto x = normal_draws(50001, 5);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) x.push_back(-x[i]);
  std::vector<double> neg(x);
  for (auto& v : neg) v = -v;
  const auto a = density_at_zero(std::span<const double>(x));
  const auto b = density_at_zero(std::span<const double>(neg));
  EXPECT_NEAR(a.value, b.value, 1e-12 * a.value);

  // Asymmetric input: reflection changes the window by at most one point.
  const auto y = normal_draws(40001, 15);
  std::vector<double> ny(y);
  for (auto& v : ny) v = -v;
  const double c = density_at_zero(std::span<const double>(y)).value;
  const double d = density_at_zero(std::span<const double>(ny)).value;
  EXPECT_NEAR(c, d, 5e-3 * c);
}

TEST(ZeroDensityTest, AtomAtZeroKeepsFiniteSlope) {
  auto x = normal_draws(10000, 6);
  x.resize(20000, 0.0);
  const auto z = density_at_zero(std::span<const double>(x));
  EXPECT_TRUE(std::isfinite(z.value));
  EXPECT_GT(z.value, 0.0);
}

TEST(Levy, BrownianSlopeIsOneHalf) {
  const auto inc = normal_draws(300000, 7, 1e-3);
  const auto days = oracle::regular_index(inc, 3.0, 30600.0);
  std::vector<std::pair<double, ReturnSample>> samples;
  for (double dt : {3.0, 5.0, 10.0, 30.0, 300.0}) samples.emplace_back(dt, sampled_returns(days, dt));
  const auto est = levy_index(samples, WindowSpec{0.2, 50});
  EXPECT_NEAR(est.slope, 0.5, 0.025);
  EXPECT_NEAR(est.alpha_l, 2.0, 0.1);
  EXPECT_EQ(est.points.size(), 5u);
  EXPECT_NEAR(est.alpha_l * est.slope, 1.0, 1e-12);
}

TEST(Levy, CommonScaleLeavesSlopeUnchanged) {
  const auto inc = normal_draws(100000, 8, 1e-3);
  const auto days = oracle::regular_index(inc, 1.0, 30600.0);
  std::vector<std::pair<double, ReturnSample>> a, b;
  for (double dt : {3.0, 10.0, 30.0, 100.0}) {
    auto s = sampled_returns(days, dt);
    a.emplace_back(dt, s);
    for (auto& r : s.returns) r *= 7.5;
    b.emplace_back(dt, s);
  }
  const auto ea = levy_index(a), eb = levy_index(b);
  EXPECT_NEAR(ea.slope, eb.slope, 1e-12);
  EXPECT_NEAR(ea.intercept - eb.intercept, std::log(7.5), 1e-10);
}

TEST(Levy, NeedsThreeWidths) {
  const auto s = returns_of(normal_draws(1000, 9), 1.0);
  std::vector<std::pair<double, ReturnSample>> two{{1.0, s}, {2.0, s}};
  EXPECT_THROW(levy_index(two), Error);
  std::vector<std::pair<double, ReturnSample>> dup{{1.0, s}, {2.0, s}, {2.0, s}};
  EXPECT_THROW(levy_index(dup), Error);
}

TEST(Rescale, UnitWidthIsIdentity) {
  const auto h = return_histogram(returns_of(normal_draws(1000, 10), 1.0), 0.2);
  const auto r = rescale_distribution(h, 1.72);
  EXPECT_EQ(r.bin_edges, h.bin_edges);
  EXPECT_EQ(r.densities, h.densities);
}

TEST(Rescale, GaussianHalvesAndDoubles) {
  const auto h = return_histogram(returns_of(normal_draws(1000, 11), 4.0), 0.2);
  const auto r = rescale_distribution(h, 2.0);
  for (std::size_t i = 0; i < h.bin_edges.size(); ++i) EXPECT_DOUBLE_EQ(r.bin_edges[i], h.bin_edges[i] / 2.0);
  for (std::size_t k = 0; k < h.bins(); ++k) EXPECT_DOUBLE_EQ(r.densities[k], h.densities[k] * 2.0);
}

TEST(Rescale, PreservesNormalization) {
  for (double dt : {3.0, 30.0, 300.0}) {
    const auto h = return_histogram(returns_of(normal_draws(5000, 12), dt), 0.05);
    const auto r = rescale_distribution(h, 1.6);
    for (std::size_t k = 0; k < h.bins(); ++k)
      EXPECT_NEAR(r.densities[k] * r.width(k), h.densities[k] * h.width(k), 1e-14);
    EXPECT_NEAR(r.mass(), 1.0, 1e-12);
  }
}

TEST(Rescale, NeedsSamplingWidth) {
  const auto h = return_histogram(returns_of({0.1, -0.1}), 0.05);
  EXPECT_THROW(rescale_distribution(h, 2.0), Error);
}

TEST(Collapse, IdenticalHistogramsHaveZeroDistance) {
  const auto h = return_histogram(returns_of(normal_draws(5000, 13), 1.0), 0.1);
  std::vector<ReturnHistogram> v{h, h, h};
  EXPECT_DOUBLE_EQ(collapse_distance(v, 1.0), 0.0);
}

TEST(Aggregation, KurtosisTrendsTowardNormal) {
  // Laplace increments (kurtosis 6) aggregated over growing windows.
  oracle::Rng rng(14);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> inc(1'000'000);
  for (auto& v : inc) v = 1e-4 * (sign(rng) ? e(rng) : -e(rng));
  const auto days = oracle::regular_index(inc, 1.0, 30600.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double dt : {1.0, 4.0, 16.0, 64.0}) {
    const double k = describe(sampled_returns(days, dt).returns).kurtosis;
    EXPECT_LT(k, prev);
    EXPECT_GT(k, 2.9);
    prev = k;
  }
  EXPECT_LT(prev, 3.3);
}
