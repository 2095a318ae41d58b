#pragma once

// Non-homogeneous normal compound Poisson process: log-price
// X(t) = sum_{i <= N(t)} R_i with normal jumps R_i and a Poisson clock whose
// intensity is constant on each intraday interval of width w.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ticklab/tickdata.hpp"

namespace ticklab {

struct NcppParams {
  double lambda = 1.0;  // trades per second
  double mu = 0.0;      // mean jump
  double sigma2 = 0.0;  // jump variance
};

struct CdfValue {
  double value = 0.0;
  std::size_t n_max = 0;
  /// Upper bound on the Poisson mass beyond n_max.
  double tail_bound = 0.0;
};

/// Smallest n with P(N > n) <= tolerance for N ~ Poisson(mean), from the
/// Chernoff bound P(N >= k) <= e^-m (e m / k)^k.
std::size_t poisson_truncation(double mean, double tolerance);
double poisson_tail_bound(double mean, std::size_t n_max);

/// Truncated series for P(X(t) <= u). The n = 0 term is an atom at u = 0.
/// With n_max given explicitly, a tail bound above tolerance is an error.
CdfValue ncpp_cdf(const NcppParams& params, double t, double u, std::optional<std::size_t> n_max = std::nullopt,
                  double tolerance = 1e-12);

struct SeasonalProfile {
  double w = 0.0;
  std::size_t intervals = 0;
  double session_length = 0.0;
  std::size_t days = 1;
  std::vector<double> lambdas;
  std::vector<double> mus;
  /// Unbiased jump variance; NaN where fewer than two returns were seen.
  std::vector<double> sigma2s;
  std::vector<std::size_t> counts;         // trades, summed over days
  std::vector<std::size_t> return_counts;  // returns, summed over days
  std::vector<double> weights;             // counts / sum(counts)

  /// Throws when sizes disagree or the invariants do not hold.
  void validate() const;
  /// Jump standard deviation used by the simulator (0 where sigma2 is missing).
  double jump_sigma(std::size_t i) const;
};

/// Per-interval estimates lambda = N / (w * days), mean and unbiased
/// variance of the trade-by-trade returns landing in the interval.
SeasonalProfile fit_profile(std::span<const TickSeries> days, double w);
SeasonalProfile fit_profile(const TickSeries& day, double w);

/// Builds a profile directly from per-interval parameters; weights follow
/// lambda (the expected trade share).
SeasonalProfile make_profile(double w, double session_length, std::vector<double> lambdas, std::vector<double> mus,
                             std::vector<double> sigma2s);

/// Exponential-mixture waiting-time CDF sum_i a_i (1 - e^{-lambda_i u}).
double mixture_wt_cdf(const SeasonalProfile& profile, double u);

struct NcppSimulation {
  std::vector<TickSeries> days;
  std::uint64_t seed = 0;
  SeasonalProfile profile;
  double w = 0.0;

  std::size_t tick_count() const;
};

struct SimulationOptions {
  double initial_price = 100.0;
  std::string instrument = "SIM";
};

/// Monte Carlo path generation. Each day draws from its own stream derived
/// from (seed, day), so output is identical for any thread count.
NcppSimulation simulate(const SeasonalProfile& profile, std::uint64_t seed, std::size_t n_days,
                        const SimulationOptions& options = {});

/// One day of arrivals and cumulative jumps starting at log-price 0.
/// Epochs and log-prices are appended to the output vectors.
void simulate_day(const SeasonalProfile& profile, std::uint64_t day_seed, std::vector<double>& epochs,
                  std::vector<double>& log_prices);

struct ConvergenceRow {
  double w = 0.0;
  double distance = 0.0;
  std::size_t simulated_returns = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // sorted by w
  /// Rank correlation between w and distance.
  std::optional<double> spearman;
};

/// KS distance between empirical trade-by-trade returns and returns
/// simulated from each profile over n_days days.
ConvergenceTable convergence_diagnostic(const ReturnSample& empirical, std::span<const SeasonalProfile> profiles,
                                        std::uint64_t seed, std::size_t n_days);

struct VolatilityActivityLink {
  double c = 0.0;
  std::vector<std::size_t> intervals;  // intervals used
  std::vector<double> residuals;       // sigma_i - c * lambda_i
  double rms_residual = 0.0;
};

/// Through-origin OLS of sigma_i on lambda_i.
VolatilityActivityLink volatility_activity_link(const SeasonalProfile& profile);

namespace serial {
NcppSimulation simulate(const SeasonalProfile& profile, std::uint64_t seed, std::size_t n_days,
                        const SimulationOptions& options = {});
}

}  // namespace ticklab
