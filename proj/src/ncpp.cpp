#include "ticklab/ncpp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "ticklab/error.hpp"
#include "ticklab/parallel.hpp"
#include "ticklab/rng.hpp"
#include "ticklab/stats.hpp"

namespace ticklab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

// ---- CDF ---------------------------------------------------------------------------------

double poisson_tail_bound(double mean, std::size_t n_max) {
  const double k = static_cast<double>(n_max) + 1.0;
  if (mean <= 0.0) return 0.0;
  if (k <= mean) return 1.0;
  return std::min(1.0, std::exp(-mean + k * (1.0 + std::log(mean) - std::log(k))));
}

std::size_t poisson_truncation(double mean, double tolerance) {
  require(mean >= 0.0 && std::isfinite(mean), Error::Kind::invalid_argument, "poisson_truncation: invalid mean");
  require(tolerance > 0.0 && tolerance < 1.0, Error::Kind::invalid_argument, "poisson_truncation: tolerance must lie in (0, 1)");
  if (mean == 0.0) return 0;
  auto n = static_cast<std::size_t>(std::ceil(mean));
  while (poisson_tail_bound(mean, n) > tolerance) ++n;
  return n;
}

CdfValue ncpp_cdf(const NcppParams& params, double t, double u, std::optional<std::size_t> n_max, double tolerance) {
  require(t > 0.0, Error::Kind::invalid_argument, "ncpp_cdf: t must be positive");
  require(params.lambda >= 0.0 && params.sigma2 >= 0.0, Error::Kind::invalid_argument,
          "ncpp_cdf: lambda and sigma^2 must be non-negative");
  const double m = params.lambda * t;
  CdfValue out;
  out.n_max = n_max ? *n_max : poisson_truncation(m, tolerance);
  out.tail_bound = poisson_tail_bound(m, out.n_max);
  require(out.tail_bound <= tolerance, Error::Kind::numeric,
          "ncpp_cdf: truncation at n = " + std::to_string(out.n_max) + " leaves tail mass above tolerance");

  double sum = u >= 0.0 ? std::exp(-m) : 0.0;
  if (m > 0.0) {
    const double log_m = std::log(m);
    for (std::size_t n = 1; n <= out.n_max; ++n) {
      const double nd = static_cast<double>(n);
      const double weight = std::exp(-m + nd * log_m - std::lgamma(nd + 1.0));
      double conv;
      if (params.sigma2 > 0.0) {
        conv = 0.5 * std::erfc(-(u - nd * params.mu) / std::sqrt(2.0 * nd * params.sigma2));
      } else {
        conv = u >= nd * params.mu ? 1.0 : 0.0;
      }
      sum += weight * conv;
    }
  }
  out.value = std::clamp(sum, 0.0, 1.0);
  return out;
}

// ---- profiles ---------------------------------------------------------------------------------

void SeasonalProfile::validate() const {
  require(w > 0.0 && session_length > 0.0, Error::Kind::invalid_argument, "profile: w and session length must be positive");
  require(intervals > 0 && lambdas.size() == intervals && mus.size() == intervals && sigma2s.size() == intervals &&
              weights.size() == intervals,
          Error::Kind::invalid_argument, "profile: per-interval arrays do not match the interval count");
  require(static_cast<double>(intervals) * w >= session_length - 1e-9, Error::Kind::invalid_argument,
          "profile: intervals do not cover the session");
  double total = 0.0;
  for (std::size_t i = 0; i < intervals; ++i) {
    require(std::isfinite(lambdas[i]) && lambdas[i] >= 0.0, Error::Kind::invalid_argument, "profile: negative intensity");
    require(std::isfinite(mus[i]), Error::Kind::invalid_argument, "profile: non-finite jump mean");
    require(std::isnan(sigma2s[i]) || sigma2s[i] >= 0.0, Error::Kind::invalid_argument, "profile: negative jump variance");
    require(weights[i] >= 0.0, Error::Kind::invalid_argument, "profile: negative mixture weight");
    total += weights[i];
  }
  require(std::abs(total - 1.0) <= 1e-12 * static_cast<double>(intervals) || total == 0.0, Error::Kind::invalid_argument,
          "profile: mixture weights do not sum to one");
}

double SeasonalProfile::jump_sigma(std::size_t i) const {
  const double s2 = sigma2s.at(i);
  return std::isnan(s2) ? 0.0 : std::sqrt(s2);
}

SeasonalProfile fit_profile(std::span<const TickSeries> days, double w) {
  require(w > 0.0, Error::Kind::invalid_argument, "fit_profile: w must be positive");
  std::vector<const TickSeries*> used;
  for (const auto& d : days)
    if (!d.ticks.empty()) used.push_back(&d);
  require(!used.empty(), Error::Kind::insufficient_data, "fit_profile: no ticks");
  const SessionBounds session = used.front()->session;
  require(w <= session.length(), Error::Kind::invalid_argument, "fit_profile: w exceeds the session length");

  SeasonalProfile p;
  p.w = w;
  p.session_length = session.length();
  p.intervals = static_cast<std::size_t>(std::ceil(p.session_length / w - 1e-9));
  p.days = used.size();
  p.counts.assign(p.intervals, 0);
  p.return_counts.assign(p.intervals, 0);
  std::vector<double> sum(p.intervals, 0.0), sum_dev2(p.intervals, 0.0);

  auto interval_of = [&](double epoch) {
    const double offset = std::max(0.0, epoch - session.open);
    return std::min(static_cast<std::size_t>(offset / w), p.intervals - 1);
  };
  auto for_each_return = [&](auto&& f) {
    for (const auto* d : used)
      for (std::size_t i = 1; i < d->ticks.size(); ++i)
        f(interval_of(d->ticks[i].epoch), std::log(d->ticks[i].price / d->ticks[i - 1].price));
  };

  for (const auto* d : used) {
    require(d->session == session, Error::Kind::invalid_argument, "fit_profile: days have different session bounds");
    for (const auto& t : d->ticks) ++p.counts[interval_of(t.epoch)];
  }
  for_each_return([&](std::size_t k, double r) {
    sum[k] += r;
    ++p.return_counts[k];
  });
  p.mus.assign(p.intervals, 0.0);
  for (std::size_t k = 0; k < p.intervals; ++k)
    if (p.return_counts[k] > 0) p.mus[k] = sum[k] / static_cast<double>(p.return_counts[k]);
  for_each_return([&](std::size_t k, double r) { sum_dev2[k] += (r - p.mus[k]) * (r - p.mus[k]); });

  p.lambdas.assign(p.intervals, 0.0);
  p.sigma2s.assign(p.intervals, kNaN);
  p.weights.assign(p.intervals, 0.0);
  std::size_t total = 0;
  for (std::size_t k = 0; k < p.intervals; ++k) {
    const double width = std::min(w, p.session_length - static_cast<double>(k) * w);
    p.lambdas[k] = static_cast<double>(p.counts[k]) / (width * static_cast<double>(p.days));
    if (p.return_counts[k] >= 2) p.sigma2s[k] = sum_dev2[k] / static_cast<double>(p.return_counts[k] - 1);
    total += p.counts[k];
  }
  for (std::size_t k = 0; k < p.intervals; ++k) p.weights[k] = static_cast<double>(p.counts[k]) / static_cast<double>(total);
  return p;
}

SeasonalProfile fit_profile(const TickSeries& day, double w) { return fit_profile(std::span<const TickSeries>(&day, 1), w); }

SeasonalProfile make_profile(double w, double session_length, std::vector<double> lambdas, std::vector<double> mus,
                             std::vector<double> sigma2s) {
  SeasonalProfile p;
  p.w = w;
  p.session_length = session_length;
  p.intervals = lambdas.size();
  p.lambdas = std::move(lambdas);
  p.mus = std::move(mus);
  p.sigma2s = std::move(sigma2s);
  p.counts.assign(p.intervals, 0);
  p.return_counts.assign(p.intervals, 0);
  p.weights.assign(p.intervals, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.intervals; ++i) {
    const double width = std::min(w, session_length - static_cast<double>(i) * w);
    p.weights[i] = p.lambdas[i] * width;
    total += p.weights[i];
  }
  require(total > 0.0, Error::Kind::invalid_argument, "make_profile: all intensities are zero");
  for (double& a : p.weights) a /= total;
  p.validate();
  return p;
}

double mixture_wt_cdf(const SeasonalProfile& profile, double u) {
  profile.validate();
  require(u >= 0.0, Error::Kind::invalid_argument, "mixture_wt_cdf: u must be non-negative");
  double f = 0.0;
  for (std::size_t i = 0; i < profile.intervals; ++i)
    if (profile.weights[i] > 0.0) f += profile.weights[i] * -std::expm1(-profile.lambdas[i] * u);
  return f;
}

// ---- simulation --------------------------------------------------------------------------------

std::size_t NcppSimulation::tick_count() const {
  std::size_t n = 0;
  for (const auto& d : days) n += d.ticks.size();
  return n;
}

void simulate_day(const SeasonalProfile& profile, std::uint64_t day_seed, std::vector<double>& epochs,
                  std::vector<double>& log_prices) {
  Rng rng(day_seed);
  double log_price = 0.0;
  double last_epoch = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < profile.intervals; ++i) {
    const double lambda = profile.lambdas[i];
    if (!(lambda > 0.0)) continue;
    const double start = static_cast<double>(i) * profile.w;
    const double end = std::min(start + profile.w, profile.session_length);
    const double mu = profile.mus[i];
    const double sigma = profile.jump_sigma(i);
    std::exponential_distribution<double> wait(lambda);
    std::normal_distribution<double> jump(mu, sigma > 0.0 ? sigma : 1.0);
    // Clocks restart at every interval boundary.
    for (double t = start + wait(rng); t < end; t += wait(rng)) {
      const double epoch = t > last_epoch ? t : std::nextafter(last_epoch, end);
      log_price += sigma > 0.0 ? jump(rng) : mu;
      epochs.push_back(epoch);
      log_prices.push_back(log_price);
      last_epoch = epoch;
    }
  }
}

namespace {

struct DayPath {
  std::vector<double> epochs;
  std::vector<double> log_prices;
};

void check_simulation(const SeasonalProfile& profile, std::size_t n_days) {
  profile.validate();
  require(n_days > 0, Error::Kind::invalid_argument, "simulate: n_days must be positive");
  require(std::any_of(profile.lambdas.begin(), profile.lambdas.end(), [](double l) { return l > 0.0; }),
          Error::Kind::invalid_argument, "simulate: every interval has zero intensity");
}

std::string day_label(std::size_t d) {
  std::string s = std::to_string(d);
  return "d" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

NcppSimulation assemble(const SeasonalProfile& profile, std::uint64_t seed, std::vector<DayPath> paths,
                        const SimulationOptions& options) {
  require(options.initial_price > 0.0, Error::Kind::invalid_argument, "simulate: initial price must be positive");
  NcppSimulation sim;
  sim.seed = seed;
  sim.profile = profile;
  sim.w = profile.w;
  sim.days.resize(paths.size());
  double offset = std::log(options.initial_price);
  for (std::size_t d = 0; d < paths.size(); ++d) {
    auto& day = sim.days[d];
    day.instrument = options.instrument;
    day.day = day_label(d);
    day.session = SessionBounds{0.0, profile.session_length};
    day.ticks.reserve(paths[d].epochs.size());
    for (std::size_t i = 0; i < paths[d].epochs.size(); ++i)
      day.ticks.push_back({paths[d].epochs[i], std::exp(offset + paths[d].log_prices[i]), std::nullopt});
    if (!paths[d].log_prices.empty()) offset += paths[d].log_prices.back();
  }
  return sim;
}

}  // namespace

NcppSimulation simulate(const SeasonalProfile& profile, std::uint64_t seed, std::size_t n_days,
                        const SimulationOptions& options) {
  check_simulation(profile, n_days);
  std::vector<DayPath> paths(n_days);
  par::for_each_index(n_days, [&](std::size_t d) {
    simulate_day(profile, derive_seed(seed, {d}), paths[d].epochs, paths[d].log_prices);
  });
  return assemble(profile, seed, std::move(paths), options);
}

namespace serial {

NcppSimulation simulate(const SeasonalProfile& profile, std::uint64_t seed, std::size_t n_days,
                        const SimulationOptions& options) {
  check_simulation(profile, n_days);
  std::vector<DayPath> paths(n_days);
  for (std::size_t d = 0; d < n_days; ++d)
    simulate_day(profile, derive_seed(seed, {d}), paths[d].epochs, paths[d].log_prices);
  return assemble(profile, seed, std::move(paths), options);
}

}  // namespace serial

// ---- diagnostics -------------------------------------------------------------------------------

ConvergenceTable convergence_diagnostic(const ReturnSample& empirical, std::span<const SeasonalProfile> profiles,
                                        std::uint64_t seed, std::size_t n_days) {
  require(!empirical.returns.empty(), Error::Kind::insufficient_data, "convergence_diagnostic: empty empirical sample");
  require(!profiles.empty(), Error::Kind::insufficient_data, "convergence_diagnostic: no profiles");
  std::vector<double> target = empirical.returns;
  std::sort(target.begin(), target.end());

  ConvergenceTable table;
  table.rows.resize(profiles.size());
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    const auto& profile = profiles[j];
    // Keyed on w so that adding or removing a width leaves other rows alone.
    const auto sim = simulate(profile, derive_seed(seed, {std::bit_cast<std::uint64_t>(profile.w)}), n_days);
    std::vector<double> simulated;
    for (const auto& day : sim.days)
      for (std::size_t i = 1; i < day.ticks.size(); ++i) simulated.push_back(std::log(day.ticks[i].price / day.ticks[i - 1].price));
    require(!simulated.empty(), Error::Kind::insufficient_data,
            "convergence_diagnostic: simulation at w = " + std::to_string(profile.w) + " produced no returns");
    std::sort(simulated.begin(), simulated.end());
    table.rows[j] = {profile.w, ks_two_sample_sorted(target, simulated), simulated.size()};
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) { return a.w < b.w; });
  if (table.rows.size() >= 2) {
    std::vector<double> ws, ds;
    for (const auto& r : table.rows) {
      ws.push_back(r.w);
      ds.push_back(r.distance);
    }
    table.spearman = spearman(ws, ds);
  }
  return table;
}

VolatilityActivityLink volatility_activity_link(const SeasonalProfile& profile) {
  profile.validate();
  VolatilityActivityLink link;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < profile.intervals; ++i) {
    if (std::isnan(profile.sigma2s[i])) continue;
    link.intervals.push_back(i);
    sxy += std::sqrt(profile.sigma2s[i]) * profile.lambdas[i];
    sxx += profile.lambdas[i] * profile.lambdas[i];
  }
  require(link.intervals.size() >= 3, Error::Kind::insufficient_data,
          "volatility_activity_link needs three or more intervals with a jump variance");
  require(sxx > 0.0, Error::Kind::degenerate, "volatility_activity_link: intensities are all zero");
  link.c = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i : link.intervals) {
    const double e = std::sqrt(profile.sigma2s[i]) - link.c * profile.lambdas[i];
    link.residuals.push_back(e);
    ss += e * e;
  }
  link.rms_residual = std::sqrt(ss / static_cast<double>(link.intervals.size()));
  return link;
}

}  // namespace ticklab
