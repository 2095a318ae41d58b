// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ticklab/ncpp.hpp"
#include "ticklab/pipeline.hpp"
#include "ticklab/rng.hpp"
#include "ticklab/scaling.hpp"
#include "ticklab/seasonality.hpp"
#include "ticklab/waitstats.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ticklab;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ticklab_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 1
Outcome weibull_round_trip() {
  oracle::Rng rng(101);
  WaitingTimeSample s{oracle::weibull_draws(0.053, 0.865, 1'000'000, rng), "weibull"};
  const auto fit = fit_weibull_moments(s);
  const double ea = rel_err(fit.alpha, 0.053), eb = rel_err(fit.beta, 0.865);
  return {ea < 0.02 && eb < 0.02,
          fmt("alpha=%.5f (rel %.4f) beta=%.5f (rel %.4f), tol 0.02", fit.alpha, ea, fit.beta, eb)};
}

// 2
Outcome ad_calibration() {
  constexpr int reps = 200;
  int rejections = 0;
  for (int r = 0; r < reps; ++r) {
    oracle::Rng rng(derive_seed(202, {static_cast<std::uint64_t>(r)}));
    std::exponential_distribution<double> e(1.0);
    WaitingTimeSample s;
    s.durations.resize(10'000);
    for (auto& x : s.durations) x = e(rng);
    // Parameters are estimated per replication, as in the fitting pipeline.
    if (ad_exponentiality(s, fit_weibull_moments(s)).reject) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  return {rate >= 0.02 && rate <= 0.09, fmt("rejection rate %.3f (%d/%d), band [0.02, 0.09]", rate, rejections, reps)};
}

// Sampled index returns at the five scaling widths.
std::vector<std::pair<double, ReturnSample>> sample_widths(const std::vector<TickSeries>& days) {
  std::vector<std::pair<double, ReturnSample>> out;
  for (double dt : {3.0, 5.0, 10.0, 30.0, 300.0}) out.emplace_back(dt, sampled_returns(days, dt));
  return out;
}

// Regular 3 s index with 10^6 ticks.
std::vector<TickSeries> synthetic_index(const std::function<double(oracle::Rng&)>& draw, std::uint64_t seed) {
  oracle::Rng rng(seed);
  std::vector<double> inc(1'000'000 - 1);
  for (auto& x : inc) x = draw(rng);
  return oracle::regular_index(inc, 3.0, 30600.0);
}

const WindowSpec kAcceptanceWindow{0.2, 50};

// 3
Outcome gaussian_scaling() {
  std::normal_distribution<double> z(0.0, 2e-4);
  const auto days = synthetic_index([&](oracle::Rng& r) { return z(r); }, 303);
  const auto samples = sample_widths(days);
  const auto est = levy_index(samples, kAcceptanceWindow);
  return {est.alpha_l >= 1.90 && est.alpha_l <= 2.10,
          fmt("alpha_L=%.4f slope=%.4f+-%.4f, band [1.90, 2.10]", est.alpha_l, est.slope, est.slope_stderr)};
}

// 4
Outcome stable_collapse() {
  constexpr double alpha = 1.72, scale = 1e-4;
  const auto days = synthetic_index([&](oracle::Rng& r) { return scale * oracle::symmetric_stable(alpha, r); }, 404);
  const auto samples = sample_widths(days);
  const auto est = levy_index(samples, kAcceptanceWindow);

  // Bins of width 0.5 * scale after rescaling; central region |x| <= 2 * scale.
  std::vector<ReturnHistogram> rescaled;
  for (const auto& [dt, s] : samples) {
    const double factor = std::pow(dt, 1.0 / est.alpha_l);
    rescaled.push_back(rescale_distribution(return_histogram(s, 0.5 * scale * factor), est.alpha_l));
  }
  const double distance = collapse_distance(rescaled, 2.0 * scale);
  const bool ok = std::abs(est.alpha_l - alpha) <= 0.1 && distance < 0.15;
  return {ok, fmt("alpha_L=%.4f (|err| %.4f, tol 0.1), collapse sup-distance %.4f of peak (tol 0.15)", est.alpha_l,
                  std::abs(est.alpha_l - alpha), distance)};
}

// 5
Outcome ncpp_cdf_monte_carlo() {
  const NcppParams p{1.0, 0.0, 1.0};
  const double series = ncpp_cdf(p, 1.0, 0.0).value;
  const double exact = std::exp(-1.0) + (1.0 - std::exp(-1.0)) / 2.0;
  oracle::Rng rng(505);
  std::poisson_distribution<int> n_jumps(1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  constexpr std::size_t draws = 10'000'000;
  std::size_t below = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const int n = n_jumps(rng);
    const double x = n == 0 ? 0.0 : std::sqrt(static_cast<double>(n)) * z(rng);
    if (x <= 0.0) ++below;
  }
  const double ecdf = static_cast<double>(below) / draws;
  const bool ok = std::abs(series - exact) < 1e-12 && std::abs(series - ecdf) < 0.002;
  return {ok, fmt("series=%.10f analytic=%.10f ecdf=%.6f |series-ecdf|=%.6f (tol 0.002)", series, exact, ecdf,
                  std::abs(series - ecdf))};
}

// 6
Outcome mixture_law() {
  SeasonalProfile profile;
  profile.w = 100.0;
  profile.intervals = 2;
  profile.session_length = 200.0;
  profile.lambdas = {0.1, 1.0};
  profile.mus = {0.0, 0.0};
  profile.sigma2s = {0.0, 0.0};
  profile.counts = {0, 0};
  profile.return_counts = {0, 0};
  profile.weights = {0.5, 0.5};
  oracle::Rng rng(606);
  std::bernoulli_distribution pick(0.5);
  std::exponential_distribution<double> slow(0.1), fast(1.0);
  std::vector<double> draws(1'000'000);
  for (auto& x : draws) x = pick(rng) ? slow(rng) : fast(rng);
  const double d = oracle::ks_distance(draws, [&](double u) { return mixture_wt_cdf(profile, u); });
  return {d < 0.002, fmt("KS distance %.5f (tol 0.002)", d)};
}

// Seasonal target for the convergence criterion: U-shaped intensity on a 3 s
// grid with strongly heterogeneous per-interval jump sizes.
SyntheticSpec convergence_target() {
  SyntheticSpec spec;
  spec.w = 3.0;
  spec.days = 40;
  spec.base_lambda = 1.0;
  spec.amplitude = 3.0;
  spec.c = 2e-4;
  spec.heterogeneity = 1.0;
  spec.instrument = "TGT";
  return spec;
}

// 7
Outcome convergence() {
  const auto spec = convergence_target();
  const auto truth = synthetic_profile(spec, 707);
  const auto sim = simulate(truth, 7070, spec.days);
  std::vector<SeasonalProfile> fits;
  for (double w : {3.0, 5.0, 10.0, 30.0, 300.0}) fits.push_back(fit_profile(sim.days, w));
  const auto table = convergence_diagnostic(log_returns(sim.days), fits, 70707, spec.days);
  double d3 = 0.0, d300 = 0.0;
  std::string rows;
  for (const auto& r : table.rows) {
    if (r.w == 3.0) d3 = r.distance;
    if (r.w == 300.0) d300 = r.distance;
    rows += fmt(" w=%g:%.5f", r.w, r.distance);
  }
  return {d3 < d300, fmt("KS by w:%s; spearman(w, D)=%.3f; need D(3) < D(300)", rows.c_str(),
                         table.spearman.value_or(std::nan("")))};
}

RunConfig seasonal_run(const std::vector<fs::path>& files, const fs::path& out) {
  RunConfig c;
  c.inputs = files;
  c.session_open = "00:00:00";
  c.session_close = "08:30:00";
  c.output_dir = out;
  c.seed = 808;
  c.stages = {all_stages().begin(), all_stages().end()};
  return c;
}

std::vector<fs::path> seasonal_dataset(const fs::path& dir) {
  SyntheticSpec spec;
  spec.w = 10.0;
  spec.days = 20;
  spec.base_lambda = 0.5;
  spec.amplitude = 3.0;
  spec.c = 2e-4;
  return make_synthetic_dataset(spec, 8080, dir / "data").files;
}

// 8
Outcome seasonality_closure() {
  const auto dir = scratch_dir("seasonality");
  auto config = seasonal_run(seasonal_dataset(dir), dir / "out");
  config.stages = {Stage::seasonality};
  const auto report = run_pipeline(config);
  const auto& block = report.json.at("seasonality");
  const auto corr = block.at("profiles").at(0).at("correlation");
  const double r = corr.is_number() ? corr.get<double>() : std::nan("");
  const bool inside = block.at("leverage").at("inside_3sigma_band").get<bool>();
  const double z = block.at("leverage").at("max_abs_z").get<double>();
  return {r > 0.8 && inside && report.status == RunStatus::success,
          fmt("pearson(N, gamma)=%.4f (need > 0.8); leverage max |L|/se=%.3f over %zu lags (need < 3)", r, z,
              block.at("leverage").at("lags").get<std::size_t>())};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

// 9
Outcome determinism() {
  const auto dir = scratch_dir("determinism");
  const auto files = seasonal_dataset(dir);
  const auto a = run_pipeline(seasonal_run(files, dir / "run_a"));
  const auto b = run_pipeline(seasonal_run(files, dir / "run_b"));
  const auto sa = snapshot(dir / "run_a"), sb = snapshot(dir / "run_b");
  std::size_t differing = 0;
  for (const auto& [name, bytes] : sa) {
    const auto it = sb.find(name);
    if (it == sb.end() || it->second != bytes) ++differing;
  }
  const bool ok = sa.size() == sb.size() && differing == 0 && !sa.empty() && a.status == RunStatus::success &&
                  b.status == RunStatus::success;
  return {ok, fmt("%zu artifacts compared, %zu differ, status %d/%d", sa.size(), differing, static_cast<int>(a.status),
                  static_cast<int>(b.status))};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "weibull round trip", 5.0, weibull_round_trip},
      {2, "anderson-darling calibration", 30.0, ad_calibration},
      {3, "gaussian scaling control", 30.0, gaussian_scaling},
      {4, "stable scaling collapse", 60.0, stable_collapse},
      {5, "ncpp cdf vs monte carlo", 60.0, ncpp_cdf_monte_carlo},
      {6, "mixture waiting-time law", 10.0, mixture_law},
      {7, "convergence diagnostic", 120.0, convergence},
      {8, "seasonality closure", 120.0, seasonality_closure},
      {9, "determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool timely = c.budget_s <= 0.0 || secs < c.budget_s;
    const bool pass = out.pass && timely;
    if (!pass) ++failures;
    std::printf("[%s] %d %-30s %s; %.2fs", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
    if (c.budget_s > 0.0) std::printf(" (budget %.0fs)", c.budget_s);
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
