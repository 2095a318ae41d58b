#include "ticklab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "ticklab/error.hpp"
#include "ticklab/parallel.hpp"
#include "ticklab/rng.hpp"
#include "ticklab/scaling.hpp"
#include "ticklab/seasonality.hpp"
#include "ticklab/stats.hpp"
#include "ticklab/waitstats.hpp"

namespace ticklab {

namespace fs = std::filesystem;
using io::CsvTable;
using io::Json;

// ---- stages -------------------------------------------------------------------------------

namespace {

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::clean, "clean"},         {Stage::waitfit, "waitfit"},         {Stage::moments, "moments"},
    {Stage::scaling, "scaling"},     {Stage::seasonality, "seasonality"}, {Stage::ncpp_fit, "ncpp-fit"},
    {Stage::converge, "converge"},
};

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

std::string label(double v) { return io::format_number(v); }

}  // namespace

std::string_view stage_name(Stage stage) {
  for (const auto& [s, name] : kStageNames)
    if (s == stage) return name;
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  for (const auto& [s, n] : kStageNames)
    if (n == name) return s;
  fail(Error::Kind::invalid_argument, "unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = [] {
    std::vector<Stage> v;
    for (const auto& [s, name] : kStageNames) v.push_back(s);
    return v;
  }();
  return stages;
}

// ---- config ---------------------------------------------------------------------------------

void RunConfig::validate() const {
  auto positive_list = [](const std::vector<double>& v, const char* what) {
    require(!v.empty(), Error::Kind::invalid_argument, std::string(what) + " list is empty");
    for (double x : v) require(x > 0.0 && std::isfinite(x), Error::Kind::invalid_argument, std::string(what) + " values must be positive");
  };
  require(!stages.empty(), Error::Kind::invalid_argument, "no stage requested");
  require(!inputs.empty(), Error::Kind::invalid_argument, "no input files");
  require(max_wait > 0.0, Error::Kind::invalid_argument, "max_wait must be positive");
  if (stages.contains(Stage::scaling)) {
    positive_list(scaling_dts, "scaling dt");
    require(bin_width > 0.0, Error::Kind::invalid_argument, "bin width must be positive");
    require(p0_window > 0.0 && p0_window <= 1.0, Error::Kind::invalid_argument, "p0 window must lie in (0, 1]");
  }
  if (stages.contains(Stage::seasonality)) {
    positive_list(seasonality_dts, "seasonality dt");
    require(leverage_grid > 0.0 && leverage_max_lag >= 0.0, Error::Kind::invalid_argument, "invalid leverage grid");
  }
  if (stages.contains(Stage::ncpp_fit) || stages.contains(Stage::converge)) positive_list(ws, "w");
  if (stages.contains(Stage::waitfit))
    require(survival_points >= 2 && beta_star > 0.0, Error::Kind::invalid_argument, "invalid survival settings");
  parse_clock(session_open);
  parse_clock(session_close);
}

Json RunConfig::to_json() const {
  Json stage_list = Json::array();
  for (Stage s : stages) stage_list.push_back(stage_name(s));
  return Json{{"instruments", instruments},
              {"index_instrument", index_instrument},
              {"session_open", session_open},
              {"session_close", session_close},
              {"time_format", time_format == TimeFormat::seconds ? "seconds" : "clock"},
              {"strict", strict},
              {"max_wait", max_wait},
              {"volume_weighted", volume_weighted},
              {"max_abs_log_return", optional_number(max_abs_log_return)},
              {"scaling_dts", scaling_dts},
              {"p0_window", p0_window},
              {"p0_min_points", p0_min_points},
              {"bin_width", bin_width},
              {"seasonality_dts", seasonality_dts},
              {"leverage_grid", leverage_grid},
              {"leverage_max_lag", leverage_max_lag},
              {"ws", ws},
              {"seed", seed},
              {"survival_points", survival_points},
              {"beta_star", beta_star},
              {"stages", stage_list}};
}

std::string RunConfig::hash() const { return io::hex64(io::fnv1a64(to_json().dump())); }

// ---- ingestion ------------------------------------------------------------------------------

namespace {

struct Instrument {
  std::string name;
  std::vector<TickSeries> days;
  std::size_t tick_count() const {
    std::size_t n = 0;
    for (const auto& d : days) n += d.ticks.size();
    return n;
  }
};

std::pair<std::string, std::string> split_name(const fs::path& path) {
  const std::string stem = path.stem().string();
  const auto pos = stem.find('_');
  if (pos == std::string::npos) return {stem, ""};
  return {stem.substr(0, pos), stem.substr(pos + 1)};
}

struct Ingested {
  std::vector<Instrument> instruments;
  Json errors = Json::array();
  Json rejected = Json::array();
};

Ingested ingest(const RunConfig& config) {
  FormatConfig format;
  format.time_format = config.time_format;
  format.strict = config.strict;
  set_session_clock(format, config.session_open, config.session_close);
  CleanOptions clean;
  clean.max_wait = config.max_wait;
  clean.volume_weighted = config.volume_weighted;
  clean.max_abs_log_return = config.max_abs_log_return;

  std::vector<fs::path> paths = config.inputs;
  std::sort(paths.begin(), paths.end());
  std::map<std::string, Instrument> by_name;
  Ingested out;
  for (const auto& path : paths) {
    const auto [instrument, day] = split_name(path);
    if (!config.instruments.empty() &&
        std::find(config.instruments.begin(), config.instruments.end(), instrument) == config.instruments.end())
      continue;
    try {
      FormatConfig f = format;
      f.instrument = instrument;
      f.day = day;
      auto parsed = parse_tick_file(path, f);
      if (!parsed.rejected.empty())
        out.rejected.push_back({{"file", path.filename().string()}, {"rows", parsed.rejected.size()}});
      auto& entry = by_name[instrument];
      entry.name = instrument;
      entry.days.push_back(clean_ticks(parsed.series, clean));
    } catch (const Error& e) {
      out.errors.push_back({{"file", path.filename().string()}, {"error", e.what()}});
    }
  }
  for (auto& [name, inst] : by_name) out.instruments.push_back(std::move(inst));
  return out;
}

const Instrument& pick_index(const std::vector<Instrument>& instruments, const std::string& requested) {
  if (!requested.empty()) {
    for (const auto& i : instruments)
      if (i.name == requested) return i;
    fail(Error::Kind::invalid_argument, "index instrument '" + requested + "' not loaded");
  }
  const Instrument* best = &instruments.front();
  for (const auto& i : instruments)
    if (i.tick_count() > best->tick_count()) best = &i;
  return *best;
}

// ---- stage bodies ------------------------------------------------------------------------------

struct StageContext {
  const RunConfig& config;
  const std::vector<Instrument>& instruments;
  const Instrument* index = nullptr;
  std::vector<fs::path>& artifacts;

  fs::path out(const std::string& name) const { return config.output_dir / name; }
  void emit(const CsvTable& table, const std::string& name) {
    table.write(out(name));
    artifacts.push_back(out(name));
  }
  void emit(const Json& json, const std::string& name) {
    io::write_json(out(name), json);
    artifacts.push_back(out(name));
  }
  const Instrument& index_instrument() const {
    require(index != nullptr, Error::Kind::invalid_argument, "no index instrument");
    return *index;
  }
};

Json run_clean(StageContext& ctx) {
  std::size_t files = 0;
  for (const auto& inst : ctx.instruments)
    for (const auto& day : inst.days) {
      const std::string name = "cleaned/" + inst.name + (day.day.empty() ? "" : "_" + day.day) + ".csv";
      write_tick_file(ctx.out(name), day);
      ctx.artifacts.push_back(ctx.out(name));
      ++files;
    }
  return Json{{"files", files}};
}

Json run_waitfit(StageContext& ctx) {
  const auto& insts = ctx.instruments;
  struct Row {
    std::optional<WeibullFit> fit;
    std::optional<AdResult> ad;
    std::size_t n = 0;
    std::string error;
    SurvivalCurve survival;
    RescaledSurvival rescaled;
  };
  std::vector<Row> rows(insts.size());
  par::for_each_index(insts.size(), [&](std::size_t i) {
    try {
      const auto sample = waiting_times(insts[i].days);
      rows[i].n = sample.durations.size();
      rows[i].fit = fit_weibull_moments(sample);
      rows[i].ad = ad_exponentiality(sample, *rows[i].fit);
      rows[i].survival = empirical_survival(sample, GridSpec{GridSpec::Kind::logarithmic, ctx.config.survival_points});
      rows[i].rescaled = rescale_survival(sample, ctx.config.beta_star,
                                          GridSpec{GridSpec::Kind::logarithmic, ctx.config.survival_points});
    } catch (const Error& e) {
      rows[i].error = e.what();
    }
  });

  CsvTable table({"instrument", "n", "mean", "std", "alpha", "beta", "AD", "reject"});
  Json list = Json::array();
  double beta_sum = 0.0;
  std::size_t fitted = 0;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const auto& r = rows[i];
    if (!r.fit) {
      list.push_back({{"instrument", insts[i].name}, {"error", r.error}});
      continue;
    }
    table.row() << insts[i].name << r.n << r.fit->mean_tau << r.fit->std_tau << r.fit->alpha << r.fit->beta
                << r.ad->statistic << r.ad->reject;
    list.push_back({{"instrument", insts[i].name},
                    {"n", r.n},
                    {"mean", r.fit->mean_tau},
                    {"std", r.fit->std_tau},
                    {"alpha", r.fit->alpha},
                    {"beta", r.fit->beta},
                    {"ad", r.ad->statistic},
                    {"reject", r.ad->reject},
                    {"clamped", r.ad->clamped}});
    beta_sum += r.fit->beta;
    ++fitted;

    CsvTable surv({"t", "survival"});
    for (std::size_t k = 0; k < r.survival.grid.size(); ++k) surv.row() << r.survival.grid[k] << r.survival.survival[k];
    ctx.emit(surv, "survival_" + insts[i].name + ".csv");
    CsvTable collapse({"x", "survival", "reference"});
    for (std::size_t k = 0; k < r.rescaled.empirical.grid.size(); ++k)
      collapse.row() << r.rescaled.empirical.grid[k] << r.rescaled.empirical.survival[k] << r.rescaled.reference[k];
    ctx.emit(collapse, "survival_rescaled_" + insts[i].name + ".csv");
  }
  ctx.emit(table, "waitfit.csv");
  require(fitted > 0, Error::Kind::insufficient_data, "no instrument could be fitted");
  return Json{{"rows", list},
              {"beta_mean", beta_sum / static_cast<double>(fitted)},
              {"critical_005", AdResult::critical_005}};
}

Json moments_json(const Moments& m) {
  return Json{{"n", m.n},
              {"mean", m.mean},
              {"variance", m.variance},
              {"skewness", number_or_null(m.skewness)},
              {"kurtosis", number_or_null(m.kurtosis)}};
}

Json run_moments(StageContext& ctx) {
  CsvTable table({"instrument", "variable", "n", "mean", "variance", "skewness", "kurtosis"});
  Json list = Json::array();
  for (const auto& inst : ctx.instruments) {
    Json entry{{"instrument", inst.name}};
    try {
      const auto returns = log_returns(inst.days);
      const auto m = describe(returns.returns);
      table.row() << inst.name << std::string_view("return") << m.n << m.mean << m.variance << m.skewness << m.kurtosis;
      entry["returns"] = moments_json(m);
      std::vector<double> volumes;
      bool complete = true;
      for (const auto& d : inst.days)
        for (const auto& t : d.ticks) {
          if (t.volume)
            volumes.push_back(static_cast<double>(*t.volume));
          else
            complete = false;
        }
      if (complete && volumes.size() >= 2) {
        const auto v = describe(volumes);
        table.row() << inst.name << std::string_view("volume") << v.n << v.mean << v.variance << v.skewness << v.kurtosis;
        entry["volumes"] = moments_json(v);
      }
    } catch (const Error& e) {
      entry["error"] = e.what();
    }
    list.push_back(entry);
  }
  ctx.emit(table, "moments.csv");
  return Json{{"rows", list}};
}

Json run_scaling(StageContext& ctx) {
  const auto& inst = ctx.index_instrument();
  const auto& cfg = ctx.config;
  std::vector<std::pair<double, ReturnSample>> samples;
  for (double dt : cfg.scaling_dts) samples.emplace_back(dt, sampled_returns(inst.days, dt));
  const WindowSpec window{cfg.p0_window, cfg.p0_min_points};
  const auto est = levy_index(samples, window);
  auto alpha_at = [&](double fraction) -> Json {
    if (fraction > 1.0) return nullptr;
    try {
      return number_or_null(levy_index(samples, WindowSpec{fraction, cfg.p0_min_points}).alpha_l);
    } catch (const Error&) {
      return nullptr;
    }
  };

  CsvTable points({"dt", "p0", "stderr"});
  Json pts = Json::array();
  for (const auto& p : est.points) {
    points.row() << p.dt << p.p0 << p.p0_stderr;
    pts.push_back({{"dt", p.dt}, {"p0", p.p0}, {"stderr", p.p0_stderr}});
  }
  ctx.emit(points, "levy_points.csv");

  Json hists = Json::array();
  for (const auto& [dt, sample] : samples) {
    const auto h = return_histogram(sample, cfg.bin_width);
    const auto rs = rescale_distribution(h, est.alpha_l > 0.0 ? est.alpha_l : 2.0);
    CsvTable t({"center", "density", "rescaled_center", "rescaled_density"});
    for (std::size_t k = 0; k < h.bins(); ++k) t.row() << h.center(k) << h.densities[k] << rs.center(k) << rs.densities[k];
    ctx.emit(t, "histogram_dt" + label(dt) + ".csv");
    const auto m = describe(sample.returns);
    hists.push_back({{"dt", dt}, {"n", sample.size()}, {"bins", h.bins()}, {"moments", moments_json(m)}});
  }
  const auto trades = log_returns(inst.days);
  const auto th = return_histogram(trades, cfg.bin_width);
  CsvTable tt({"center", "density"});
  for (std::size_t k = 0; k < th.bins(); ++k) tt.row() << th.center(k) << th.densities[k];
  ctx.emit(tt, "histogram_trades.csv");

  return Json{{"instrument", inst.name},
              {"alpha_l", number_or_null(est.alpha_l)},
              {"slope", est.slope},
              {"slope_stderr", est.slope_stderr},
              {"intercept", est.intercept},
              {"in_stable_range", est.in_stable_range},
              {"window", {{"fraction", cfg.p0_window}, {"min_points", cfg.p0_min_points}}},
              {"window_sensitivity",
               {{"half_window_alpha_l", alpha_at(cfg.p0_window / 2.0)},
                {"double_window_alpha_l", alpha_at(cfg.p0_window * 2.0)}}},
              {"points", pts},
              {"histograms", hists}};
}

Json run_seasonality(StageContext& ctx) {
  const auto& inst = ctx.index_instrument();
  const auto& cfg = ctx.config;
  Json profiles = Json::array();
  for (double dt : cfg.seasonality_dts) {
    const auto p = intraday_profile(inst.days, dt);
    CsvTable t({"k", "start", "gamma", "gamma_days", "activity"});
    for (std::size_t k = 0; k < p.intervals; ++k)
      t.row() << k << static_cast<double>(k) * dt << p.gamma[k] << p.gamma_days[k] << p.activity[k];
    ctx.emit(t, "intraday_dt" + label(dt) + ".csv");
    Json entry{{"dt", dt}, {"intervals", p.intervals}, {"last_partial", p.last_partial}, {"days", p.days_averaged}};
    try {
      const auto scatter = volatility_activity_scatter(p);
      entry["pairs"] = scatter.pairs.size();
      entry["correlation"] = optional_number(scatter.correlation);
    } catch (const Error& e) {
      entry["correlation"] = nullptr;
      entry["error"] = e.what();
    }
    profiles.push_back(entry);
  }

  const auto grid = sampled_returns(inst.days, cfg.leverage_grid);
  const auto lags = symmetric_lags(cfg.leverage_grid, cfg.leverage_max_lag);
  const auto lev = leverage(grid, lags);
  CsvTable lt({"lag", "L", "stderr", "pairs"});
  for (std::size_t i = 0; i < lev.lags.size(); ++i) lt.row() << lev.lags[i] << lev.values[i] << lev.standard_errors[i] << lev.pairs[i];
  ctx.emit(lt, "leverage.csv");

  double worst = 0.0;
  for (std::size_t i = 0; i < lev.values.size(); ++i)
    if (lev.standard_errors[i] > 0.0) worst = std::max(worst, std::abs(lev.values[i]) / lev.standard_errors[i]);
  return Json{{"instrument", inst.name},
              {"profiles", profiles},
              {"leverage",
               {{"grid", cfg.leverage_grid},
                {"lags", lev.lags.size()},
                {"max_abs_z", worst},
                {"inside_3sigma_band", lev.inside_null_band(3.0)}}}};
}

std::vector<SeasonalProfile> fit_profiles(const Instrument& inst, const std::vector<double>& ws) {
  std::vector<SeasonalProfile> out;
  for (double w : ws) out.push_back(fit_profile(inst.days, w));
  return out;
}

Json run_ncpp_fit(StageContext& ctx) {
  const auto& inst = ctx.index_instrument();
  Json list = Json::array();
  for (const auto& p : fit_profiles(inst, ctx.config.ws)) {
    ctx.emit(io::profile_to_json(p), "profile_w" + label(p.w) + ".json");
    CsvTable t({"i", "start", "lambda", "mu", "sigma2", "count", "weight"});
    for (std::size_t i = 0; i < p.intervals; ++i)
      t.row() << i << static_cast<double>(i) * p.w << p.lambdas[i] << p.mus[i] << p.sigma2s[i] << p.counts[i] << p.weights[i];
    ctx.emit(t, "profile_w" + label(p.w) + ".csv");
    Json entry{{"w", p.w}, {"intervals", p.intervals}, {"days", p.days}};
    try {
      const auto link = volatility_activity_link(p);
      entry["c"] = link.c;
      entry["rms_residual"] = link.rms_residual;
    } catch (const Error& e) {
      entry["c"] = nullptr;
      entry["error"] = e.what();
    }
    list.push_back(entry);
  }
  return Json{{"instrument", inst.name}, {"profiles", list}};
}

Json run_converge(StageContext& ctx) {
  const auto& inst = ctx.index_instrument();
  const auto profiles = fit_profiles(inst, ctx.config.ws);
  const auto empirical = log_returns(inst.days);
  const auto table = convergence_diagnostic(empirical, profiles, derive_seed(ctx.config.seed, {0x636f6e76ULL}),
                                            inst.days.size());
  CsvTable t({"w", "ks_distance", "simulated_returns"});
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    t.row() << r.w << r.distance << r.simulated_returns;
    rows.push_back({{"w", r.w}, {"distance", r.distance}, {"simulated_returns", r.simulated_returns}});
  }
  ctx.emit(t, "convergence.csv");
  return Json{{"instrument", inst.name},
              {"empirical_returns", empirical.size()},
              {"rows", rows},
              {"spearman", optional_number(table.spearman)}};
}

const char* report_key(Stage s) {
  switch (s) {
    case Stage::clean: return "clean";
    case Stage::waitfit: return "waiting_times";
    case Stage::moments: return "return_moments";
    case Stage::scaling: return "levy";
    case Stage::seasonality: return "seasonality";
    case Stage::ncpp_fit: return "ncpp_profiles";
    case Stage::converge: return "ncpp_convergence";
  }
  return "unknown";
}

}  // namespace

// ---- pipeline ----------------------------------------------------------------------------------

Report run_pipeline(const RunConfig& config) {
  config.validate();
  auto data = ingest(config);
  require(!data.instruments.empty(), Error::Kind::io, "no input could be loaded");

  Report report;
  StageContext ctx{config, data.instruments, nullptr, report.artifacts};
  const bool needs_index = config.stages.contains(Stage::scaling) || config.stages.contains(Stage::seasonality) ||
                           config.stages.contains(Stage::ncpp_fit) || config.stages.contains(Stage::converge);
  std::string index_error;
  if (needs_index) {
    try {
      ctx.index = &pick_index(data.instruments, config.index_instrument);
    } catch (const Error& e) {
      index_error = e.what();
    }
  }

  Json instruments = Json::array();
  for (const auto& inst : data.instruments)
    instruments.push_back({{"name", inst.name}, {"days", inst.days.size()}, {"ticks", inst.tick_count()}});

  Json stages = Json::object();
  Json blocks = Json::object();
  bool any_failed = !data.errors.empty();
  for (Stage stage : all_stages()) {
    const std::string name(stage_name(stage));
    if (!config.stages.contains(stage)) {
      stages[name] = "not requested";
      continue;
    }
    const bool index_stage = stage != Stage::clean && stage != Stage::waitfit && stage != Stage::moments;
    if (index_stage && !ctx.index) {
      stages[name] = "skipped: " + index_error;
      any_failed = true;
      continue;
    }
    try {
      Json block;
      switch (stage) {
        case Stage::clean: block = run_clean(ctx); break;
        case Stage::waitfit: block = run_waitfit(ctx); break;
        case Stage::moments: block = run_moments(ctx); break;
        case Stage::scaling: block = run_scaling(ctx); break;
        case Stage::seasonality: block = run_seasonality(ctx); break;
        case Stage::ncpp_fit: block = run_ncpp_fit(ctx); break;
        case Stage::converge: block = run_converge(ctx); break;
      }
      blocks[report_key(stage)] = std::move(block);
      stages[name] = "ok";
    } catch (const Error& e) {
      stages[name] = std::string("failed: ") + e.what();
      any_failed = true;
    }
  }

  Json provenance{{"config_hash", config.hash()},
                  {"seed", config.seed},
                  {"library", "ticklab"},
                  {"library_version", kLibraryVersion},
                  {"config", config.to_json()}};
  report.json = Json{{"schema", "ticklab.report"},
                     {"schema_version", kReportSchemaVersion},
                     {"provenance", provenance},
                     {"instruments", instruments},
                     {"index_instrument", ctx.index ? Json(ctx.index->name) : Json(nullptr)},
                     {"ingest", {{"errors", data.errors}, {"rejected_rows", data.rejected}}},
                     {"stages", stages}};
  for (auto& [key, value] : blocks.items()) report.json[key] = value;
  report.status = any_failed ? RunStatus::partial : RunStatus::success;
  report.json["status"] = any_failed ? "partial" : "success";

  validate_report(report.json);
  io::write_json(config.output_dir / "report.json", report.json);
  report.artifacts.push_back(config.output_dir / "report.json");
  return report;
}

void validate_report(const Json& r) {
  auto need = [&](bool ok, const std::string& what) { require(ok, Error::Kind::invalid_argument, "report schema: " + what); };
  need(r.is_object(), "report must be an object");
  need(r.value("schema", "") == "ticklab.report", "schema tag");
  need(r.contains("schema_version") && r["schema_version"] == kReportSchemaVersion, "schema_version");
  need(r.contains("provenance") && r["provenance"].is_object(), "provenance object");
  for (const char* key : {"config_hash", "seed", "library_version", "config"})
    need(r["provenance"].contains(key), std::string("provenance.") + key);
  need(r.contains("instruments") && r["instruments"].is_array(), "instruments array");
  need(r.contains("stages") && r["stages"].is_object(), "stages object");
  need(r.contains("status") && r["status"].is_string(), "status");
  for (Stage s : all_stages()) {
    const std::string name(stage_name(s));
    need(r["stages"].contains(name) && r["stages"][name].is_string(), "stages." + name);
    const bool ok = r["stages"][name] == "ok";
    need(ok == r.contains(report_key(s)), std::string("block ") + report_key(s) + " present iff stage ok");
  }
  if (r.contains("waiting_times")) {
    need(r["waiting_times"]["rows"].is_array(), "waiting_times.rows");
    for (const auto& row : r["waiting_times"]["rows"]) {
      need(row.contains("instrument"), "waiting_times row instrument");
      if (!row.contains("error"))
        for (const char* key : {"mean", "std", "alpha", "beta", "ad", "reject"})
          need(row.contains(key), std::string("waiting_times row ") + key);
    }
  }
  if (r.contains("levy"))
    for (const char* key : {"alpha_l", "slope", "slope_stderr", "points"}) need(r["levy"].contains(key), std::string("levy.") + key);
  if (r.contains("seasonality"))
    need(r["seasonality"].contains("profiles") && r["seasonality"].contains("leverage"), "seasonality blocks");
  if (r.contains("ncpp_convergence"))
    need(r["ncpp_convergence"]["rows"].is_array(), "ncpp_convergence.rows");
}

// ---- synthetic data ---------------------------------------------------------------------------

void SyntheticSpec::validate() const {
  require(w > 0.0 && session_length >= w, Error::Kind::invalid_argument, "synthetic spec: w must lie in (0, session length]");
  require(days > 0, Error::Kind::invalid_argument, "synthetic spec: days must be positive");
  require(base_lambda > 0.0, Error::Kind::invalid_argument, "synthetic spec: base_lambda must be positive");
  require(amplitude >= 0.0, Error::Kind::invalid_argument, "synthetic spec: amplitude must be non-negative");
  require(c >= 0.0 && sigma >= 0.0 && heterogeneity >= 0.0, Error::Kind::invalid_argument,
          "synthetic spec: c, sigma and heterogeneity must be non-negative");
  require(initial_price > 0.0, Error::Kind::invalid_argument, "synthetic spec: initial price must be positive");
  require(!instrument.empty() && instrument.find('_') == std::string::npos, Error::Kind::invalid_argument,
          "synthetic spec: instrument must be non-empty and free of '_'");
}

Json SyntheticSpec::to_json() const {
  return Json{{"shape", shape == Shape::flat ? "flat" : "u_shaped"},
              {"w", w},
              {"session_length", session_length},
              {"days", days},
              {"base_lambda", base_lambda},
              {"amplitude", amplitude},
              {"mu", mu},
              {"sigma_mode", sigma_mode == SigmaMode::proportional ? "proportional" : "constant"},
              {"c", c},
              {"sigma", sigma},
              {"heterogeneity", heterogeneity},
              {"instrument", instrument},
              {"initial_price", initial_price}};
}

SeasonalProfile synthetic_profile(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto intervals = static_cast<std::size_t>(std::ceil(spec.session_length / spec.w - 1e-9));
  std::vector<double> lambdas(intervals), mus(intervals, spec.mu), sigma2s(intervals);
  auto rng = make_rng(seed, {0x70726f66ULL});
  std::normal_distribution<double> z(0.0, 1.0);
  for (std::size_t i = 0; i < intervals; ++i) {
    const double start = static_cast<double>(i) * spec.w;
    const double mid = 0.5 * (start + std::min(start + spec.w, spec.session_length));
    const double x = 2.0 * mid / spec.session_length - 1.0;
    lambdas[i] = spec.shape == SyntheticSpec::Shape::flat ? spec.base_lambda : spec.base_lambda * (1.0 + spec.amplitude * x * x);
    double sigma = spec.sigma_mode == SyntheticSpec::SigmaMode::proportional ? spec.c * lambdas[i] : spec.sigma;
    if (spec.heterogeneity > 0.0) sigma *= std::exp(spec.heterogeneity * z(rng));
    sigma2s[i] = sigma * sigma;
  }
  return make_profile(spec.w, spec.session_length, std::move(lambdas), std::move(mus), std::move(sigma2s));
}

SyntheticDataset make_synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed, const fs::path& out_dir) {
  SyntheticDataset ds;
  ds.profile = synthetic_profile(spec, seed);
  SimulationOptions options;
  options.initial_price = spec.initial_price;
  options.instrument = spec.instrument;
  const auto sim = simulate(ds.profile, derive_seed(seed, {0x73696dULL}), spec.days, options);
  fs::create_directories(out_dir);
  for (const auto& day : sim.days) {
    const auto path = out_dir / (spec.instrument + "_" + day.day + ".csv");
    write_tick_file(path, day);
    ds.files.push_back(path);
  }
  ds.truth = out_dir / "truth.json";
  io::write_json(ds.truth, Json{{"seed", seed}, {"spec", spec.to_json()}, {"profile", io::profile_to_json(ds.profile)}});
  return ds;
}

}  // namespace ticklab
