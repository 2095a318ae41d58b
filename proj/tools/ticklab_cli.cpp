#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ticklab/error.hpp"
#include "ticklab/io.hpp"
#include "ticklab/ncpp.hpp"
#include "ticklab/pipeline.hpp"

namespace {

using ticklab::RunConfig;
using ticklab::RunStatus;
using ticklab::Stage;

struct Options {
  RunConfig run;
  std::vector<std::string> stages;
  std::string time_format = "seconds";
  double max_abs_log_return = 0.0;
};

void add_run_options(CLI::App& app, Options& o) {
  auto& c = o.run;
  app.add_option("inputs,--input", c.inputs, "Tick CSV files named <instrument>_<day>.csv");
  app.add_option("--instrument", c.instruments, "Keep only these instruments");
  app.add_option("--index-instrument", c.index_instrument, "Instrument for the index analyses");
  app.add_option("--session-open", c.session_open, "Session open clock (HH:MM[:SS])")->capture_default_str();
  app.add_option("--session-close", c.session_close, "Session close clock (HH:MM[:SS])")->capture_default_str();
  app.add_option("--time-format", o.time_format, "Epoch column format")
      ->check(CLI::IsMember({"seconds", "clock"}))
      ->capture_default_str();
  app.add_flag("--strict", c.strict, "Fail on malformed or out-of-session rows");
  app.add_option("--max-wait", c.max_wait, "Waiting-time cap in seconds")->capture_default_str();
  app.add_flag("--volume-weighted", c.volume_weighted, "Volume-weight prices of same-second trades");
  app.add_option("--max-abs-log-return", o.max_abs_log_return, "Misprint filter threshold (0 disables)");
  app.add_option("--dt", c.scaling_dts, "Sampling intervals for the scaling analysis")->capture_default_str();
  app.add_option("--p0-window", c.p0_window, "Central order-statistic fraction for P(0)")->capture_default_str();
  app.add_option("--p0-min-points", c.p0_min_points, "Minimum points in the P(0) window")->capture_default_str();
  app.add_option("--bin-width", c.bin_width, "Return histogram bin width")->capture_default_str();
  app.add_option("--season-dt", c.seasonality_dts, "Intraday profile intervals")->capture_default_str();
  app.add_option("--leverage-grid", c.leverage_grid, "Leverage sampling interval")->capture_default_str();
  app.add_option("--leverage-max-lag", c.leverage_max_lag, "Largest leverage lag")->capture_default_str();
  app.add_option("--w", c.ws, "NCPP interval widths")->capture_default_str();
  app.add_option("--seed", c.seed, "Root seed")->capture_default_str();
  app.add_option("--survival-points", c.survival_points, "Survival grid size")->capture_default_str();
  app.add_option("--beta-star", c.beta_star, "Shape used for the survival collapse")->capture_default_str();
  app.add_option("--out,-o", c.output_dir, "Output directory")->capture_default_str();
}

RunConfig finish(Options& o, std::vector<Stage> stages) {
  RunConfig c = o.run;
  c.time_format = o.time_format == "clock" ? ticklab::TimeFormat::clock : ticklab::TimeFormat::seconds;
  if (o.max_abs_log_return > 0.0) c.max_abs_log_return = o.max_abs_log_return;
  c.stages.insert(stages.begin(), stages.end());
  return c;
}

int run(const RunConfig& config) {
  const auto report = ticklab::run_pipeline(config);
  for (const auto& [stage, status] : report.json["stages"].items())
    if (status != "not requested") std::cerr << stage << ": " << status.get<std::string>() << "\n";
  std::cout << (config.output_dir / "report.json").string() << "\n";
  return static_cast<int>(report.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tick-data statistics toolkit"};
  app.set_config("--config", "", "key = value file that replaces flags");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  add_run_options(app, o);

  auto* clean = app.add_subcommand("clean", "Parse, collapse and cap tick files; re-emit cleaned CSV");
  auto* waitfit = app.add_subcommand("waitfit", "Weibull fits, Anderson-Darling tests and return moments");
  auto* scaling = app.add_subcommand("scaling", "P(0) scaling and Levy index of the index instrument");
  auto* seasonality = app.add_subcommand("seasonality", "Intraday volatility/activity profiles and leverage");
  auto* ncpp_fit = app.add_subcommand("ncpp-fit", "Fit piecewise-constant NCPP profiles");
  auto* converge = app.add_subcommand("converge", "KS distance between data and NCPP simulations per w");
  auto* report = app.add_subcommand("report", "Run the requested stages (default: all) and write report.json");
  report->add_option("--stages", o.stages, "Subset of: clean waitfit moments scaling seasonality ncpp-fit converge");

  auto* sim = app.add_subcommand("ncpp-sim", "Simulate tick files from a profile JSON");
  std::filesystem::path profile_path;
  std::size_t sim_days = 1;
  std::string sim_instrument = "SIM";
  double sim_price = 100.0;
  sim->add_option("--profile", profile_path, "Profile JSON written by ncpp-fit")->required();
  sim->add_option("--days", sim_days, "Number of sessions")->capture_default_str();
  sim->add_option("--name", sim_instrument, "Instrument label")->capture_default_str();
  sim->add_option("--initial-price", sim_price, "Opening price")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with known parameters");
  ticklab::SyntheticSpec spec;
  std::string shape = "u_shaped", sigma_mode = "proportional";
  synth->add_option("--shape", shape)->check(CLI::IsMember({"flat", "u_shaped"}))->capture_default_str();
  synth->add_option("--sigma-mode", sigma_mode)->check(CLI::IsMember({"proportional", "constant"}))->capture_default_str();
  synth->add_option("--synth-w", spec.w, "Profile interval width")->capture_default_str();
  synth->add_option("--session-length", spec.session_length)->capture_default_str();
  synth->add_option("--days", spec.days)->capture_default_str();
  synth->add_option("--base-lambda", spec.base_lambda)->capture_default_str();
  synth->add_option("--amplitude", spec.amplitude)->capture_default_str();
  synth->add_option("--mu", spec.mu)->capture_default_str();
  synth->add_option("--c", spec.c, "sigma = c * lambda")->capture_default_str();
  synth->add_option("--sigma", spec.sigma, "Jump sigma in constant mode")->capture_default_str();
  synth->add_option("--heterogeneity", spec.heterogeneity)->capture_default_str();
  synth->add_option("--name", spec.instrument)->capture_default_str();
  synth->add_option("--initial-price", spec.initial_price)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(RunStatus::fatal);
  }

  try {
    if (*clean) return run(finish(o, {Stage::clean}));
    if (*waitfit) return run(finish(o, {Stage::waitfit, Stage::moments}));
    if (*scaling) return run(finish(o, {Stage::scaling}));
    if (*seasonality) return run(finish(o, {Stage::seasonality}));
    if (*ncpp_fit) return run(finish(o, {Stage::ncpp_fit}));
    if (*converge) return run(finish(o, {Stage::converge}));
    if (*report) {
      std::vector<Stage> stages;
      for (const auto& s : o.stages) stages.push_back(ticklab::parse_stage(s));
      if (stages.empty()) stages = ticklab::all_stages();
      return run(finish(o, stages));
    }
    if (*sim) {
      const auto profile = ticklab::io::profile_from_json(ticklab::io::read_json(profile_path));
      ticklab::SimulationOptions opts;
      opts.instrument = sim_instrument;
      opts.initial_price = sim_price;
      const auto result = ticklab::simulate(profile, o.run.seed, sim_days, opts);
      std::filesystem::create_directories(o.run.output_dir);
      for (const auto& day : result.days) {
        const auto path = o.run.output_dir / (day.instrument + "_" + day.day + ".csv");
        ticklab::write_tick_file(path, day);
        std::cout << path.string() << "\n";
      }
      return 0;
    }
    if (*synth) {
      spec.shape = shape == "flat" ? ticklab::SyntheticSpec::Shape::flat : ticklab::SyntheticSpec::Shape::u_shaped;
      spec.sigma_mode = sigma_mode == "constant" ? ticklab::SyntheticSpec::SigmaMode::constant
                                                 : ticklab::SyntheticSpec::SigmaMode::proportional;
      const auto ds = ticklab::make_synthetic_dataset(spec, o.run.seed, o.run.output_dir);
      for (const auto& f : ds.files) std::cout << f.string() << "\n";
      std::cout << ds.truth.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(RunStatus::fatal);
  }
  return static_cast<int>(RunStatus::fatal);
}
