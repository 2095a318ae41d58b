#pragma once

// End-to-end orchestration: ingest per-day tick files, run the requested
// analysis stages, write plot-ready artifacts and a versioned JSON report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ticklab/io.hpp"
#include "ticklab/ncpp.hpp"
#include "ticklab/tickdata.hpp"

namespace ticklab {

inline constexpr std::string_view kLibraryVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class Stage { clean, waitfit, moments, scaling, seasonality, ncpp_fit, converge };

std::string_view stage_name(Stage stage);
Stage parse_stage(std::string_view name);
const std::vector<Stage>& all_stages();

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  /// Instruments to keep; empty keeps all.
  std::vector<std::string> instruments;
  /// Instrument used for the index analyses; empty picks the busiest one.
  std::string index_instrument;

  std::string session_open = "09:01:00";
  std::string session_close = "17:31:00";
  TimeFormat time_format = TimeFormat::seconds;
  bool strict = false;

  double max_wait = 200.0;
  bool volume_weighted = false;
  std::optional<double> max_abs_log_return;

  std::vector<double> scaling_dts{3, 5, 10, 30, 300};
  double p0_window = 0.02;
  std::size_t p0_min_points = 50;
  double bin_width = 1e-5;

  std::vector<double> seasonality_dts{300};
  double leverage_grid = 3.0;
  double leverage_max_lag = 30.0;

  std::vector<double> ws{3, 5, 10, 30, 300};
  std::uint64_t seed = 20110203;

  std::size_t survival_points = 200;
  double beta_star = 0.78;

  std::filesystem::path output_dir = "ticklab_out";
  std::set<Stage> stages;

  void validate() const;
  /// Canonical JSON of every setting that can influence numeric output
  /// (paths excluded).
  io::Json to_json() const;
  std::string hash() const;
};

enum class RunStatus { success = 0, partial = 1, fatal = 2 };

struct Report {
  io::Json json;
  RunStatus status = RunStatus::success;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs the requested stages in dependency order. Independent stages keep
/// going after a failure; the failure is recorded in the report. Throws
/// Error when the configuration is invalid or no input can be loaded.
Report run_pipeline(const RunConfig& config);

/// Throws Error when the report does not match the documented schema.
void validate_report(const io::Json& report);

// ---- synthetic data -------------------------------------------------------------------

struct SyntheticSpec {
  enum class Shape { flat, u_shaped };
  enum class SigmaMode { proportional, constant };

  Shape shape = Shape::u_shaped;
  double w = 10.0;
  double session_length = 30600.0;
  std::size_t days = 5;
  double base_lambda = 0.5;
  /// Open/close intensity relative to midday for the U shape.
  double amplitude = 3.0;
  double mu = 0.0;
  SigmaMode sigma_mode = SigmaMode::proportional;
  double c = 2e-4;      // sigma = c * lambda
  double sigma = 1e-4;  // constant mode
  /// Log-normal spread of per-interval sigma multipliers.
  double heterogeneity = 0.0;
  std::string instrument = "SYN";
  double initial_price = 100.0;

  void validate() const;
  io::Json to_json() const;
};

SeasonalProfile synthetic_profile(const SyntheticSpec& spec, std::uint64_t seed);

struct SyntheticDataset {
  std::vector<std::filesystem::path> files;
  std::filesystem::path truth;
  SeasonalProfile profile;
};

/// Writes <instrument>_dNNN.csv per day plus truth.json with the generating
/// profile and spec.
SyntheticDataset make_synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed,
                                        const std::filesystem::path& out_dir);

}  // namespace ticklab
