#pragma once

// Trade-record ingestion, cleaning, and the derived duration and return
// series. Epochs are seconds since the session open of the record's day.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ticklab {

struct RawTick {
  double epoch = 0.0;
  double price = 0.0;
  std::optional<std::int64_t> volume;

  friend bool operator==(const RawTick&, const RawTick&) = default;
};

struct SessionBounds {
  double open = 0.0;
  double close = 30600.0;  // 09:01 to 17:31

  double length() const { return close - open; }
  friend bool operator==(const SessionBounds&, const SessionBounds&) = default;
};

struct TickSeries {
  std::string instrument;
  std::string day;
  std::vector<RawTick> ticks;
  SessionBounds session;
  /// Indices i such that ticks[i-1] -> ticks[i] is not a valid waiting time
  /// (a capped gap was removed between them). Sorted, unique, never 0.
  std::vector<std::size_t> duration_breaks;

  std::size_t size() const { return ticks.size(); }
  bool empty() const { return ticks.empty(); }
  friend bool operator==(const TickSeries&, const TickSeries&) = default;
};

struct WaitingTimeSample {
  std::vector<double> durations;
  std::string source;
};

enum class ReturnMode { trade_by_trade, sampled };

/// Log-returns with their timing. epochs[i] is the time at which returns[i]
/// materializes (later trade, or the grid point closing the interval).
/// day_starts holds the offset of each day's first return, so consumers
/// never pair returns across sessions.
struct ReturnSample {
  std::vector<double> returns;
  std::vector<double> epochs;
  std::vector<std::size_t> day_starts;
  ReturnMode mode = ReturnMode::trade_by_trade;
  std::optional<double> dt;

  std::size_t size() const { return returns.size(); }
  std::size_t day_count() const { return day_starts.size(); }
  /// Half-open range [begin, end) of day d.
  std::pair<std::size_t, std::size_t> day_range(std::size_t d) const;
};

// ---- parsing ---------------------------------------------------------------

using ColumnRef = std::variant<std::size_t, std::string>;

enum class TimeFormat {
  seconds,  // fractional seconds since session open
  clock,    // HH:MM:SS[.fff] local time, anchored at clock_anchor
};

enum class HeaderMode { auto_detect, present, absent };

struct FormatConfig {
  ColumnRef epoch_column = std::size_t{0};
  ColumnRef price_column = std::size_t{1};
  std::optional<ColumnRef> volume_column = ColumnRef{std::size_t{2}};
  char delimiter = ',';
  HeaderMode header = HeaderMode::auto_detect;
  TimeFormat time_format = TimeFormat::seconds;
  /// Seconds after midnight of the session open; used in clock mode.
  double clock_anchor = 9 * 3600.0 + 60.0;
  SessionBounds session;
  /// Strict mode turns every rejected row into an error.
  bool strict = false;
  std::string instrument;
  std::string day;
};

/// Parses "HH:MM[:SS[.fff]]" to seconds after midnight.
double parse_clock(std::string_view text);

/// Session bounds and clock anchor for an open/close pair such as 09:01/17:31.
void set_session_clock(FormatConfig& config, std::string_view open, std::string_view close);

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  TickSeries series;
  std::vector<RejectedRow> rejected;
};

ParseResult parse_ticks(std::istream& source, const FormatConfig& config);
ParseResult parse_tick_file(const std::filesystem::path& path, const FormatConfig& config);

/// Writes epoch,price[,volume] with a header; volume is emitted only when
/// every tick carries one.
void write_ticks(std::ostream& out, const TickSeries& series);
void write_tick_file(const std::filesystem::path& path, const TickSeries& series);

// ---- cleaning ----------------------------------------------------------------

struct CleanOptions {
  double max_wait = 200.0;
  /// Collapse duplicate epochs with the volume-weighted mean price.
  bool volume_weighted = false;
  /// Drop ticks whose |log return| against the last kept tick exceeds this.
  std::optional<double> max_abs_log_return;
};

/// Collapses equal epochs into one tick (mean price, summed volume), applies
/// the optional misprint filter, then drops every tick that arrives more than
/// max_wait after its predecessor and marks a duration break in its place.
TickSeries clean_ticks(const TickSeries& series, const CleanOptions& options);
TickSeries clean_ticks(const TickSeries& series, double max_wait);

// ---- derived series ------------------------------------------------------------

WaitingTimeSample waiting_times(const TickSeries& series);
/// Pools durations over days; days with fewer than two ticks are skipped.
WaitingTimeSample waiting_times(std::span<const TickSeries> days);

ReturnSample log_returns(const TickSeries& series);
ReturnSample log_returns(std::span<const TickSeries> days);

/// Previous-tick sampled returns on the grid open + k*dt. Intervals whose
/// left grid point precedes the first trade of the day are skipped.
ReturnSample sampled_returns(const TickSeries& series, double dt);
ReturnSample sampled_returns(std::span<const TickSeries> days, double dt);

}  // namespace ticklab
