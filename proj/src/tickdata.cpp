#include "ticklab/tickdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "ticklab/error.hpp"

namespace ticklab {

std::pair<std::size_t, std::size_t> ReturnSample::day_range(std::size_t d) const {
  const std::size_t begin = day_starts.at(d);
  const std::size_t end = d + 1 < day_starts.size() ? day_starts[d + 1] : returns.size();
  return {begin, end};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    fields.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_volume(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return v;
  const auto d = to_double(s);
  if (d && std::isfinite(*d) && *d == std::floor(*d) && std::abs(*d) < 9.0e18) return static_cast<std::int64_t>(*d);
  return std::nullopt;
}

std::size_t resolve(const ColumnRef& ref, const std::vector<std::string_view>& header, const char* what) {
  if (const auto* index = std::get_if<std::size_t>(&ref)) return *index;
  const auto& name = std::get<std::string>(ref);
  require(!header.empty(), Error::Kind::parse, std::string("column '") + name + "' referenced by name but the file has no header");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  fail(Error::Kind::parse, std::string(what) + " column '" + name + "' not found in header");
}

}  // namespace

double parse_clock(std::string_view text) {
  text = trim(text);
  double parts[3] = {0.0, 0.0, 0.0};
  std::size_t n = 0;
  std::size_t start = 0;
  while (n < 3) {
    const std::size_t pos = text.find(':', start);
    const auto piece = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    const auto v = to_double(piece);
    require(v.has_value() && *v >= 0.0, Error::Kind::parse, "malformed clock time '" + std::string(text) + "'");
    parts[n++] = *v;
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  require(n >= 2, Error::Kind::parse, "clock time needs at least HH:MM: '" + std::string(text) + "'");
  require(parts[1] < 60.0 && parts[2] < 60.0, Error::Kind::parse, "clock field out of range: '" + std::string(text) + "'");
  return parts[0] * 3600.0 + parts[1] * 60.0 + parts[2];
}

void set_session_clock(FormatConfig& config, std::string_view open, std::string_view close) {
  const double o = parse_clock(open);
  const double c = parse_clock(close);
  require(c > o, Error::Kind::invalid_argument, "session close must follow session open");
  config.clock_anchor = o;
  config.session = SessionBounds{0.0, c - o};
}

ParseResult parse_ticks(std::istream& source, const FormatConfig& config) {
  require(static_cast<bool>(source), Error::Kind::io, "tick source is not readable");
  require(config.session.length() > 0.0, Error::Kind::invalid_argument, "session bounds are empty");

  ParseResult result;
  result.series.instrument = config.instrument;
  result.series.day = config.day;
  result.series.session = config.session;

  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  std::vector<std::string> header_storage;
  std::vector<std::string_view> header;
  std::size_t epoch_col = 0, price_col = 0;
  std::optional<std::size_t> volume_col;

  auto reject = [&](std::string reason) {
    if (config.strict) fail(Error::Kind::parse, "line " + std::to_string(line_no) + ": " + reason);
    result.rejected.push_back({line_no, std::move(reason)});
  };

  while (std::getline(source, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split(view, config.delimiter);

    if (first) {
      first = false;
      bool is_header = config.header == HeaderMode::present;
      if (config.header == HeaderMode::auto_detect) {
        const bool by_name = std::holds_alternative<std::string>(config.epoch_column) ||
                             std::holds_alternative<std::string>(config.price_column);
        const std::size_t probe = std::holds_alternative<std::size_t>(config.price_column)
                                      ? std::get<std::size_t>(config.price_column)
                                      : 1;
        is_header = by_name || probe >= fields.size() || !to_double(fields[probe]).has_value();
      }
      if (is_header) {
        header_storage.assign(fields.begin(), fields.end());
        header.assign(header_storage.begin(), header_storage.end());
      }
      epoch_col = resolve(config.epoch_column, header, "epoch");
      price_col = resolve(config.price_column, header, "price");
      if (config.volume_column) {
        if (std::holds_alternative<std::size_t>(*config.volume_column) || !header.empty()) {
          const auto* name = std::get_if<std::string>(&*config.volume_column);
          const bool present = !name || std::find(header.begin(), header.end(), *name) != header.end();
          if (present) volume_col = resolve(*config.volume_column, header, "volume");
        }
      }
      if (is_header) continue;
    }

    if (epoch_col >= fields.size() || price_col >= fields.size()) {
      reject("missing epoch or price field");
      continue;
    }
    std::optional<double> epoch;
    if (config.time_format == TimeFormat::seconds) {
      epoch = to_double(fields[epoch_col]);
    } else {
      try {
        epoch = parse_clock(fields[epoch_col]) - config.clock_anchor;
      } catch (const Error&) {
        epoch.reset();
      }
    }
    if (!epoch || !std::isfinite(*epoch)) {
      reject("unparseable timestamp '" + std::string(fields[epoch_col]) + "'");
      continue;
    }
    const auto price = to_double(fields[price_col]);
    if (!price || !std::isfinite(*price) || *price <= 0.0) {
      reject("invalid price '" + std::string(fields[price_col]) + "'");
      continue;
    }
    RawTick tick{*epoch, *price, std::nullopt};
    if (volume_col && *volume_col < fields.size() && !fields[*volume_col].empty()) {
      const auto volume = to_volume(fields[*volume_col]);
      if (!volume || *volume < 0) {
        reject("invalid volume '" + std::string(fields[*volume_col]) + "'");
        continue;
      }
      tick.volume = *volume;
    }
    if (tick.epoch < config.session.open || tick.epoch > config.session.close) {
      reject("timestamp outside session bounds");
      continue;
    }
    result.series.ticks.push_back(tick);
  }
  require(!source.bad(), Error::Kind::io, "error while reading tick source");
  require(!result.series.ticks.empty(), Error::Kind::insufficient_data, "no valid tick rows");
  std::stable_sort(result.series.ticks.begin(), result.series.ticks.end(),
                   [](const RawTick& a, const RawTick& b) { return a.epoch < b.epoch; });
  return result;
}

ParseResult parse_tick_file(const std::filesystem::path& path, const FormatConfig& config) {
  std::ifstream in(path);
  require(in.is_open(), Error::Kind::io, "cannot open " + path.string());
  return parse_ticks(in, config);
}

void write_ticks(std::ostream& out, const TickSeries& series) {
  const bool with_volume = !series.ticks.empty() &&
                           std::all_of(series.ticks.begin(), series.ticks.end(),
                                       [](const RawTick& t) { return t.volume.has_value(); });
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << (with_volume ? "epoch,price,volume\n" : "epoch,price\n");
  for (const auto& t : series.ticks) {
    out << t.epoch << ',' << t.price;
    if (with_volume) out << ',' << *t.volume;
    out << '\n';
  }
  out.precision(old_precision);
}

void write_tick_file(const std::filesystem::path& path, const TickSeries& series) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  require(out.is_open(), Error::Kind::io, "cannot write " + path.string());
  write_ticks(out, series);
}

// ---- cleaning --------------------------------------------------------------------

TickSeries clean_ticks(const TickSeries& series, const CleanOptions& options) {
  require(!series.ticks.empty(), Error::Kind::insufficient_data, "clean_ticks: empty series");
  require(options.max_wait > 0.0, Error::Kind::invalid_argument, "clean_ticks: max_wait must be positive");
  const auto& in = series.ticks;
  for (std::size_t i = 1; i < in.size(); ++i)
    require(in[i - 1].epoch <= in[i].epoch, Error::Kind::invalid_argument, "clean_ticks: series not sorted by epoch");

  std::vector<bool> break_before(in.size(), false);
  for (std::size_t b : series.duration_breaks)
    if (b < in.size()) break_before[b] = true;

  // Collapse equal epochs.
  std::vector<RawTick> collapsed;
  std::vector<bool> collapsed_break;
  collapsed.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    std::size_t j = i;
    while (j + 1 < in.size() && in[j + 1].epoch == in[i].epoch) ++j;
    RawTick merged = in[i];
    if (j > i) {
      bool all_volume = true;
      std::int64_t volume = 0;
      double price_sum = 0.0, weighted = 0.0;
      for (std::size_t k = i; k <= j; ++k) {
        price_sum += in[k].price;
        if (in[k].volume) {
          volume += *in[k].volume;
          weighted += in[k].price * static_cast<double>(*in[k].volume);
        } else {
          all_volume = false;
        }
      }
      const double count = static_cast<double>(j - i + 1);
      merged.price = price_sum / count;
      if (options.volume_weighted && all_volume && volume > 0) merged.price = weighted / static_cast<double>(volume);
      merged.volume = all_volume ? std::optional<std::int64_t>(volume) : std::nullopt;
    }
    collapsed.push_back(merged);
    collapsed_break.push_back(break_before[i]);
    i = j + 1;
  }

  // Misprint filter.
  if (options.max_abs_log_return) {
    std::vector<RawTick> kept;
    std::vector<bool> kept_break;
    bool pending_break = false;
    for (std::size_t i = 0; i < collapsed.size(); ++i) {
      pending_break = pending_break || collapsed_break[i];
      if (!kept.empty() && std::abs(std::log(collapsed[i].price / kept.back().price)) > *options.max_abs_log_return)
        continue;
      kept.push_back(collapsed[i]);
      kept_break.push_back(pending_break);
      pending_break = false;
    }
    collapsed = std::move(kept);
    collapsed_break = std::move(kept_break);
  }

  // Waiting-time cap: a tick arriving more than max_wait after its
  // predecessor is dropped, and the next kept tick starts a new duration run.
  TickSeries out;
  out.instrument = series.instrument;
  out.day = series.day;
  out.session = series.session;
  out.ticks.reserve(collapsed.size());
  bool pending_break = false;
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    if (i > 0 && !collapsed_break[i] && collapsed[i].epoch - collapsed[i - 1].epoch > options.max_wait) {
      pending_break = true;
      continue;
    }
    if ((pending_break || collapsed_break[i]) && !out.ticks.empty()) out.duration_breaks.push_back(out.ticks.size());
    pending_break = false;
    out.ticks.push_back(collapsed[i]);
  }
  return out;
}

TickSeries clean_ticks(const TickSeries& series, double max_wait) {
  CleanOptions options;
  options.max_wait = max_wait;
  return clean_ticks(series, options);
}

// ---- derived series ----------------------------------------------------------------

namespace {

void append_durations(const TickSeries& series, std::vector<double>& out) {
  std::size_t next_break = 0;
  for (std::size_t i = 1; i < series.ticks.size(); ++i) {
    while (next_break < series.duration_breaks.size() && series.duration_breaks[next_break] < i) ++next_break;
    if (next_break < series.duration_breaks.size() && series.duration_breaks[next_break] == i) continue;
    const double tau = series.ticks[i].epoch - series.ticks[i - 1].epoch;
    require(tau > 0.0, Error::Kind::invalid_argument,
            "waiting_times: non-positive duration; clean the series first");
    out.push_back(tau);
  }
}

std::string provenance(const TickSeries& s) {
  return s.day.empty() ? s.instrument : s.instrument + "/" + s.day;
}

void append_log_returns(const TickSeries& series, ReturnSample& out) {
  out.day_starts.push_back(out.returns.size());
  for (std::size_t i = 1; i < series.ticks.size(); ++i) {
    out.returns.push_back(std::log(series.ticks[i].price / series.ticks[i - 1].price));
    out.epochs.push_back(series.ticks[i].epoch);
  }
}

void append_sampled_returns(const TickSeries& series, double dt, ReturnSample& out) {
  const auto& ticks = series.ticks;
  const double open = series.session.open;
  const auto intervals = static_cast<std::size_t>(std::floor(series.session.length() / dt + 1e-9));
  out.day_starts.push_back(out.returns.size());
  std::size_t cursor = 0;  // number of ticks with epoch <= current grid time
  std::optional<double> previous_log_price;
  for (std::size_t k = 0; k <= intervals; ++k) {
    const double t = open + static_cast<double>(k) * dt;
    while (cursor < ticks.size() && ticks[cursor].epoch <= t) ++cursor;
    if (cursor == 0) continue;
    const double log_price = std::log(ticks[cursor - 1].price);
    if (previous_log_price) {
      out.returns.push_back(log_price - *previous_log_price);
      out.epochs.push_back(t);
    }
    previous_log_price = log_price;
  }
}

void check_sampling(const TickSeries& series, double dt) {
  require(dt > 0.0, Error::Kind::invalid_argument, "sampled_returns: dt must be positive");
  require(series.session.length() >= 2.0 * dt, Error::Kind::invalid_argument,
          "sampled_returns: dt larger than half the session");
}

}  // namespace

WaitingTimeSample waiting_times(const TickSeries& series) {
  require(series.ticks.size() >= 2, Error::Kind::insufficient_data, "waiting_times needs at least two ticks");
  WaitingTimeSample sample;
  sample.source = provenance(series);
  append_durations(series, sample.durations);
  return sample;
}

WaitingTimeSample waiting_times(std::span<const TickSeries> days) {
  WaitingTimeSample sample;
  for (const auto& day : days) {
    if (day.ticks.size() < 2) continue;
    if (sample.source.empty()) sample.source = day.instrument;
    append_durations(day, sample.durations);
  }
  require(!sample.durations.empty(), Error::Kind::insufficient_data, "waiting_times: no day with two or more ticks");
  return sample;
}

ReturnSample log_returns(const TickSeries& series) {
  require(series.ticks.size() >= 2, Error::Kind::insufficient_data, "log_returns needs at least two ticks");
  ReturnSample out;
  append_log_returns(series, out);
  return out;
}

ReturnSample log_returns(std::span<const TickSeries> days) {
  ReturnSample out;
  for (const auto& day : days)
    if (day.ticks.size() >= 2) append_log_returns(day, out);
  require(!out.returns.empty(), Error::Kind::insufficient_data, "log_returns: no day with two or more ticks");
  return out;
}

ReturnSample sampled_returns(const TickSeries& series, double dt) {
  require(!series.ticks.empty(), Error::Kind::insufficient_data, "sampled_returns: empty series");
  check_sampling(series, dt);
  ReturnSample out;
  out.mode = ReturnMode::sampled;
  out.dt = dt;
  append_sampled_returns(series, dt, out);
  return out;
}

ReturnSample sampled_returns(std::span<const TickSeries> days, double dt) {
  ReturnSample out;
  out.mode = ReturnMode::sampled;
  out.dt = dt;
  for (const auto& day : days) {
    if (day.ticks.empty()) continue;
    check_sampling(day, dt);
    append_sampled_returns(day, dt, out);
  }
  require(!out.returns.empty(), Error::Kind::insufficient_data, "sampled_returns: no returns on the grid");
  return out;
}

}  // namespace ticklab
