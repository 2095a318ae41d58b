#include "ticklab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ticklab/error.hpp"

namespace ticklab::io {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  require(ec == std::errc{}, Error::Kind::numeric, "format_number: conversion failed");
  return std::string(buffer, ptr);
}

CsvTable::Row& CsvTable::Row::operator<<(double v) {
  cells_.push_back(format_number(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(std::size_t v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(int v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(bool v) {
  cells_.emplace_back(v ? "true" : "false");
  return *this;
}
CsvTable::Row& CsvTable::Row::operator<<(std::string_view v) {
  cells_.emplace_back(v);
  return *this;
}

CsvTable::Row CsvTable::row() {
  rows_.emplace_back();
  return Row(rows_.back());
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), Error::Kind::io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), Error::Kind::io, "error writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), Error::Kind::io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_json(const std::filesystem::path& path, const Json& value) { write_text(path, value.dump(2) + "\n"); }

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Kind::parse, path.string() + ": " + e.what());
  }
}

Json profile_to_json(const SeasonalProfile& p) {
  Json sigma2s = Json::array();
  for (double s : p.sigma2s) sigma2s.push_back(std::isnan(s) ? Json(nullptr) : Json(s));
  return Json{{"w", p.w},
              {"intervals", p.intervals},
              {"session_length", p.session_length},
              {"days", p.days},
              {"lambdas", p.lambdas},
              {"mus", p.mus},
              {"sigma2s", sigma2s},
              {"counts", p.counts},
              {"return_counts", p.return_counts},
              {"weights", p.weights}};
}

SeasonalProfile profile_from_json(const Json& j) {
  SeasonalProfile p;
  try {
    p.w = j.at("w").get<double>();
    p.intervals = j.at("intervals").get<std::size_t>();
    p.session_length = j.at("session_length").get<double>();
    p.days = j.value("days", std::size_t{1});
    p.lambdas = j.at("lambdas").get<std::vector<double>>();
    p.mus = j.at("mus").get<std::vector<double>>();
    for (const auto& s : j.at("sigma2s")) p.sigma2s.push_back(s.is_null() ? std::nan("") : s.get<double>());
    p.counts = j.value("counts", std::vector<std::size_t>(p.intervals, 0));
    p.return_counts = j.value("return_counts", std::vector<std::size_t>(p.intervals, 0));
    p.weights = j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Kind::parse, std::string("profile JSON: ") + e.what());
  }
  p.validate();
  return p;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) s[static_cast<std::size_t>(i)] = digits[value & 0xf];
  return s;
}

}  // namespace ticklab::io
