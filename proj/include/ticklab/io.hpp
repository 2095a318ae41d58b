#pragma once

// CSV and JSON emitters for analysis artifacts, and the profile JSON format.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ticklab/ncpp.hpp"

namespace ticklab::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that round-trips to the same double; "nan" for NaN.
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& operator<<(double v);
    Row& operator<<(std::size_t v);
    Row& operator<<(int v);
    Row& operator<<(bool v);
    Row& operator<<(std::string_view v);

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    std::vector<std::string>& cells_;
  };

  Row row();
  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& value);
Json read_json(const std::filesystem::path& path);

/// Profile JSON: {"w", "intervals", "session_length", "days", "lambdas",
/// "mus", "sigma2s" (null where missing), "counts", "return_counts",
/// "weights"}.
Json profile_to_json(const SeasonalProfile& profile);
SeasonalProfile profile_from_json(const Json& json);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace ticklab::io
