#pragma once

// JSON reports {experiment, params, seed, metrics[], checks[]} and CSV tables.

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace fracequiv {

using Json = nlohmann::ordered_json;

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

class Report {
 public:
  Report(std::string experiment, std::uint64_t seed);

  Json& params() noexcept { return params_; }
  void add_metric(Json metric) { metrics_.push_back(std::move(metric)); }
  /// Records a check; returns `pass` for chaining.
  bool add_check(std::string name, double value, double tolerance, bool pass);

  const std::vector<Check>& checks() const noexcept { return checks_; }
  bool all_pass() const noexcept;
  Json to_json() const;
  /// Indented JSON followed by a newline.
  std::string dump() const;

 private:
  std::string experiment_;
  std::uint64_t seed_;
  Json params_ = Json::object();
  std::vector<Json> metrics_;
  std::vector<Check> checks_;
};

using CsvCell = std::variant<double, long long, std::string>;

/// Header row plus data rows; doubles with 17 significant digits, LF endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<CsvCell> row);
  std::size_t rows() const noexcept { return rows_.size(); }
  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// Fixed %.17g rendering used by CSV output.
std::string format_double(double v);

}  // namespace fracequiv
