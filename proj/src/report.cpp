#include "fracequiv/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fracequiv {

Report::Report(std::string experiment, std::uint64_t seed) : experiment_(std::move(experiment)), seed_(seed) {}

bool Report::add_check(std::string name, double value, double tolerance, bool pass) {
  checks_.push_back({std::move(name), value, tolerance, pass});
  return pass;
}

bool Report::all_pass() const noexcept {
  for (const Check& c : checks_)
    if (!c.pass) return false;
  return true;
}

namespace {

// JSON has no NaN/inf; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

Json Report::to_json() const {
  Json j;
  j["experiment"] = experiment_;
  j["params"] = params_;
  j["seed"] = seed_;
  j["metrics"] = Json::array();
  for (const Json& m : metrics_) j["metrics"].push_back(m);
  j["checks"] = Json::array();
  for (const Check& c : checks_) {
    Json cj;
    cj["check_name"] = c.name;
    cj["value"] = number(c.value);
    cj["tolerance"] = number(c.tolerance);
    cj["pass"] = c.pass;
    j["checks"].push_back(std::move(cj));
  }
  j["all_pass"] = all_pass();
  return j;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CsvTable: row width differs from header");
  rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const auto* d = std::get_if<double>(&row[i])) out << format_double(*d);
      else if (const auto* n = std::get_if<long long>(&row[i])) out << *n;
      else out << std::get<std::string>(row[i]);
    }
    out << '\n';
  }
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace fracequiv
