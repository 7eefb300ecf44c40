#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellracah/qracah.hpp"
#include "ellracah/racah.hpp"
#include "ellracah/verify.hpp"

namespace ellracah {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat `name = value` text. Blank lines and lines starting with '#' are
/// skipped; a repeated key or a line without '=' throws InvalidConfig.
std::vector<ConfigEntry> parse_config(std::istream& in);
std::vector<ConfigEntry> read_config(const std::string& path);

/// Parameter keys: u1..u4, v1..v4, uu, M, p. Returns false for any other key.
bool apply_param(RawParams& raw, const std::string& key, const std::string& value);

/// Whole-string numeric parsing; `what` names the field in the error.
double parse_double(const std::string& text, const std::string& what);
int parse_int(const std::string& text, const std::string& what);
/// Comma-separated reals, e.g. "0.01,0.005".
std::vector<double> parse_double_list(const std::string& text, const std::string& what);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

nlohmann::json to_json(const RawParams& raw);
nlohmann::json to_json(const CouplingParams& params);
nlohmann::json to_json(const CoefficientSet& coeffs);
nlohmann::json to_json(const HeunMatrix& H);  // {sub, diag, sup}
nlohmann::json to_json(const Eigen::MatrixXd& m);  // rows
nlohmann::json to_json(const std::vector<IdentityCheck>& checks);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const RacahTable& table);
nlohmann::json to_json(const TrigTables& tables);

/// Comma-separated rows with a header; '.' decimal separator regardless of
/// locale.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double x);
  CsvWriter& cell(int x);
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace ellracah
