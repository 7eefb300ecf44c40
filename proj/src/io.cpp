#include "ellracah/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// nlohmann writes doubles as shortest round-trip decimals; non-finite values
// would become null, so refuse them here instead.
nlohmann::json num(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonConvergence, "non-finite value in output");
  return x;
}

nlohmann::json arr(const std::vector<double>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : xs) out.push_back(num(x));
  return out;
}

}  // namespace

std::vector<ConfigEntry> parse_config(std::istream& in) {
  std::vector<ConfigEntry> out;
  std::set<std::string> seen;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(n) + ": expected name = value");
    }
    ConfigEntry e{trim(t.substr(0, eq)), trim(t.substr(eq + 1)), n};
    if (e.key.empty() || e.value.empty()) {
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(n) + ": empty name or value");
    }
    if (!seen.insert(e.key).second) {
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(n) + ": duplicate key " + e.key);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ConfigEntry> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config file " + path);
  return parse_config(in);
}

double parse_double(const std::string& text, const std::string& what) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    throw Error(ErrorKind::InvalidConfig, what + ": not a finite real: '" + text + "'");
  }
  return x;
}

int parse_int(const std::string& text, const std::string& what) {
  int x = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::InvalidConfig, what + ": not an integer: '" + text + "'");
  }
  return x;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(trim(text.substr(start, comma - start)), what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool apply_param(RawParams& raw, const std::string& key, const std::string& value) {
  if (key.size() == 2 && (key[0] == 'u' || key[0] == 'v') && key[1] >= '1' && key[1] <= '4') {
    auto& arr = key[0] == 'u' ? raw.u : raw.v;
    arr[key[1] - '1'] = parse_double(value, key);
  } else if (key == "uu") {
    raw.u_virtual = parse_double(value, key);
  } else if (key == "M") {
    raw.M = parse_int(value, key);
  } else if (key == "p") {
    raw.p = parse_double(value, key);
  } else {
    return false;
  }
  return true;
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

nlohmann::json to_json(const RawParams& raw) {
  return {{"u", {raw.u[0], raw.u[1], raw.u[2], raw.u[3]}},
          {"v", {raw.v[0], raw.v[1], raw.v[2], raw.v[3]}},
          {"uu", raw.u_virtual},
          {"M", raw.M},
          {"p", raw.p}};
}

nlohmann::json to_json(const CouplingParams& params) {
  nlohmann::json j = to_json(params.raw());
  j["alpha"] = num(params.alpha());
  return j;
}

nlohmann::json to_json(const CoefficientSet& coeffs) {
  return {{"a", arr(coeffs.a)},
          {"a_tilde", arr(coeffs.a_tilde)},
          {"b", arr(coeffs.b)},
          {"c", arr({coeffs.c.begin(), coeffs.c.end()})}};
}

nlohmann::json to_json(const HeunMatrix& H) {
  std::vector<double> sub, diag, sup;
  for (int k = 0; k < H.size(); ++k) {
    diag.push_back(H.diag(k));
    if (k > 0) sub.push_back(H.sub(k));
    if (k < H.M()) sup.push_back(H.sup(k));
  }
  return {{"sub", arr(sub)}, {"diag", arr(diag)}, {"sup", arr(sup)}};
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json to_json(const std::vector<IdentityCheck>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name},
                   {"residual", num(c.residual)},
                   {"threshold", num(c.threshold)},
                   {"passed", c.passed}});
  }
  return out;
}

nlohmann::json to_json(const ConvergenceReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"p", num(r.p)},
                    {"j", r.j},
                    {"eigenvalue_dev", num(r.eigenvalue_dev)},
                    {"function_dev", num(r.function_dev)}});
  }
  nlohmann::json j = {{"rows", rows}, {"converged", report.converged}};
  if (!report.converged) j["failure"] = report.failure;
  return j;
}

nlohmann::json to_json(const RacahTable& t) {
  return {{"coefficients", to_json(t.coeffs)},
          {"reflected_coefficients", to_json(t.reflected)},
          {"eigenvalues", arr(t.spectrum.values)},
          {"p", to_json(t.p)},
          {"f", to_json(t.f)},
          {"weights", arr(t.delta)},
          {"norms", arr(t.norms)},
          {"eps", arr(t.eps.eps)},
          {"eps_tilde", arr(t.eps.eps_tilde)},
          {"heun", to_json(t.h)}};
}

nlohmann::json to_json(const TrigTables& t) {
  return {{"eigenvalues", arr(t.spectrum.values)},
          {"c", arr({t.spectrum.c.begin(), t.spectrum.c.end()})},
          {"C", num(t.spectrum.C)},
          {"weights", arr(t.delta)},
          {"dual_weights", arr(t.delta_hat)},
          {"eps", arr(t.eps)},
          {"norms", arr(t.norms)},
          {"N0", num(t.N0)}};
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (filled_ > 0) out_ << ',';
  out_ << text;
  ++filled_;
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(int x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw Error(ErrorKind::InvalidContext, "CSV row has " + std::to_string(filled_) +
                                               " cells, header has " + std::to_string(columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

}  // namespace ellracah
