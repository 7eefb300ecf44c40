// ellracah: command-line front end for the elliptic Racah pipeline.
//
// Exit codes:
//   0  success
//   1  an identity check failed (verify, lame) or the decay test failed (limit)
//   2  invalid input: parameter domain violation, bad flag or config value
//   3  numerical failure inside the pipeline
// Every nonzero exit writes one JSON object to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ellracah/error.hpp"
#include "ellracah/io.hpp"
#include "ellracah/matrix.hpp"
#include "ellracah/qracah.hpp"
#include "ellracah/racah.hpp"
#include "ellracah/sampling.hpp"
#include "ellracah/spectra.hpp"
#include "ellracah/verify.hpp"

using namespace ellracah;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kCheckFailed = 1, kBadInput = 2, kNumerical = 3 };

struct RunConfig {
  std::string command;
  RawParams raw = desk_params();
  std::optional<std::string> format;  // json | csv; limit defaults to csv
  std::string out = "-";
  Thresholds thresholds;
  double series_tol = kDefaultSeriesTol;
  std::uint64_t seed = 1;
  int draws = 0;
  std::vector<double> p_sweep = default_p_sweep();

  std::string output_format() const {
    return format.value_or(command == "limit" ? "csv" : "json");
  }
};

// Failure of a check-type command. The report has already been written.
struct ChecksFailed {
  json detail;
};

void fail_input(const std::string& detail) { throw Error(ErrorKind::InvalidConfig, detail); }

void set_tolerance_entry(Thresholds& th, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) fail_input("--check-tol expects name=value, got '" + spec + "'");
  th.by_name[spec.substr(0, eq)] = parse_double(spec.substr(eq + 1), "--check-tol " + spec);
}

// Config entries first, so that flags given on the command line win.
void apply_config_file(RunConfig& cfg, const std::string& path) {
  for (const auto& e : read_config(path)) {
    if (apply_param(cfg.raw, e.key, e.value)) continue;
    if (e.key == "command") {
      cfg.command = e.value;
    } else if (e.key == "format") {
      cfg.format = e.value;
    } else if (e.key == "out") {
      cfg.out = e.value;
    } else if (e.key == "tol") {
      cfg.thresholds.global = parse_double(e.value, "tol");
    } else if (e.key.rfind("tol.", 0) == 0) {
      cfg.thresholds.by_name[e.key.substr(4)] = parse_double(e.value, e.key);
    } else if (e.key == "series_tol") {
      cfg.series_tol = parse_double(e.value, "series_tol");
    } else if (e.key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(e.value, "seed"));
    } else if (e.key == "draws") {
      cfg.draws = parse_int(e.value, "draws");
    } else if (e.key == "p_sweep") {
      cfg.p_sweep = parse_double_list(e.value, "p_sweep");
    } else {
      fail_input(path + " line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
  }
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {}
  std::ostream& stream() { return path_ == "-" ? std::cout : buffer_; }
  void flush() {
    if (path_ == "-") {
      std::cout.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) fail_input("cannot write output file " + path_);
    f << buffer_.str();
  }

 private:
  std::string path_;
  std::ostringstream buffer_;
};

void write_json(Output& out, const json& doc) { out.stream() << doc.dump(2) << '\n'; }

void write_checks_csv(std::ostream& os, const std::vector<IdentityCheck>& checks) {
  CsvWriter w(os, {"name", "residual", "threshold", "passed"});
  for (const auto& c : checks) {
    w.cell(c.name).cell(c.residual).cell(c.threshold).cell(c.passed ? "true" : "false");
    w.end_row();
  }
}

void write_spectrum_csv(std::ostream& os, const std::vector<double>& values) {
  CsvWriter w(os, {"j", "eigenvalue"});
  for (int j = 0; j < static_cast<int>(values.size()); ++j) {
    w.cell(j).cell(values[j]);
    w.end_row();
  }
}

json check_entry(const std::string& name, double residual, const Thresholds& th, double fallback) {
  const double thr = th.resolve(name, fallback);
  return {{"residual", residual}, {"threshold", thr}, {"passed", residual <= thr}};
}

int cmd_spectrum(const RunConfig& cfg, Output& out) {
  const auto params = validate(cfg.raw);
  const HeunMatrix H = build(params, params.context(cfg.series_tol));
  const Spectrum spec = eigenvalues(H);
  double s1 = 0.0, s2 = 0.0, abs1 = 0.0;
  for (double E : spec.values) {
    s1 += E;
    s2 += E * E;
    abs1 += std::fabs(E);
  }
  const double tr = std::fabs(s1 - H.trace()) / std::max(1.0, abs1);
  const double tr2 = std::fabs(s2 - H.trace_of_square()) / std::max(1.0, s2);
  if (cfg.output_format() == "csv") {
    write_spectrum_csv(out.stream(), spec.values);
  } else {
    write_json(out, {{"command", "spectrum"},
                     {"params", to_json(params)},
                     {"matrix", to_json(H)},
                     {"eigenvalues", spec.values},
                     {"checks",
                      {{"trace", check_entry("spectrum.trace", tr, cfg.thresholds, 1e-10)},
                       {"trace_square",
                        check_entry("spectrum.trace_square", tr2, cfg.thresholds, 1e-10)}}}});
  }
  return kOk;
}

int cmd_table(const RunConfig& cfg, Output& out) {
  const auto params = validate(cfg.raw);
  const RacahTable t = racah_table(params, params.context(cfg.series_tol));
  if (cfg.output_format() == "csv") {
    CsvWriter w(out.stream(), {"quantity", "k", "j", "value"});
    const int n = t.spectrum.size();
    auto row = [&](const char* q, int k, int j, double v) {
      w.cell(std::string(q)).cell(k).cell(j).cell(v);
      w.end_row();
    };
    for (int j = 0; j < n; ++j) row("eigenvalue", -1, j, t.spectrum[j]);
    for (int k = 0; k < n; ++k) row("weight", k, -1, t.delta[k]);
    for (int j = 0; j < n; ++j) row("norm", -1, j, t.norms[j]);
    for (int j = 0; j < n; ++j) row("eps", -1, j, t.eps.eps[j]);
    for (int j = 0; j < n; ++j) row("eps_tilde", -1, j, t.eps.eps_tilde[j]);
    for (int k = 0; k < t.p.rows(); ++k)
      for (int j = 0; j < n; ++j) row("p", k, j, t.p(k, j));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) row("f", k, j, t.f(k, j));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) row("h", k, j, t.h(k, j));
  } else {
    write_json(out, {{"command", "table"}, {"params", to_json(params)}, {"table", to_json(t)}});
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg, Output& out) {
  const auto params = validate(cfg.raw);
  const auto checks = verify_identities(params, cfg.thresholds, cfg.series_tol);
  std::vector<std::string> failed = failed_checks(checks);

  // Seeded draws: worst residual per check over all draws.
  std::vector<IdentityCheck> draw_worst;
  std::map<std::string, std::size_t> index;
  for (const auto& d : random_draws(cfg.seed, cfg.draws)) {
    for (const auto& c : verify_identities(d, cfg.thresholds, cfg.series_tol)) {
      auto [it, fresh] = index.try_emplace(c.name, draw_worst.size());
      if (fresh) {
        draw_worst.push_back(c);
        continue;
      }
      auto& w = draw_worst[it->second];
      w.residual = std::max(w.residual, c.residual);
      w.passed = w.passed && c.passed;
    }
  }
  for (const auto& c : draw_worst)
    if (!c.passed) failed.push_back("draws:" + c.name);

  if (cfg.output_format() == "csv") {
    std::vector<IdentityCheck> rows = checks;
    for (auto c : draw_worst) {
      c.name = "draws:" + c.name;
      rows.push_back(std::move(c));
    }
    write_checks_csv(out.stream(), rows);
  } else {
    json doc = {{"command", "verify"},
                {"params", to_json(params)},
                {"centrosymmetric", is_centrosymmetric(params)},
                {"checks", to_json(checks)}};
    if (cfg.draws > 0) {
      doc["draws"] = {{"seed", cfg.seed}, {"count", cfg.draws}, {"checks", to_json(draw_worst)}};
    }
    doc["passed"] = failed.empty();
    doc["failed"] = failed;
    write_json(out, doc);
  }
  if (!failed.empty()) throw ChecksFailed{{{"error", "IdentityCheckFailed"}, {"failed", failed}}};
  return kOk;
}

int cmd_limit(const RunConfig& cfg, Output& out) {
  validate(cfg.raw);
  const auto report = trig_limit_convergence(cfg.raw, cfg.p_sweep, cfg.series_tol);
  if (cfg.output_format() == "csv") {
    CsvWriter w(out.stream(), {"p", "j", "eigenvalue_dev", "function_dev"});
    for (const auto& r : report.rows) {
      w.cell(r.p).cell(r.j).cell(r.eigenvalue_dev).cell(r.function_dev);
      w.end_row();
    }
  } else {
    write_json(out, {{"command", "limit"},
                     {"params", to_json(cfg.raw)},
                     {"p_sweep", cfg.p_sweep},
                     {"report", to_json(report)}});
  }
  if (!report.converged) {
    throw ChecksFailed{{{"error", "NonMonotoneDecay"}, {"detail", report.failure}}};
  }
  return kOk;
}

int cmd_lame(const RunConfig& cfg, Output& out) {
  const double u = cfg.raw.u[0];
  const int M = cfg.raw.M;
  const double p = cfg.raw.p;
  validate(lame_params(u, M, p));
  const ThetaContext ctx = lame_context(u, M, p, cfg.series_tol);
  const HeunMatrix H = lame_matrix(u, M, ctx, std::numeric_limits<double>::infinity());
  const Spectrum spec = eigenvalues(H);
  const auto checks = verify_lame(u, M, p, cfg.thresholds, cfg.series_tol);
  const auto failed = failed_checks(checks);
  if (cfg.output_format() == "csv") {
    write_spectrum_csv(out.stream(), spec.values);
  } else {
    write_json(out, {{"command", "lame"},
                     {"params", {{"u", u}, {"M", M}, {"p", p}, {"alpha", ctx.alpha()}}},
                     {"matrix", to_json(H)},
                     {"eigenvalues", spec.values},
                     {"checks", to_json(checks)},
                     {"passed", failed.empty()},
                     {"failed", failed}});
  }
  if (!failed.empty()) throw ChecksFailed{{{"error", "IdentityCheckFailed"}, {"failed", failed}}};
  return kOk;
}

int report_error(int code, const json& doc) {
  std::cerr << doc.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic Racah polynomials: Heun matrix, spectrum, eigenbasis and identity checks"};
  app.option_defaults()->always_capture_default();

  std::string command, config_path, format, out_path, p_sweep_text;
  std::array<std::optional<double>, 4> u_flag, v_flag;
  std::optional<double> uu_flag, p_flag, tol_flag, series_tol_flag;
  std::optional<int> M_flag, draws_flag;
  std::optional<std::uint64_t> seed_flag;
  std::vector<std::string> check_tols;

  app.add_option("--command", command, "spectrum | table | verify | limit | lame")
      ->check(CLI::IsMember({"spectrum", "table", "verify", "limit", "lame"}));
  app.add_option("--config", config_path, "flat `name = value` file; flags override it");
  for (int r = 0; r < 4; ++r) {
    app.add_option("--u" + std::to_string(r + 1), u_flag[r]);
    app.add_option("--v" + std::to_string(r + 1), v_flag[r]);
  }
  app.add_option("--uu", uu_flag, "virtual parameter u");
  app.add_option("--M", M_flag, "truncation size (matrix is (M+1)x(M+1))");
  app.add_option("--p", p_flag, "elliptic nome, 0 <= p < 1");
  app.add_option("--tol", tol_flag, "threshold applied to every identity check");
  app.add_option("--check-tol", check_tols, "per-check threshold, name=value (repeatable)");
  app.add_option("--series-tol", series_tol_flag, "theta series truncation tolerance");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "output path, '-' for stdout");
  app.add_option("--seed", seed_flag, "seed for the random verification draws");
  app.add_option("--draws", draws_flag, "number of seeded random draws verify adds");
  app.add_option("--p-sweep", p_sweep_text, "comma list of nomes for limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(kBadInput, {{"error", "InvalidArguments"}, {"detail", e.what()}});
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (!command.empty()) cfg.command = command;
    for (int r = 0; r < 4; ++r) {
      if (u_flag[r]) cfg.raw.u[r] = *u_flag[r];
      if (v_flag[r]) cfg.raw.v[r] = *v_flag[r];
    }
    if (uu_flag) cfg.raw.u_virtual = *uu_flag;
    if (M_flag) cfg.raw.M = *M_flag;
    if (p_flag) cfg.raw.p = *p_flag;
    if (tol_flag) cfg.thresholds.global = *tol_flag;
    for (const auto& s : check_tols) set_tolerance_entry(cfg.thresholds, s);
    if (series_tol_flag) cfg.series_tol = *series_tol_flag;
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.out = out_path;
    if (seed_flag) cfg.seed = *seed_flag;
    if (draws_flag) cfg.draws = *draws_flag;
    if (!p_sweep_text.empty()) cfg.p_sweep = parse_double_list(p_sweep_text, "--p-sweep");

    if (cfg.command.empty()) fail_input("no command given (--command or `command =` in the config)");
    if (cfg.command != "spectrum" && cfg.command != "table" && cfg.command != "verify" &&
        cfg.command != "limit" && cfg.command != "lame") {
      fail_input("unknown command '" + cfg.command + "'");
    }
    if (cfg.output_format() != "json" && cfg.output_format() != "csv") {
      fail_input("format must be json or csv, got '" + cfg.output_format() + "'");
    }
    if (cfg.draws < 0) fail_input("draws must be >= 0");
    for (std::size_t i = 0; i < cfg.p_sweep.size(); ++i) {
      const double p = cfg.p_sweep[i];
      if (!(p > 0.0 && p < 1.0) || (i > 0 && !(p < cfg.p_sweep[i - 1]))) {
        fail_input("p sweep must be strictly decreasing inside (0, 1)");
      }
    }
    if (!(cfg.series_tol > 0.0)) fail_input("series tolerance must be > 0");
  } catch (const Error& e) {
    return report_error(kBadInput, {{"error", to_string(e.kind())}, {"detail", e.detail()}});
  }

  Output out(cfg.out);
  int code = kOk;
  json failure;
  try {
    try {
      if (cfg.command == "spectrum") code = cmd_spectrum(cfg, out);
      else if (cfg.command == "table") code = cmd_table(cfg, out);
      else if (cfg.command == "verify") code = cmd_verify(cfg, out);
      else if (cfg.command == "limit") code = cmd_limit(cfg, out);
      else code = cmd_lame(cfg, out);
    } catch (const ChecksFailed& f) {
      code = kCheckFailed;
      failure = f.detail;
    }
    out.flush();
  } catch (const DomainError& e) {
    return report_error(kBadInput, {{"error", to_string(e.kind())}, {"violations", e.violations()}});
  } catch (const Error& e) {
    const int c = e.kind() == ErrorKind::InvalidConfig ? kBadInput : kNumerical;
    return report_error(c, {{"error", to_string(e.kind())}, {"detail", e.detail()}});
  } catch (const std::exception& e) {
    return report_error(kNumerical, {{"error", "Internal"}, {"detail", e.what()}});
  }
  if (code == kCheckFailed) return report_error(kCheckFailed, failure);
  return code;
}
