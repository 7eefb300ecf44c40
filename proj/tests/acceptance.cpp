// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Usage: acceptance <path to ellracah binary>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellracah/error.hpp"
#include "ellracah/qracah.hpp"
#include "ellracah/racah.hpp"
#include "ellracah/sampling.hpp"
#include "ellracah/spectra.hpp"
#include "ellracah/theta.hpp"
#include "ellracah/verify.hpp"
#include "support/oracle.hpp"

using namespace ellracah;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr int kDraws = 60;

double rel(double x, double y) {
  const double s = std::max(std::fabs(x), std::fabs(y));
  return s == 0.0 ? 0.0 : std::fabs(x - y) / s;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

struct Line {
  bool pass = true;
  std::string detail;

  // value <= limit, recorded as "label value/limit".
  void bound(const std::string& label, double value, double limit) {
    const bool ok = value <= limit;
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += label + " " + sci(value) + (ok ? " <= " : " > ") + sci(limit);
  }
  void require(const std::string& label, bool ok) {
    pass = pass && ok;
    if (!ok) detail += (detail.empty() ? "" : ", ") + label + " violated";
  }
};

// Worst residual per check name over a set of verify runs.
class Aggregate {
 public:
  void add(const std::vector<IdentityCheck>& checks) {
    for (const auto& c : checks) {
      auto [it, fresh] = worst_.try_emplace(c.name, c.residual);
      if (!fresh) it->second = std::max(it->second, c.residual);
    }
  }
  // Missing checks count as failures.
  double worst(const std::string& name) const {
    const auto it = worst_.find(name);
    return it == worst_.end() ? INFINITY : it->second;
  }

 private:
  std::map<std::string, double> worst_;
};

Line theta_criterion() {
  Line line;
  double series = 0.0, oracle_dev = 0.0, prime = 0.0, dup = 0.0, half = 0.0;
  const double alpha = std::numbers::pi / 7.2;  // desk truncation scale
  const double hp = std::numbers::pi / alpha;
  const int pi2[5] = {0, 2, 1, 4, 3};
  for (int l = 1; l <= 10; ++l) {
    const double p = 0.05 * l;
    const ThetaContext unit(p, 1.0);
    const ThetaContext ctx(p, alpha);
    const double triple = theta(2, 0.0, unit) * theta(3, 0.0, unit) * theta(4, 0.0, unit);
    prime = std::max(prime, rel(theta1_prime_zero(unit), triple));
    double kappa[5] = {};
    for (int i = 0; i < 20; ++i) {
      const double z = -2.93 + 0.311 * i;
      for (int r = 1; r <= 4; ++r) {
        series = std::max(series, rel(theta(r, z, unit), theta_product(r, z, unit)));
        oracle_dev = std::max(oracle_dev, rel(theta(r, z, unit), oracle::d(oracle::theta(r, z, p))));
        const double ratio = scaled_theta(r, z + hp, ctx) / scaled_theta(pi2[r], -z, ctx);
        if (i == 0) kappa[r] = ratio;
        half = std::max(half, rel(ratio, kappa[r]));
      }
      double prod = 2.0;
      for (int r = 1; r <= 4; ++r) prod *= scaled_theta(r, z, ctx);
      dup = std::max(dup, rel(scaled_theta(1, 2.0 * z, ctx), prod));
    }
    for (int r = 1; r <= 4; ++r) half = std::max(half, std::fabs(kappa[r] * kappa[pi2[r]] - 1.0));
  }
  line.bound("series/product", series, 1e-12);
  line.bound("vs 50-digit oracle", oracle_dev, 1e-12);
  line.bound("theta1'(0) dual", prime, 1e-12);
  line.bound("duplication", dup, 1e-12);
  line.bound("half-period", half, 1e-12);
  return line;
}

Line spectrum_criterion(const Aggregate& agg, const std::vector<CouplingParams>& small) {
  Line line;
  double dev = 0.0;
  bool counts = true;
  for (const auto& params : small) {
    const HeunMatrix H = build(params, params.context());
    const Spectrum s = eigenvalues(H);
    counts = counts && s.size() == params.M() + 1;
    const auto ref =
        oracle::eigenvalues(oracle::heun_dense(oracle::coeffs(oracle::from_raw(params.raw()))), 500);
    for (int j = 0; j < s.size(); ++j) dev = std::max(dev, std::fabs(s[j] - oracle::d(ref[j])));
  }
  line.require("M+1 eigenvalues", counts);
  line.bound("descending violations", agg.worst("spectrum.descending"), 0.0);
  line.bound("oracle |dE| (M<=6, " + std::to_string(small.size()) + " sets)", dev, 1e-9);
  line.bound("trace", agg.worst("spectrum.trace"), 1e-10);
  line.bound("trace^2", agg.worst("spectrum.trace_square"), 1e-10);
  return line;
}

Line limit_criterion() {
  Line line;
  const RawParams raw = desk_params(1e-6);
  const auto rep = trig_limit_convergence(raw, {1e-6});
  RawParams t = raw;
  t.p = 0.0;
  const auto ce = oracle::coeffs(oracle::from_raw(raw));
  const auto ct = oracle::coeffs(oracle::from_raw(t));
  const auto He = oracle::heun_dense(ce), Ht = oracle::heun_dense(ct);
  const auto ee = oracle::eigenvalues(He, 600), et = oracle::eigenvalues(Ht, 600);
  // Threshold: the oracle's own deviation with a factor-2 envelope, plus a
  // floor for the double rounding of the two spectra being subtracted.
  double worst_e = 0.0, worst_f = 0.0;
  for (const auto& row : rep.rows) {
    const double dE = oracle::d(abs(ee[row.j] - et[row.j]));
    const auto fe = oracle::normalized_poly(He, ce, ee[row.j]);
    const auto ft = oracle::normalized_poly(Ht, ct, et[row.j]);
    double df = 0.0;
    for (std::size_t k = 0; k < fe.size(); ++k) df = std::max(df, oracle::d(abs(fe[k] - ft[k])));
    worst_e = std::max(worst_e, row.eigenvalue_dev / (2.0 * dE + 1e-13));
    worst_f = std::max(worst_f, row.function_dev / (2.0 * df + 1e-12));
  }
  line.bound("|dE|/threshold at p=1e-6", worst_e, 1.0);
  line.bound("max|df|/threshold at p=1e-6", worst_f, 1.0);
  const auto sweep = trig_limit_convergence(desk_params(), default_p_sweep());
  double ratio = 0.0;
  const int n = desk_params().M + 1;
  for (std::size_t i = n; i < sweep.rows.size(); ++i) {
    const auto& a = sweep.rows[i - n];
    const auto& b = sweep.rows[i];
    ratio = std::max({ratio, b.eigenvalue_dev / a.eigenvalue_dev, b.function_dev / a.function_dev});
  }
  line.require("4-point sweep decay", sweep.converged);
  line.bound("worst halving ratio", ratio, kMaxDecayRatio);
  return line;
}

Line lame_criterion() {
  Line line;
  Aggregate agg;
  for (double u : {0.3, 0.8, 1.7})
    for (int M : {0, 1, 5, 10, 16})
      for (double p : {0.0, 0.1, 0.3}) agg.add(verify_lame(u, M, p));
  line.bound("zero diagonal", agg.worst("lame.zero_diagonal"), 1e-10);
  line.bound("display vs general off-diagonals", agg.worst("lame.offdiag_match"), 1e-10);
  line.bound("E_j + E_{M-j}", agg.worst("lame.antisymmetric_spectrum"), 1e-10);
  return line;
}

struct RunResult {
  int code = -1;
  std::string err;
};

RunResult run_cli(const std::string& cli, const std::string& args, const fs::path& err_file) {
  const std::string cmd = "'" + cli + "' " + args + " > /dev/null 2> '" + err_file.string() + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_file);
  std::ostringstream os;
  os << in.rdbuf();
  r.err = os.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Line cli_criterion(const std::string& cli) {
  Line line;
  const fs::path dir = fs::temp_directory_path() / ("ellracah_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path err = dir / "stderr.txt";
  bool same = true;
  for (const char* cmd : {"spectrum", "table", "verify", "limit", "lame"}) {
    for (const char* fmt : {"json", "csv"}) {
      std::string outs[2];
      for (int i = 0; i < 2; ++i) {
        const fs::path out = dir / (std::string(cmd) + "_" + fmt + std::to_string(i));
        const auto r = run_cli(cli, std::string("--command ") + cmd + " --format " + fmt +
                                        " --seed 7 --draws 2 --out '" + out.string() + "'",
                               err);
        if (r.code != 0) same = false;
        outs[i] = slurp(out);
      }
      same = same && !outs[0].empty() && outs[0] == outs[1];
    }
  }
  line.require("byte-identical reruns", same);
  const auto ok = run_cli(cli, "--command verify", err);
  line.require("verify exits 0 on default config", ok.code == 0);
  const auto tight = run_cli(cli, "--command verify --tol 1e-15", err);
  bool named = false;
  try {
    const auto j = nlohmann::json::parse(tight.err);
    named = !j.at("failed").empty() && j.at("failed")[0].get<std::string>().find('.') != std::string::npos;
    if (named) line.detail += "tol 1e-15 fails e.g. " + j.at("failed")[0].get<std::string>();
  } catch (const std::exception&) {
    named = false;
  }
  line.require("verify --tol 1e-15 exits 1", tight.code == 1);
  line.require("failing identity named", named);
  fs::remove_all(dir);
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <ellracah binary>\n");
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::function<Line()>>> criteria;

  std::vector<CouplingParams> draws = random_draws(kSeed, kDraws);
  draws.insert(draws.begin(), validate(desk_params()));
  Aggregate agg;
  int max_M = 0;
  for (const auto& d : draws) {
    agg.add(verify_identities(d));
    max_M = std::max(max_M, d.M());
  }
  // Centrosymmetric slice of the same draws.
  Aggregate centro;
  int n_centro = 0;
  for (const auto& d : draws) {
    RawParams raw = d.raw();
    raw.u[1] = raw.u[0];
    raw.v[1] = raw.v[0];
    raw.u[3] = raw.u[2];
    raw.v[3] = raw.v[2];
    try {
      centro.add(verify_identities(validate(raw)));
      ++n_centro;
    } catch (const Error&) {
    }
  }
  DrawRanges small_ranges;
  small_ranges.M_max = 6;
  std::vector<CouplingParams> small = random_draws(kSeed + 1, 12, small_ranges);
  small.insert(small.begin(), validate(desk_params()));

  std::printf("acceptance: %d parameter sets (seed %llu, M <= %d), %d centrosymmetric\n",
              static_cast<int>(draws.size()), static_cast<unsigned long long>(kSeed), max_M,
              n_centro);

  criteria.emplace_back("theta self-consistency", theta_criterion);
  criteria.emplace_back("coefficient structure", [&] {
    Line l;
    l.bound("a_0, a~_0", agg.worst("coeffs.structural_zeros"), 0.0);
    l.bound("non-positive a_k, a~_k", agg.worst("coeffs.positivity"), 0.0);
    l.bound("pi2 covariance", agg.worst("coeffs.pi2_covariance"), 1e-12);
    l.bound("virtual shift", agg.worst("coeffs.virtual_shift"), 1e-10);
    return l;
  });
  criteria.emplace_back("spectra", [&] { return spectrum_criterion(agg, small); });
  criteria.emplace_back("polynomial equivalence (k <= 12)", [&] {
    Line l;
    l.bound("recurrence vs expansion", agg.worst("poly.recurrence_vs_expansion"), 1e-10);
    return l;
  });
  criteria.emplace_back("orthogonality", [&] {
    Line l;
    l.bound("Gram off-diagonal", agg.worst("orthogonality.gram_offdiag"), 1e-8);
    l.bound("Gram diagonal vs N_j", agg.worst("orthogonality.gram_diag"), 1e-8);
    l.bound("Heun orthogonality", agg.worst("heun.orthogonality"), 1e-8);
    l.bound("dual orthogonality", agg.worst("heun.dual_orthogonality"), 1e-8);
    return l;
  });
  criteria.emplace_back("palindromic quasi-symmetry", [&] {
    Line l;
    l.bound("eps eps~ - 1", agg.worst("eps.product_one"), 1e-10);
    l.bound("sign exceptions", agg.worst("eps.sign_pattern"), 0.0);
    l.bound("centrosymmetric eps_j - (-1)^j", centro.worst("eps.centrosymmetric"), 1e-10);
    l.bound("p_M p~_M product", agg.worst("eps.pM_product"), 1e-9);
    return l;
  });
  criteria.emplace_back("determinants", [&] {
    Line l;
    l.bound("Vandermonde form", agg.worst("racah.det_vandermonde"), 1e-7);
    l.bound("norm/weight form", agg.worst("racah.det_norm_weight"), 1e-7);
    l.bound("F^-1 F - I", agg.worst("racah.inverse"), 1e-8);
    return l;
  });
  criteria.emplace_back("q-Racah limit", limit_criterion);
  criteria.emplace_back("q-Racah internals", [&] {
    Line l;
    l.bound("duality", agg.worst("qracah.duality"), 1e-10);
    l.bound("A_k/C_k recurrence", agg.worst("qracah.recurrence"), 1e-10);
    l.bound("eps_t closed form vs 3phi2", agg.worst("trig.eps_forms"), 1e-10);
    l.bound("sum Delta_t = sum hat Delta_t = N_t0", agg.worst("trig.total_weight"), 1e-9);
    l.bound("Delta_t vs standard weights", agg.worst("trig.weight_match"), 1e-10);
    l.bound("F_t inverse", agg.worst("trig.F_inverse"), 1e-8);
    l.bound("F_t determinant", agg.worst("trig.determinant"), 1e-7);
    return l;
  });
  criteria.emplace_back("Lame slice", lame_criterion);
  const std::string cli = argv[1];
  criteria.emplace_back("CLI", [&] { return cli_criterion(cli); });

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line line;
    try {
      line = criteria[i].second();
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail = std::string("exception: ") + e.what();
    }
    all = all && line.pass;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, line.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), line.detail.c_str());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %s in %.1f s\n", all ? "all criteria pass" : "FAILURES", secs);
  return all ? 0 : 1;
}
