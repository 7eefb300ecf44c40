#include "ellracah/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ellracah/error.hpp"
#include "ellracah/heun_coeffs.hpp"
#include "ellracah/matrix.hpp"
#include "ellracah/qracah.hpp"
#include "ellracah/racah.hpp"
#include "ellracah/recurrence.hpp"
#include "ellracah/spectra.hpp"
#include "ellracah/theta.hpp"

namespace ellracah {

double Thresholds::resolve(const std::string& name, double fallback) const {
  if (auto it = by_name.find(name); it != by_name.end()) return it->second;
  if (global) return *global;
  return fallback;
}

std::vector<std::string> failed_checks(const std::vector<IdentityCheck>& checks) {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

bool is_centrosymmetric(const CouplingParams& params) {
  return params.u(1) == params.u(2) && params.v(1) == params.v(2) &&
         params.u(3) == params.u(4) && params.v(3) == params.v(4);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Report {
 public:
  explicit Report(const Thresholds& t) : t_(t) {}

  void add(const std::string& name, double residual, double fallback) {
    const double thr = t_.resolve(name, fallback);
    checks_.push_back({name, residual, thr, std::isfinite(residual) && residual <= thr});
  }

  std::vector<IdentityCheck> take() { return std::move(checks_); }

 private:
  const Thresholds& t_;
  std::vector<IdentityCheck> checks_;
};

double rel(double x, double y, double floor = 0.0) {
  const double s = std::max({std::fabs(x), std::fabs(y), floor});
  return s == 0.0 ? 0.0 : std::fabs(x - y) / s;
}

double rel(cplx x, cplx y, double floor = 0.0) {
  const double s = std::max({std::abs(x), std::abs(y), floor});
  return s == 0.0 ? 0.0 : std::abs(x - y) / s;
}

double max_abs(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::fabs(x));
  return m;
}

const double kZs[] = {0.37, 1.1, -0.83, 2.3, 0.05};

// Sum of the absolute values of every term in the expansion of p_k(E):
// the same recurrence with all signs made positive.
std::vector<double> term_majorant(const CoefficientSet& coeffs, double E, int upto) {
  const int M = coeffs.M();
  std::vector<double> m(upto + 1);
  m[0] = 1.0;
  if (upto >= 1) m[1] = std::fabs(E - coeffs.b[0]);
  for (int k = 1; k < upto; ++k) {
    m[k + 1] = std::fabs(E - coeffs.b[k]) * m[k] + coeffs.a[k] * coeffs.a_tilde[M + 1 - k] * m[k - 1];
  }
  return m;
}

// Sample energies: the spectrum, interior midpoints and two outside points.
std::vector<double> sample_energies(const Spectrum& s) {
  std::vector<double> out = s.values;
  for (int j = 0; j + 1 < s.size(); ++j) out.push_back(0.5 * (s[j] + s[j + 1]));
  out.push_back(s.values.front() + 0.75);
  out.push_back(s.values.back() - 1.25);
  return out;
}

Eigen::MatrixXd dense(const HeunMatrix& H) {
  const int n = H.size();
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D(i, j) = H.entry(i, j);
  return D;
}

void theta_checks(Report& rep, const CouplingParams& params, const ThetaContext& ctx) {
  double series = 0.0, dup = 0.0, half = 0.0, period = 0.0;
  const double hp = std::numbers::pi / ctx.alpha();
  std::array<double, 4> kappa{};
  for (int r = 1; r <= 4; ++r) {
    const int r2 = half_period_perm(2, r);
    double ratio0 = 0.0;
    for (double z : kZs) {
      const double x = 0.5 * ctx.alpha() * z;
      series = std::max(series, rel(theta(r, x, ctx), theta_product(r, x, ctx)));
      const double ratio = scaled_theta(r, z + hp, ctx) / scaled_theta(r2, -z, ctx);
      if (ratio0 == 0.0) {
        ratio0 = ratio;
      } else {
        half = std::max(half, rel(ratio, ratio0));
      }
      const double sign = r <= 2 ? -1.0 : 1.0;
      period = std::max(period, rel(scaled_theta(r, z + 2.0 * hp, ctx),
                                    sign * scaled_theta(r, z, ctx), 1e-300));
    }
    kappa[r - 1] = ratio0;
  }
  for (int r = 1; r <= 4; ++r) {
    half = std::max(half, std::fabs(kappa[r - 1] * kappa[half_period_perm(2, r) - 1] - 1.0));
  }
  for (double z : kZs) {
    double prod = 2.0;
    for (int r = 1; r <= 4; ++r) prod *= scaled_theta(r, z, ctx);
    dup = std::max(dup, rel(scaled_theta(1, 2.0 * z, ctx), prod));
  }
  (void)params;
  rep.add("theta.series_vs_product", series, 1e-12);
  rep.add("theta.duplication", dup, 1e-12);
  rep.add("theta.half_period_shift", half, 1e-12);
  rep.add("theta.real_period", period, 1e-12);
}

void coefficient_checks(Report& rep, const CouplingParams& params, const ThetaContext& ctx,
                        const CoefficientSet& cs) {
  const int M = params.M();
  rep.add("coeffs.structural_zeros", std::fabs(cs.a[0]) + std::fabs(cs.a_tilde[0]), 0.0);

  double nonpos = 0.0, sign_bad = 0.0;
  for (int k = 1; k <= M; ++k) {
    if (!(cs.a[k] > 0.0)) nonpos += 1;
    if (!(cs.a_tilde[k] > 0.0)) nonpos += 1;
    if ((cs.a[k] > 0.0) != (principal_trig_factor(k, params) > 0.0)) sign_bad += 1;
  }
  rep.add("coeffs.positivity", nonpos, 0.0);
  rep.add("coeffs.sign_certificate", sign_bad, 0.0);

  rep.add("coeffs.A_zeros",
          std::max(std::fabs(coeff_A(-params.u(1), params, ctx, 0.0)),
                   std::fabs(coeff_A(params.u(1) + M, params, ctx, 0.0))),
          1e-12);

  const auto permuted = permute(params, 2);
  const auto cp = lattice_coeffs(permuted, ctx);
  const double bscale = std::max(1.0, max_abs(cs.b));
  double cov = 0.0;
  for (int k = 0; k <= M; ++k) {
    cov = std::max(cov, rel(cp.a[k], cs.a_tilde[k]));
    cov = std::max(cov, rel(cp.a_tilde[k], cs.a[k]));
    cov = std::max(cov, rel(cp.b[M - k], cs.b[k], bscale));
  }
  rep.add("coeffs.pi2_covariance", cov, 1e-12);

  // A second admissible virtual parameter.
  double shift = kInf;
  for (double du : {0.21, -0.17, 0.43}) {
    RawParams raw = params.raw();
    raw.u_virtual += du;
    if (!domain_violations(raw).empty()) continue;
    try {
      const auto other = validate(raw);
      const auto co = lattice_coeffs(other, ctx);
      double lo = kInf, hi = -kInf, moved = 0.0;
      for (int k = 0; k <= M; ++k) {
        const double d = cs.b[k] - co.b[k];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        moved = std::max({moved, std::fabs(cs.a[k] - co.a[k]),
                          std::fabs(cs.a_tilde[k] - co.a_tilde[k])});
      }
      shift = std::max(hi - lo, moved);
      break;
    } catch (const Error&) {
    }
  }
  rep.add("coeffs.virtual_shift", shift, 1e-10);
}

void polynomial_checks(Report& rep, const RacahTable& t) {
  const int M = t.coeffs.M();
  const int kmax = std::min(M + 1, 12);
  double worst = 0.0;
  for (double E : sample_energies(t.spectrum)) {
    const auto rec = poly_recurrence(t.coeffs, E, kmax);
    const auto maj = term_majorant(t.coeffs, E, kmax);
    for (int k = 0; k <= kmax; ++k) {
      const double ex = poly_expansion(t.coeffs, E, k);
      worst = std::max(worst, std::fabs(rec[k] - ex) / std::max(maj[k], 1e-300));
    }
  }
  rep.add("poly.recurrence_vs_expansion", worst, 1e-10);

  const auto Es = sample_energies(t.spectrum);
  double plain = 0.0, confluent = 0.0;
  for (std::size_t i = 0; i < Es.size(); ++i) {
    for (int n = 0; n <= M; ++n) {
      const double y = Es[(i + 1) % Es.size()] == Es[i] ? Es[i] + 0.3 : Es[(i + 1) % Es.size()];
      const auto cd = christoffel_darboux_check(t.coeffs, Es[i], y, n);
      plain = std::max(plain, cd.plain);
      confluent = std::max(confluent, cd.confluent);
    }
  }
  rep.add("cd.plain", plain, 1e-10);
  rep.add("cd.confluent", confluent, 1e-10);
}

void spectrum_checks(Report& rep, const CouplingParams& params, const ThetaContext& ctx,
                     const HeunMatrix& H, const RacahTable& t) {
  const int n = H.size();
  double bad = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    if (!(t.spectrum[j] > t.spectrum[j + 1])) bad += 1;
  }
  rep.add("spectrum.descending", bad, 0.0);

  double s1 = 0.0, s2 = 0.0, abs1 = 0.0;
  for (double E : t.spectrum.values) {
    s1 += E;
    s2 += E * E;
    abs1 += std::fabs(E);
  }
  rep.add("spectrum.trace", std::fabs(s1 - H.trace()) / std::max(1.0, abs1), 1e-10);
  rep.add("spectrum.trace_square", std::fabs(s2 - H.trace_of_square()) / std::max(1.0, s2),
          1e-10);

  const auto Hp = build(permute(params, 2), ctx);
  const auto sp = eigenvalues(Hp);
  const double escale = std::max(1.0, max_abs(t.spectrum.values));
  double inv = 0.0;
  for (int j = 0; j < n; ++j) inv = std::max(inv, std::fabs(sp[j] - t.spectrum[j]) / escale);
  rep.add("spectrum.pi2_invariance", inv, 1e-10);

  double res = 0.0;
  for (int j = 0; j < n; ++j) {
    std::vector<double> f(n);
    for (int k = 0; k < n; ++k) f[k] = t.f(k, j);
    res = std::max(res, residual(H, t.spectrum[j], f));
  }
  rep.add("spectrum.eigen_residual", res, 1e-9);
}

void orthogonality_checks(Report& rep, const CouplingParams& params, const ThetaContext& ctx,
                          const RacahTable& t) {
  const int n = t.coeffs.M() + 1;
  const Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(t.delta.data(), n);
  const Eigen::MatrixXd G = t.f.transpose() * D.asDiagonal() * t.f;
  double off = 0.0, diag = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        diag = std::max(diag, rel(G(j, j), t.norms[j]));
      } else {
        off = std::max(off, std::fabs(G(i, j)) / std::sqrt(t.norms[i] * t.norms[j]));
      }
    }
  }
  rep.add("orthogonality.gram_offdiag", off, 1e-8);
  rep.add("orthogonality.gram_diag", diag, 1e-8);

  const auto closed = weights_closed(params, ctx);
  const auto ratio = weights_ratio(t.coeffs);
  double w = 0.0;
  for (int k = 0; k < n; ++k) w = std::max(w, rel(closed[k], ratio[k]));
  rep.add("orthogonality.weights_closed_form", w, 1e-10);

  // 1 / (a_1 ... a_M): product vs theta-ratio display.
  double inv_prod = 1.0;
  for (int k = 1; k < n; ++k) inv_prod /= t.coeffs.a[k];
  rep.add("orthogonality.norms_closed_form", rel(inv_prod, norm_prefactor_closed(params, ctx)),
          1e-9);
}

void epsilon_checks(Report& rep, const CouplingParams& params, const RacahTable& t) {
  const int M = t.coeffs.M();
  const int n = M + 1;
  double prod = 0.0, sign_bad = 0.0, pm = 0.0, ladder = 0.0, fm = 0.0;
  ScaledReal aat = ScaledReal::from(1.0);
  for (int k = 1; k <= M; ++k) aat = aat * ScaledReal::from(t.coeffs.a[k] * t.coeffs.a_tilde[k]);
  for (int j = 0; j < n; ++j) {
    const double e = t.eps.eps[j], et = t.eps.eps_tilde[j];
    prod = std::max(prod, std::fabs(e * et - 1.0));
    const bool even = j % 2 == 0;
    if ((e > 0.0) != even || (et > 0.0) != even) sign_bad += 1;
    const auto p = poly_on_shell(t.coeffs, t.spectrum[j], M);
    const auto pt = poly_on_shell(t.reflected, t.spectrum[j], M);
    pm = std::max(pm, std::fabs((p[M] * pt[M] / aat).value() - 1.0));
    if ((t.f(M, j) > 0.0) != even) ladder += 1;
    fm = std::max(fm, rel(t.f(M, j), et));
  }
  rep.add("eps.product_one", prod, 1e-10);
  rep.add("eps.sign_pattern", sign_bad, 0.0);
  rep.add("eps.pM_product", pm, 1e-9);
  rep.add("eps.sign_ladder", ladder, 0.0);
  rep.add("eps.fM_equals_eps_tilde", fm, 1e-10);

  ScaledReal lhs = ScaledReal::from(1.0), rhs = ScaledReal::from(reversal_sign(M));
  for (int j = 0; j < n; ++j) lhs = lhs * ScaledReal::from(t.eps.eps[j]);
  for (int l = 1; l <= M; ++l) {
    for (int i = 0; i < l; ++i) rhs = rhs * ScaledReal::from(t.coeffs.a_tilde[l] / t.coeffs.a[l]);
  }
  rep.add("eps.total_product", std::fabs((lhs / rhs).value() - 1.0), 1e-9);

  if (is_centrosymmetric(params)) {
    double c = 0.0;
    for (int j = 0; j < n; ++j) c = std::max(c, std::fabs(t.eps.eps[j] - (j % 2 == 0 ? 1 : -1)));
    rep.add("eps.centrosymmetric", c, 1e-10);
  }
}

void heun_checks(Report& rep, const CouplingParams& params, const ThetaContext& ctx,
                 const RacahTable& t) {
  const int M = t.coeffs.M();
  const int n = M + 1;
  double nonpos = 0.0;
  for (int j = 0; j < n; ++j) {
    if (!(t.h(0, j) > 0.0)) nonpos += 1;
  }
  rep.add("heun.h0_positive", nonpos, 0.0);

  const auto w = heun_weights(t.coeffs);
  std::vector<double> gaps(n);
  for (int j = 0; j < n; ++j) gaps[j] = spectral_gap_product(t.spectrum, j);
  double orth = 0.0, dual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += t.h(k, i) * t.h(k, j) * w[k];
      const double target = i == j ? gaps[j] : 0.0;
      orth = std::max(orth, std::fabs(s - target) / std::sqrt(gaps[i] * gaps[j]));
    }
  }
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += t.h(l, j) * t.h(k, j) / gaps[j];
      const double target = l == k ? 1.0 / w[k] : 0.0;
      dual = std::max(dual, std::fabs(s - target) * std::sqrt(w[l] * w[k]));
    }
  }
  rep.add("heun.orthogonality", orth, 1e-8);
  rep.add("heun.dual_orthogonality", dual, 1e-8);

  const auto tp = racah_table(permute(params, 2), ctx);
  const double hscale = t.h.cwiseAbs().maxCoeff();
  double pal = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = j % 2 == 0 ? 1.0 : -1.0;
    for (int k = 0; k < n; ++k) pal = std::max(pal, std::fabs(tp.h(k, j) - s * t.h(M - k, j)));
  }
  rep.add("heun.palindromic", pal / hscale, 1e-9);
}

void racah_matrix_checks(Report& rep, const HeunMatrix& H, const RacahTable& t) {
  const int n = H.size();
  const auto R = racah_matrix(t.coeffs, t.spectrum, t.delta, t.norms, kInf, kInf);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  rep.add("racah.inverse", (R.F_inv * R.F - I).cwiseAbs().maxCoeff(), 1e-8);
  Eigen::MatrixXd E = R.F_inv * dense(H) * R.F;
  for (int j = 0; j < n; ++j) E(j, j) -= t.spectrum[j];
  rep.add("racah.diagonalization",
          E.cwiseAbs().maxCoeff() / std::max(1.0, max_abs(t.spectrum.values)), 1e-8);
  rep.add("racah.det_vandermonde", rel(R.det_elimination, R.det_vandermonde), 1e-7);
  rep.add("racah.det_norm_weight", rel(R.det_elimination, R.det_norm_weight), 1e-7);
}

void trig_checks(Report& rep, const CouplingParams& base, double series_tol) {
  RawParams raw = base.raw();
  raw.p = 0.0;
  const auto params = validate(raw);
  const auto ctx = params.context(series_tol);
  const int M = params.M();
  const int n = M + 1;
  const double S = params.u(1) + params.u(2) + params.v(1) + params.v(2);

  double a_lim = 0.0, b_lim = 0.0, c_lim = 0.0, cconst = 0.0;
  const double C = constant_C_trig(params);
  for (double z : kZs) {
    try {
      a_lim = std::max(a_lim, rel(coeff_A(z, params, ctx), coeff_A_trig(z, params)));
      b_lim = std::max(b_lim, rel(coeff_B(z, params, ctx), coeff_B_trig(z, params), 1.0));
      const double lhs = coeff_A_trig(z, params) + coeff_A_trig(-z, params) +
                         coeff_B_trig(z, params);
      cconst = std::max(cconst, rel(lhs, C, 1.0));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleProximity) throw;
    }
  }
  for (int r = 1; r <= 4; ++r) {
    c_lim = std::max(c_lim, rel(coeff_c(r, params, ctx), coeff_c_trig(r, params), 1e-300));
  }
  rep.add("trig.A_limit", a_lim, 1e-12);
  rep.add("trig.B_limit", b_lim, 1e-12);
  rep.add("trig.c_limit", c_lim, 1e-12);
  rep.add("trig.constant_C", cconst, 1e-10);

  const auto H0 = build(params, ctx);
  const auto& cs = H0.coefficients();
  const auto tc = trig_lattice_coeffs(params);
  const double bscale = std::max(1.0, max_abs(cs.b));
  double lat = 0.0;
  for (int k = 0; k < n; ++k) {
    lat = std::max({lat, rel(cs.a[k], tc.a[k]), rel(cs.a_tilde[k], tc.a_tilde[k]),
                    rel(cs.b[k], tc.b[k], bscale)});
  }
  rep.add("trig.lattice_coeffs", lat, 1e-12);

  const auto tables = trig_tables(params, kInf, kInf);
  const auto spec0 = eigenvalues(H0);
  double es = 0.0;
  const double escale = std::max(1.0, max_abs(spec0.values));
  for (int j = 0; j < n; ++j) {
    es = std::max(es, std::fabs(spec0[j] - tables.spectrum.values[j]) / escale);
  }
  rep.add("trig.spectrum", es, 1e-10);

  const auto wc = weights_closed(params, ctx);
  double wl = 0.0;
  for (int k = 0; k < n; ++k) wl = std::max(wl, rel(wc[k], tables.delta[k]));
  rep.add("trig.weights_limit", wl, 1e-10);

  const auto qp = QRacahParams::from(params);
  rep.add("qracah.truncation", std::abs(qp.a() * std::pow(qp.q(), M + 1) - 1.0), 1e-12);

  double direct = 0.0, dual = 0.0, rec = 0.0, imag = 0.0, match = 0.0;
  const auto qd = qp.dual();
  for (int k = 0; k < n; ++k) {
    const auto f0 = eigenvector(cs, spec0[k]);
    for (int j = 0; j < n; ++j) {
      const cplx R = qracah_R(k, j, qp);
      direct = std::max(direct, rel(R, qracah_poly_direct(k, j, params), 1.0));
      dual = std::max(dual, rel(R, qracah_R(j, k, qd), 1.0));
      rec = std::max(rec, qracah_recurrence_residual(k, j, qp));
      imag = std::max(imag, std::fabs(R.imag()) / std::max(1.0, std::abs(R)));
      // f_j(E_k) from the p = 0 matrix against R_j(x(k)).
      match = std::max(match, std::fabs(f0[j] - qracah_R(j, k, qp).real()) /
                                  std::max(1.0, std::fabs(f0[j])));
    }
  }
  rep.add("qracah.direct_form", direct, 1e-10);
  rep.add("qracah.duality", dual, 1e-10);
  rep.add("qracah.recurrence", rec, 1e-10);
  rep.add("qracah.imaginary_part", imag, 1e-10);
  rep.add("qracah.pipeline_match", match, 1e-10);

  // a~_{t,M-k} = (qcd)^{-1/2} A_k, a_{t,k} = (qcd)^{-1/2} C_k,
  // E - C_t = (qcd)^{-1/2} (X - cdq - 1), with (qcd)^{-1/2} = q^{-S/2}.
  const cplx s = std::polar(1.0, -0.5 * params.alpha() * S);
  double ident = 0.0;
  for (int k = 0; k < n; ++k) {
    ident = std::max(ident, rel(cplx(tc.a_tilde[M - k]), s * qracah_A(k, qp), 1.0));
    ident = std::max(ident, rel(cplx(tc.a[k]), s * qracah_C(k, qp), 1.0));
    const cplx X = qp.lattice_point(k);
    ident = std::max(ident, rel(cplx(tables.spectrum.values[k] - tables.spectrum.C),
                                s * (X - qp.c() * qp.d() * qp.q() - 1.0), 1.0));
  }
  rep.add("qracah.recurrence_identification", ident, 1e-10);

  double eforms = 0.0, esign = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto f = trig_epsilon_inverse(j, params);
    const cplx tr(f.trig);
    eforms = std::max({eforms, rel(f.phi43, tr), rel(f.phi32, tr), rel(f.pochhammer, tr)});
    if ((f.trig > 0.0) != (j % 2 == 0)) esign += 1;
  }
  rep.add("trig.eps_forms", eforms, 1e-10);
  rep.add("trig.eps_sign_pattern", esign, 0.0);

  double wm = 0.0;
  for (int k = 0; k < n; ++k) {
    wm = std::max(wm, rel(cplx(tables.delta[k]), qracah_weight(k, qp)));
    wm = std::max(wm, rel(cplx(tables.delta_hat[k]), qracah_weight(k, qd)));
  }
  rep.add("trig.weight_match", wm, 1e-10);

  double sd = 0.0, sh = 0.0;
  for (int k = 0; k < n; ++k) {
    sd += tables.delta[k];
    sh += tables.delta_hat[k];
  }
  rep.add("trig.total_weight",
          std::max({rel(sd, tables.N0), rel(sh, tables.N0),
                    rel(cplx(tables.N0), qracah_total_weight(qp))}),
          1e-9);

  double nf = 0.0;
  for (int j = 0; j < n; ++j) {
    nf = std::max({nf, rel(tables.norms[j], tables.norms_trig[j]),
                   rel(tables.norms[j], tables.norms_dual[j])});
  }
  rep.add("trig.norm_forms", nf, 1e-9);

  const auto Ft = trig_racah_matrix(params, tables);
  const Eigen::VectorXd D = Eigen::Map<const Eigen::VectorXd>(tables.delta.data(), n);
  const Eigen::MatrixXd G = Ft.F.transpose() * D.asDiagonal() * Ft.F;
  double orth = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double target = i == j ? tables.norms[j] : 0.0;
      orth = std::max(orth, std::fabs(G(i, j) - target) /
                                std::sqrt(tables.norms[i] * tables.norms[j]));
    }
  }
  rep.add("trig.orthogonality", orth, 1e-9);
  rep.add("trig.F_inverse",
          (Ft.F_inv * Ft.F - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
  rep.add("trig.determinant", rel(Ft.det_elimination, Ft.det_closed), 1e-7);
}

}  // namespace

std::vector<IdentityCheck> verify_identities(const CouplingParams& params,
                                             const Thresholds& thresholds, double series_tol) {
  Report rep(thresholds);
  const auto ctx = params.context(series_tol);
  theta_checks(rep, params, ctx);
  const HeunMatrix H = build(params, ctx);
  coefficient_checks(rep, params, ctx, H.coefficients());
  const auto t = racah_table(params, ctx);
  spectrum_checks(rep, params, ctx, H, t);
  polynomial_checks(rep, t);
  orthogonality_checks(rep, params, ctx, t);
  epsilon_checks(rep, params, t);
  heun_checks(rep, params, ctx, t);
  racah_matrix_checks(rep, H, t);
  trig_checks(rep, params, series_tol);
  return rep.take();
}

std::vector<IdentityCheck> verify_lame(double u, int M, double p, const Thresholds& thresholds,
                                       double series_tol) {
  Report rep(thresholds);
  const auto lctx = lame_context(u, M, p, series_tol);
  const HeunMatrix L = lame_matrix(u, M, lctx, kInf);
  const auto params = validate(lame_params(u, M, p));
  const auto gctx = params.context(series_tol);
  const HeunMatrix G = build(params, gctx);

  double diag = 0.0;
  for (int k = 0; k <= M; ++k) diag = std::max({diag, std::fabs(L.diag(k)), std::fabs(G.diag(k))});
  rep.add("lame.zero_diagonal", diag, 1e-10);

  double off = 0.0, dup = 0.0;
  for (int k = 1; k <= M; ++k) {
    off = std::max({off, rel(L.coefficients().a[k], G.coefficients().a[k]),
                    rel(L.coefficients().a_tilde[k], G.coefficients().a_tilde[k])});
    // prod_r [k]_r / [u+k]_r at the general scale, i.e. [2k]_1 / [2u+2k]_1.
    double pr = 1.0;
    for (int r = 1; r <= 4; ++r) pr *= scaled_theta(r, k, gctx) / scaled_theta(r, u + k, gctx);
    dup = std::max(dup, rel(pr, G.coefficients().a[k]));
    dup = std::max(dup, rel(scaled_theta(1, 2.0 * k, gctx) / scaled_theta(1, 2.0 * (u + k), gctx),
                            L.coefficients().a[k]));
  }
  rep.add("lame.offdiag_match", off, 1e-10);
  rep.add("lame.duplication_form", dup, 1e-10);

  const auto s = eigenvalues(L);
  double anti = 0.0;
  for (int j = 0; j <= M; ++j) anti = std::max(anti, std::fabs(s[j] + s[M - j]));
  rep.add("lame.antisymmetric_spectrum", anti / std::max(1.0, max_abs(s.values)), 1e-10);
  return rep.take();
}

}  // namespace ellracah
