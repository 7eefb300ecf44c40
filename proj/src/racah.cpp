#include "ellracah/racah.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

double rel_diff(double x, double y) {
  const double scale = std::fmax(std::fabs(x), std::fabs(y));
  return scale == 0.0 ? 0.0 : std::fabs(x - y) / scale;
}

ScaledReal product_of(const std::vector<double>& xs, int from, int to) {
  ScaledReal out = ScaledReal::from(1.0);
  for (int i = from; i <= to; ++i) out = out * ScaledReal::from(xs[i]);
  return out;
}

}  // namespace

double poly_expansion(const CoefficientSet& coeffs, double E, int k) {
  if (k > kExpansionCap) {
    throw Error(ErrorKind::ExpansionTooLarge,
                "explicit expansion capped at degree " + std::to_string(kExpansionCap));
  }
  if (k < 0 || k > coeffs.M() + 1) {
    throw Error(ErrorKind::InvalidContext, "degree out of range: " + std::to_string(k));
  }
  if (k == 0) return 1.0;
  // Bit (j-1) of `mask` marks transposition (j, j+1), j = 1..k-1.
  const std::uint32_t limit = std::uint32_t{1} << (k - 1);
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (mask & (mask >> 1)) continue;
    double term = 1.0;
    std::uint32_t covered = 0;  // bit (j-1) set when index j is moved
    for (int j = 1; j < k; ++j) {
      if (mask & (std::uint32_t{1} << (j - 1))) {
        term *= -recurrence_weight(coeffs, j);
        covered |= (std::uint32_t{3} << (j - 1));
      }
    }
    for (int j = 1; j <= k; ++j) {
      if (!(covered & (std::uint32_t{1} << (j - 1)))) term *= E - coeffs.b[j - 1];
    }
    total += term;
  }
  return total;
}

std::vector<double> eigenvector(const CoefficientSet& coeffs, double E, double shell_tol) {
  const int M = coeffs.M();
  const auto p = poly_recurrence_scaled(coeffs, E, M + 1);
  const double pM = p[M].value();
  const double pMm = M > 0 ? p[M - 1].value() : 0.0;
  double scale = (std::fabs(E) + std::fabs(coeffs.b[M])) * std::fabs(pM) +
                 std::fabs(recurrence_weight(coeffs, M) * pMm);
  if (scale == 0.0) scale = 1.0;
  if (std::fabs(p[M + 1].value()) > shell_tol * scale) {
    throw Error(ErrorKind::OffShell, "p_{M+1}(E) does not vanish at E=" + std::to_string(E));
  }
  const auto ps = poly_on_shell(coeffs, E, M);
  std::vector<double> f(M + 1);
  ScaledReal norm = ScaledReal::from(1.0);
  for (int k = 0; k <= M; ++k) {
    f[k] = (ps[k] / norm).value();
    if (k < M) norm = norm * ScaledReal::from(coeffs.a_tilde[M - k]);
  }
  return f;
}

std::vector<double> weights_ratio(const CoefficientSet& coeffs) {
  const int M = coeffs.M();
  std::vector<double> out(M + 1, 1.0);
  for (int k = 1; k <= M; ++k) out[k] = out[k - 1] * coeffs.a_tilde[M + 1 - k] / coeffs.a[k];
  return out;
}

std::vector<double> weights_closed(const CouplingParams& params, const ThetaContext& ctx) {
  const int M = params.M();
  const double u1 = params.u(1), u2 = params.u(2);
  const double base = scaled_theta(1, 2.0 * u1, ctx);
  std::vector<double> out(M + 1, 1.0);
  double running = 1.0;
  for (int k = 1; k <= M; ++k) {
    for (int r = 1; r <= 4; ++r) {
      const int s = half_period_perm(2, r);
      running *= scaled_theta(r, u2 - params.u(s) + M + 1 - k, ctx) *
                 scaled_theta(r, u2 - params.v(s) + M + 0.5 - k, ctx) /
                 (scaled_theta(r, u1 - params.u(r) + k, ctx) *
                  scaled_theta(r, u1 - params.v(r) - 0.5 + k, ctx));
    }
    out[k] = scaled_theta(1, 2.0 * u1 + 2.0 * k, ctx) / base * running;
  }
  return out;
}

std::vector<double> weights(const CoefficientSet& coeffs, const CouplingParams& params,
                            const ThetaContext& ctx, double tol) {
  auto ratio = weights_ratio(coeffs);
  const auto closed = weights_closed(params, ctx);
  for (std::size_t k = 0; k < ratio.size(); ++k) {
    if (rel_diff(ratio[k], closed[k]) > tol) {
      throw Error(ErrorKind::FormMismatch,
                  "weight forms disagree at k=" + std::to_string(k));
    }
  }
  return ratio;
}

Epsilons epsilons(const CoefficientSet& coeffs, const CoefficientSet& reflected,
                  const Spectrum& spectrum, double product_tol) {
  const int M = coeffs.M();
  const auto prod_a = product_of(coeffs.a, 1, M);
  const auto prod_at = product_of(coeffs.a_tilde, 1, M);
  Epsilons out;
  out.eps.resize(M + 1);
  out.eps_tilde.resize(M + 1);
  for (int j = 0; j <= M; ++j) {
    const double E = spectrum[j];
    const auto pt = poly_on_shell(reflected, E, M);
    const auto p = poly_on_shell(coeffs, E, M);
    out.eps[j] = (pt[M] / prod_a).value();
    out.eps_tilde[j] = (p[M] / prod_at).value();
    if (std::fabs(out.eps[j] * out.eps_tilde[j] - 1.0) > product_tol) {
      throw Error(ErrorKind::ProductIdentityViolation,
                  "eps_j eps~_j != 1 at j=" + std::to_string(j));
    }
    const double expected = (j % 2 == 0) ? 1.0 : -1.0;
    if (!(out.eps[j] * expected > 0.0) || !(out.eps_tilde[j] * expected > 0.0)) {
      throw Error(ErrorKind::SignPatternViolation,
                  "sign(eps_j) != (-1)^j at j=" + std::to_string(j));
    }
  }
  return out;
}

double spectral_gap_product(const Spectrum& spectrum, int j) {
  double out = 1.0;
  for (int l = 0; l < spectrum.size(); ++l) {
    if (l != j) out *= std::fabs(spectrum[j] - spectrum[l]);
  }
  return out;
}

double norm_prefactor_closed(const CouplingParams& params, const ThetaContext& ctx) {
  const double u1 = params.u(1);
  double theta_ratio = 1.0;
  for (int k = 1; k <= params.M(); ++k) {
    for (int r = 1; r <= 4; ++r) {
      theta_ratio *= scaled_theta(r, u1 + k, ctx) / scaled_theta(r, u1 - params.u(r) + k, ctx) *
                     scaled_theta(r, u1 - 0.5 + k, ctx) /
                     scaled_theta(r, u1 - params.v(r) - 0.5 + k, ctx);
    }
  }
  return theta_ratio;
}

std::vector<double> norms(const CoefficientSet& coeffs, const Spectrum& spectrum,
                          const Epsilons& eps, const CouplingParams& params,
                          const ThetaContext& ctx, double tol) {
  const int M = coeffs.M();
  const auto prod_a = product_of(coeffs.a, 1, M);
  const double theta_ratio = norm_prefactor_closed(params, ctx);
  std::vector<double> out(M + 1);
  for (int j = 0; j <= M; ++j) {
    const double gaps = spectral_gap_product(spectrum, j);
    const double abs_eps = std::fabs(eps.eps[j]);
    const double compact =
        (ScaledReal::from(gaps) / (ScaledReal::from(abs_eps) * prod_a)).value();
    const double expanded = theta_ratio * gaps / abs_eps;
    if (rel_diff(compact, expanded) > tol) {
      throw Error(ErrorKind::FormMismatch, "norm forms disagree at j=" + std::to_string(j));
    }
    out[j] = compact;
  }
  return out;
}

CdResidual christoffel_darboux_check(const CoefficientSet& coeffs, double x, double y, int n) {
  if (n < 0 || n > coeffs.M()) {
    throw Error(ErrorKind::InvalidContext, "Christoffel-Darboux degree must be 0..M");
  }
  const auto px = poly_and_derivative(coeffs, x, n + 1);
  const auto py = poly_recurrence(coeffs, y, n + 1);
  double lhs = 0.0, lhs_c = 0.0, lhs_abs = 0.0, norm = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) norm *= recurrence_weight(coeffs, k);
    lhs += px.p[k] * py[k] / norm;
    lhs_abs += std::fabs(px.p[k] * py[k] / norm);
    lhs_c += px.p[k] * px.p[k] / norm;
  }
  const double rhs = (px.p[n + 1] * py[n] - px.p[n] * py[n + 1]) / ((x - y) * norm);
  const double rhs_c = (px.dp[n + 1] * px.p[n] - px.dp[n] * px.p[n + 1]) / norm;
  CdResidual out;
  out.plain_lhs = lhs;
  out.confluent_lhs = lhs_c;
  // Between two eigenvalues the sum cancels to ~0; measure against its terms.
  out.plain = std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), lhs_abs, 1e-300});
  out.confluent = rel_diff(lhs_c, rhs_c);
  return out;
}

Eigen::MatrixXd heun_functions(const Eigen::MatrixXd& f, const Epsilons& eps) {
  Eigen::MatrixXd h = f;
  for (Eigen::Index j = 0; j < f.cols(); ++j) h.col(j) *= std::sqrt(std::fabs(eps.eps[j]));
  return h;
}

std::vector<double> heun_weights(const CoefficientSet& coeffs) {
  const int M = coeffs.M();
  std::vector<double> out(M + 1);
  for (int k = 0; k <= M; ++k) {
    ScaledReal w = product_of(coeffs.a, k + 1, M);
    for (int j = 1; j <= k; ++j) w = w * ScaledReal::from(coeffs.a_tilde[M + 1 - j]);
    out[k] = w.value();
  }
  return out;
}

int reversal_sign(int M) { return ((M * (M + 1) / 2) % 2 == 0) ? 1 : -1; }

RacahMatrix racah_matrix(const CoefficientSet& coeffs, const Spectrum& spectrum,
                         const std::vector<double>& delta, const std::vector<double>& norms,
                         double inverse_tol, double det_tol) {
  const int M = coeffs.M();
  const int n = M + 1;
  RacahMatrix out;
  out.F.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const auto f = eigenvector(coeffs, spectrum[j]);
    for (int k = 0; k < n; ++k) out.F(k, j) = f[k];
  }
  out.F_inv.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) out.F_inv(j, k) = out.F(k, j) * delta[k] / norms[j];
  }
  const Eigen::MatrixXd ident = out.F_inv * out.F;
  const double inv_err = (ident - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (inv_err > inverse_tol) {
    throw Error(ErrorKind::FormMismatch,
                "closed-form inverse misses the identity by " + std::to_string(inv_err));
  }

  out.det_elimination = out.F.partialPivLu().determinant();

  const double sign = reversal_sign(M);
  ScaledReal vander = ScaledReal::from(sign);
  for (int l = 1; l <= M; ++l) {
    for (int i = 0; i < l; ++i) vander = vander / ScaledReal::from(coeffs.a_tilde[l]);
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) vander = vander * ScaledReal::from(spectrum[j] - spectrum[k]);
  }
  out.det_vandermonde = vander.value();

  ScaledReal nw = ScaledReal::from(sign);
  for (int l = 0; l < n; ++l) nw = nw * ScaledReal::from(std::sqrt(norms[l] / delta[l]));
  out.det_norm_weight = nw.value();

  if (rel_diff(out.det_elimination, out.det_vandermonde) > det_tol ||
      rel_diff(out.det_vandermonde, out.det_norm_weight) > det_tol ||
      rel_diff(out.det_elimination, out.det_norm_weight) > det_tol) {
    throw Error(ErrorKind::FormMismatch, "determinant evaluations disagree");
  }
  return out;
}

RacahTable racah_table(const CouplingParams& params, const ThetaContext& ctx) {
  const HeunMatrix H = build(params, ctx);
  RacahTable t;
  t.coeffs = H.coefficients();
  t.reflected = H.reflected().coefficients();
  t.spectrum = eigenvalues(H);
  const int M = params.M();
  const int n = M + 1;
  t.p.resize(n + 1, n);
  t.f.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double E = t.spectrum[j];
    const auto p = poly_recurrence(t.coeffs, E, M + 1);
    for (int k = 0; k <= M + 1; ++k) t.p(k, j) = p[k];
    const auto f = eigenvector(t.coeffs, E);
    for (int k = 0; k < n; ++k) t.f(k, j) = f[k];
  }
  t.delta = weights(t.coeffs, params, ctx);
  t.eps = epsilons(t.coeffs, t.reflected, t.spectrum);
  t.norms = norms(t.coeffs, t.spectrum, t.eps, params, ctx);
  t.h = heun_functions(t.f, t.eps);
  return t;
}

}  // namespace ellracah
