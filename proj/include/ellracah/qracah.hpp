#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ellracah/matrix.hpp"
#include "ellracah/params.hpp"

namespace ellracah {

using cplx = std::complex<double>;

/// Threshold on the imaginary part of quantities that are real on shell.
inline constexpr double kImaginaryLeakTol = 1e-10;

/// (z; q)_n = prod_{0<=l<n} (1 - z q^l); 1 for n = 0.
cplx qpochhammer(cplx z, cplx q, int n);

/// Terminating r+1 phi r: sum_{n=0}^{terms} prod (num_i; q)_n / ((q; q)_n prod (den_j; q)_n) z^n.
/// Throws DenominatorPoleBeforeTermination if a denominator Pochhammer
/// symbol vanishes (|.| < 1e-14) at or before the last requested term.
cplx basic_hypergeometric(std::span<const cplx> num, std::span<const cplx> den, cplx q, cplx z,
                          int terms);

/// 4 phi 3 terminating after `k` terms (k is the degree set by a leading q^{-k}).
cplx phi43(const std::array<cplx, 4>& num, const std::array<cplx, 3>& den, cplx q, cplx z,
           int k);

/// q-Racah parameters in the trigonometric limit:
///   q = e^{i alpha}, a = -q^{u1+u2-1}, b = -q^{u1-u2},
///   c = -q^{u1+v2-1/2}, d = -q^{u2+v1-1/2},
/// which satisfy the truncation a q^{M+1} = 1.
///
/// Stored as the raw (u1, u2, v1, v2) and M, so every evaluation can rebuild
/// alpha and the parameters in whatever precision it runs in; the truncation
/// then holds to that precision as well.
struct QRacahParams {
  std::array<double, 4> uv{};  // u1, u2, v1, v2
  int M = 0;
  bool dual_roles = false;     // (a, b, c, d) -> (c, d, a, b)

  static QRacahParams from(const CouplingParams& params);
  QRacahParams dual() const { return {uv, M, !dual_roles}; }

  double alpha() const;
  /// Exponent e_i of the i-th parameter (a, b, c, d = -q^{e_i}), in double.
  double exponent(int i) const;
  cplx q() const;
  cplx a() const { return param(0); }
  cplx b() const { return param(1); }
  cplx c() const { return param(2); }
  cplx d() const { return param(3); }
  cplx param(int i) const;
  /// X(x) = c d q^{x+1} + q^{-x}.
  cplx lattice_point(int x) const;
};

/// Everything below that evaluates a basic hypergeometric sum works in
/// 113-bit binary floating point internally: at |q| = 1 the terms of the
/// terminating sums grow far beyond their total, and double precision loses
/// up to ten digits by M ~ 15. Results are rounded back to double.

/// R_k(X(x); a, b, c, d | q) as a terminating 4 phi 3.
cplx qracah_R(int k, int x, const QRacahParams& qp);

/// R_k(X(j)) with the real-on-shell check; throws ImaginaryLeak.
double qracah_poly(int k, int j, const QRacahParams& qp);

/// Same value from the 4 phi 3 written directly in the coupling parameters.
cplx qracah_poly_direct(int k, int j, const CouplingParams& params);

/// Coefficients A_k and C_k of the q-Racah three-term recurrence.
cplx qracah_A(int k, const QRacahParams& qp);
cplx qracah_C(int k, const QRacahParams& qp);

/// Relative residual of A_k R_{k+1} + C_k R_{k-1} + (cdq+1-A_k-C_k) R_k = X R_k at X = X(j).
double qracah_recurrence_residual(int k, int j, const QRacahParams& qp);

/// Standard q-Racah weight Delta_k(a, b, c, d; q).
cplx qracah_weight(int k, const QRacahParams& qp);

/// Standard closed form of N_0 = sum_k Delta_k(a, b, c, d; q).
cplx qracah_total_weight(const QRacahParams& qp);

// ---------------------------------------------------------------------------
// Trigonometric (p = 0) coefficient functions, written out in sin/cos.

double coeff_A_trig(double z, const CouplingParams& params);
double coeff_c_trig(int r, const CouplingParams& params);
double coeff_B_trig(double z, const CouplingParams& params);
/// C_t = 2 cos(alpha/2 (u1+u2+v1+v2)) + sum_r c_{t,r}.
double constant_C_trig(const CouplingParams& params);

/// a_{t,k} = A_t(-u1-k), a~_{t,k} = A_t(u1+M-k), b_{t,k} = B_t(u1+k).
CoefficientSet trig_lattice_coeffs(const CouplingParams& params);

struct TrigSpectrum {
  std::vector<double> values;  // E_{t,0} > ... > E_{t,M}
  std::array<double, 4> c{};   // c_{t,1..4}
  double C = 0.0;
};

/// E_{t,j} = 2 cos(alpha/2 (2j + u1+u2+v1+v2)) + sum_r c_{t,r}.
TrigSpectrum trig_spectrum(const CouplingParams& params);

/// The four evaluations of eps_{t,j}^{-1}: 4 phi 3 at k = M, the reduced
/// 3 phi 2, Jackson's product of Pochhammer symbols, and the sin/cos product.
struct TrigEpsilonForms {
  cplx phi43;
  cplx phi32;
  cplx pochhammer;
  double trig;
};
TrigEpsilonForms trig_epsilon_inverse(int j, const CouplingParams& params);

struct TrigTables {
  TrigSpectrum spectrum;
  std::vector<double> delta;      // Delta_{t,k}
  std::vector<double> delta_hat;  // hat Delta_{t,j}
  std::vector<double> eps;        // eps_{t,j}
  std::vector<double> norms;      // N_{t,j} from eps and the spectral gaps
  std::vector<double> norms_trig; // same, sin/cos product display
  std::vector<double> norms_dual; // N_{t,0} / hat Delta_{t,j}
  double N0 = 0.0;                // closed product
};

/// Evaluates every closed form. Throws FormMismatch when eps_{t,j} from the
/// 3 phi 2 and from the product disagree beyond `eps_tol`, when N_{t,0}
/// differs from sum Delta_t or sum hat Delta_t beyond `norm_tol`, or when the
/// norm forms N_{t,j} disagree beyond `norm_tol`.
TrigTables trig_tables(const CouplingParams& params, double eps_tol = 1e-10,
                       double norm_tol = 1e-9);

struct TrigRacahMatrix {
  Eigen::MatrixXd F;      // F(k, j) = f_{t,k}(E_{t,j})
  Eigen::MatrixXd F_inv;  // N_{t,0}^{-1} hat Delta_t F^T Delta_t
  double det_elimination = 0.0;
  double det_closed = 0.0;
};

TrigRacahMatrix trig_racah_matrix(const CouplingParams& params, const TrigTables& tables);

// ---------------------------------------------------------------------------
// Elliptic -> trigonometric convergence.

struct ConvergenceRow {
  double p = 0.0;
  int j = 0;
  double eigenvalue_dev = 0.0;  // |E_j(p) - E_{t,j}|
  double function_dev = 0.0;    // max_k |f_k(E_j; p) - f_{t,k}(E_{t,j})|
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;  // ordered by p (as given), then j
  bool converged = true;
  std::string failure;  // first offending (p, j, quantity) when not converged
};

inline constexpr double kMaxDecayRatio = 0.75;

std::vector<double> default_p_sweep();

/// Runs the elliptic pipeline at each p and compares with the q-Racah data.
/// Deviations must decrease along the sequence with consecutive ratio
/// <= kMaxDecayRatio, per eigen-index and per quantity.
ConvergenceReport trig_limit_convergence(const RawParams& base, const std::vector<double>& p_seq,
                                         double series_tol = kDefaultSeriesTol);

// ---------------------------------------------------------------------------
// Lame slice: all u_r = u, all v_r = 0.

/// Scale used by the Lame display: alpha_L = 2 pi / (2u + M), twice the scale
/// of the general truncation for the same parameters.
double lame_alpha(double u, int M);
ThetaContext lame_context(double u, int M, double p, double tol = kDefaultSeriesTol);

/// Parameters of the general pipeline on the Lame slice.
RawParams lame_params(double u, int M, double p);

/// Builds ([M-k]_1 / [u+M-k]_1) f_{k+1} + ([k]_1 / [u+k]_1) f_{k-1} = E f_k
/// directly (ctx must carry alpha_L), then checks its off-diagonals against
/// the general matrix on the slice to `match_tol` relative (FormMismatch).
HeunMatrix lame_matrix(double u, int M, const ThetaContext& ctx, double match_tol = 1e-10);

}  // namespace ellracah
