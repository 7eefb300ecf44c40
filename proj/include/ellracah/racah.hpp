#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ellracah/matrix.hpp"
#include "ellracah/params.hpp"
#include "ellracah/recurrence.hpp"
#include "ellracah/spectra.hpp"

namespace ellracah {

/// Largest degree the explicit transposition-sum expansion accepts.
inline constexpr int kExpansionCap = 20;

/// p_k(E) from the explicit alternating sum over sets of non-adjacent simple
/// transpositions (j, j+1), 1 <= j < k: each chosen j contributes
/// -a_j a~_{M+1-j}, each index j left fixed contributes (E - b_{j-1}).
/// Term count grows like Fibonacci(k+1); throws ExpansionTooLarge past the cap.
double poly_expansion(const CoefficientSet& coeffs, double E, int k);

/// Normalized eigenvector f_k(E) = p_k(E) prod_{0<=j<k} 1 / a~_{M-j}, k = 0..M.
/// Throws OffShell unless |p_{M+1}(E)| <= shell_tol times the size of the
/// terms it was formed from.
std::vector<double> eigenvector(const CoefficientSet& coeffs, double E, double shell_tol = 1e-8);

/// Delta_k = prod_{l<=k} a~_{M+1-l} / a_l.
std::vector<double> weights_ratio(const CoefficientSet& coeffs);

/// Delta_k from its theta-function closed form (duplication formula applied).
std::vector<double> weights_closed(const CouplingParams& params, const ThetaContext& ctx);

/// Ratio form, after requiring agreement with the closed form to `tol`
/// relative (FormMismatch otherwise).
std::vector<double> weights(const CoefficientSet& coeffs, const CouplingParams& params,
                            const ThetaContext& ctx, double tol = 1e-10);

struct Epsilons {
  std::vector<double> eps;        // eps_j = p~_M(E_j) / (a_1 ... a_M)
  std::vector<double> eps_tilde;  // eps~_j = p_M(E_j) / (a~_1 ... a~_M)
};

/// `reflected` holds the coefficients for pi_2-permuted parameters (equal to
/// those of J H J). Throws ProductIdentityViolation when eps eps~ = 1 fails
/// beyond `product_tol` and SignPatternViolation when sign(eps_j) != (-1)^j.
Epsilons epsilons(const CoefficientSet& coeffs, const CoefficientSet& reflected,
                  const Spectrum& spectrum, double product_tol = 1e-10);

/// prod_{l != j} |E_j - E_l|.
double spectral_gap_product(const Spectrum& spectrum, int j);

/// 1 / (a_1 ... a_M) written out as a product of theta ratios.
double norm_prefactor_closed(const CouplingParams& params, const ThetaContext& ctx);

/// N_j = prod_{l != j} |E_j - E_l| / (|eps_j| a_1 ... a_M), cross-checked
/// against the expanded theta-ratio form to `tol` relative.
std::vector<double> norms(const CoefficientSet& coeffs, const Spectrum& spectrum,
                          const Epsilons& eps, const CouplingParams& params,
                          const ThetaContext& ctx, double tol = 1e-9);

/// Residuals of the two Christoffel-Darboux identities at degree n. The plain
/// form is scaled by the sum of absolute terms on its left-hand side.
struct CdResidual {
  double plain = 0.0;      // (x, y) form
  double confluent = 0.0;  // derivative form at x
  double plain_lhs = 0.0;
  double confluent_lhs = 0.0;
};

CdResidual christoffel_darboux_check(const CoefficientSet& coeffs, double x, double y, int n);

/// h(k, j) = h_k(E_j) = |eps_j|^{1/2} f_k(E_j).
Eigen::MatrixXd heun_functions(const Eigen::MatrixXd& f, const Epsilons& eps);

/// Weight of the Heun-function orthogonality:
/// prod_{j<=k} a~_{M+1-j} prod_{j>k} a_j.
std::vector<double> heun_weights(const CoefficientSet& coeffs);

struct RacahMatrix {
  Eigen::MatrixXd F;      // F(k, j) = f_k(E_j)
  Eigen::MatrixXd F_inv;  // N^{-1} F^T Delta
  double det_elimination = 0.0;
  double det_vandermonde = 0.0;
  double det_norm_weight = 0.0;
};

/// (-1)^{M(M+1)/2}.
int reversal_sign(int M);

/// Builds F, its closed-form inverse and three independent determinants.
/// Throws FormMismatch if F_inv F deviates from I by more than `inverse_tol`
/// or the determinants disagree by more than `det_tol` relative.
RacahMatrix racah_matrix(const CoefficientSet& coeffs, const Spectrum& spectrum,
                         const std::vector<double>& delta, const std::vector<double>& norms,
                         double inverse_tol = 1e-8, double det_tol = 1e-7);

/// Everything derived from one parameter set.
struct RacahTable {
  CoefficientSet coeffs;
  CoefficientSet reflected;
  Spectrum spectrum;
  Eigen::MatrixXd p;  // p(k, j) = p_k(E_j), k = 0..M+1
  Eigen::MatrixXd f;  // f(k, j) = f_k(E_j), k = 0..M
  std::vector<double> delta;
  std::vector<double> norms;
  Epsilons eps;
  Eigen::MatrixXd h;  // h(k, j) = h_k(E_j)
};

RacahTable racah_table(const CouplingParams& params, const ThetaContext& ctx);

}  // namespace ellracah
