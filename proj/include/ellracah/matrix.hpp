#pragma once

#include <vector>

#include "ellracah/heun_coeffs.hpp"

namespace ellracah {

/// Tridiagonal (M+1)x(M+1) Heun matrix, stored as three bands:
///   (k, k-1) = a_k,  (k, k) = b_k,  (k, k+1) = a~_{M-k}.
/// Never materialized densely.
class HeunMatrix {
 public:
  /// Throws PositivityViolation if an off-diagonal entry is not strictly positive.
  explicit HeunMatrix(CoefficientSet coeffs);

  int M() const noexcept { return coeffs_.M(); }
  int size() const noexcept { return coeffs_.M() + 1; }
  const CoefficientSet& coefficients() const noexcept { return coeffs_; }

  double diag(int k) const { return coeffs_.b.at(k); }
  /// Entry (k, k-1), k = 1..M.
  double sub(int k) const { return coeffs_.a.at(k); }
  /// Entry (k, k+1), k = 0..M-1.
  double sup(int k) const { return coeffs_.a_tilde.at(M() - k); }
  /// Any entry; zero off the three bands.
  double entry(int j, int k) const;

  /// J H J, with J the anti-diagonal involution.
  HeunMatrix reflected() const;

  double trace() const;
  /// trace(H^2) = sum b_k^2 + 2 sum_k a_{k+1} a~_{M-k}.
  double trace_of_square() const;

 private:
  CoefficientSet coeffs_;
};

HeunMatrix build(const CouplingParams& params, const ThetaContext& ctx);

/// Diagonal similarity S = D H D^{-1} with D_k = sqrt(Delta_k),
/// Delta_k = prod_{l<=k} a~_{M+1-l} / a_l.
struct Symmetrized {
  std::vector<double> scale;  // D_0..D_M
  std::vector<double> diag;   // b_0..b_M
  std::vector<double> off;    // off[k] = S_{k,k-1} = S_{k-1,k}, k = 1..M; off[0] = 0
};

/// Throws PositivityViolation if the bands are not positive and
/// InvariantViolation if the two off-diagonal images disagree beyond 1e-12.
Symmetrized symmetrize(const HeunMatrix& H);

}  // namespace ellracah
