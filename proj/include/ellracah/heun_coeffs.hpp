#pragma once

#include <array>
#include <vector>

#include "ellracah/params.hpp"
#include "ellracah/theta.hpp"

namespace ellracah {

/// Smallest admissible |denominator factor| in A(z) and B(z).
inline constexpr double kPoleTol = 1e-12;

/// Finite-lattice coefficients of the truncated difference Heun operator.
/// a[0] = a_tilde[0] = 0; entries 1..M are strictly positive.
struct CoefficientSet {
  std::vector<double> a;        // a_0..a_M, subdiagonal source
  std::vector<double> a_tilde;  // a~_0..a~_M, superdiagonal source
  std::vector<double> b;        // b_0..b_M, diagonal
  std::array<double, 4> c{};    // c_1..c_4

  int M() const noexcept { return static_cast<int>(b.size()) - 1; }
};

/// A(z) = prod_r ([z+u_r]_r / [z]_r) ([z+1/2+v_r]_r / [z+1/2]_r).
double coeff_A(double z, const CouplingParams& params, const ThetaContext& ctx,
               double pole_tol = kPoleTol);

/// c_r = 2 / ([u]_1 [u+1]_1) prod_s [u_{pi_r(s)} - 1/2]_s [v_{pi_r(s)}]_s.
double coeff_c(int r, const CouplingParams& params, const ThetaContext& ctx);

/// B(z) = sum_r c_r ([z+1/2+u]_r / [z+1/2]_r) ([z-1/2-u]_r / [z-1/2]_r),
/// u being the virtual parameter.
double coeff_B(double z, const CouplingParams& params, const ThetaContext& ctx,
               double pole_tol = kPoleTol);

/// a_k from its lattice form (parity of [.]_r already applied), k >= 1.
double lattice_a(int k, const CouplingParams& params, const ThetaContext& ctx);

/// a~_k from its lattice form, k >= 1. Equals lattice_a on pi_2-permuted parameters.
double lattice_a_tilde(int k, const CouplingParams& params, const ThetaContext& ctx);

/// Trigonometric factor carrying the sign of a_k (sin/cos ratios at p = 0).
double principal_trig_factor(int k, const CouplingParams& params);

/// a_k = A(-u_1-k), a~_k = A(u_1+M-k), b_k = B(u_1+k), k = 0..M.
/// Structural zeros a_0 = a~_0 = 0 are stored exactly. Every CoefficientSet
/// invariant is checked (positivity, agreement of lattice and A(z) forms,
/// pi_2 covariance of b) and an InvariantViolation names the first failure
/// beyond `invariant_tol`.
CoefficientSet lattice_coeffs(const CouplingParams& params, const ThetaContext& ctx,
                              double invariant_tol = 1e-10);

}  // namespace ellracah
