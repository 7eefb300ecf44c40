#pragma once

#include <cmath>
#include <vector>

#include "ellracah/heun_coeffs.hpp"

namespace ellracah {

/// mantissa * 2^exponent. Carries values whose magnitude would leave the
/// double range, e.g. long products of lattice coefficients.
struct ScaledReal {
  double mantissa = 0.0;
  long exponent = 0;

  static ScaledReal from(double x);
  double value() const { return std::ldexp(mantissa, static_cast<int>(exponent)); }
  int sign() const { return (mantissa > 0.0) - (mantissa < 0.0); }
  /// log2 |x|; -inf for zero.
  double log2_abs() const;

  friend ScaledReal operator*(ScaledReal x, ScaledReal y);
  friend ScaledReal operator/(ScaledReal x, ScaledReal y);
};

/// Monic elliptic Racah polynomials p_0(E)..p_upto(E) from
///   p_{k+1} = (E - b_k) p_k - a_k a~_{M+1-k} p_{k-1},  p_0 = 1,
/// with an exponent accumulator so no intermediate overflows. upto <= M+1.
std::vector<ScaledReal> poly_recurrence_scaled(const CoefficientSet& coeffs, double E, int upto);

/// Plain-double view of poly_recurrence_scaled.
std::vector<double> poly_recurrence(const CoefficientSet& coeffs, double E, int upto);

/// p_0..p_upto at the root of p_{M+1} nearest to E. E is first polished by
/// Newton steps in 113-bit binary floating point and the recurrence is then
/// run in that precision. On-shell quantities such as p_M(E_j) can be far
/// more sensitive to E than a double root resolves (a nearby root of p_M
/// multiplies the half-ulp error of E_j); this removes that loss.
std::vector<ScaledReal> poly_on_shell(const CoefficientSet& coeffs, double E, int upto);

struct PolyValues {
  std::vector<double> p;   // p_0..p_upto
  std::vector<double> dp;  // p'_0..p'_upto
};

/// Values and E-derivatives from the differentiated recurrence
///   p'_{k+1} = p_k + (E - b_k) p'_k - a_k a~_{M+1-k} p'_{k-1}.
PolyValues poly_and_derivative(const CoefficientSet& coeffs, double E, int upto);

/// Recurrence weight a_k a~_{M+1-k} for k = 1..M (zero for k = 0).
inline double recurrence_weight(const CoefficientSet& coeffs, int k) {
  return k == 0 ? 0.0 : coeffs.a[k] * coeffs.a_tilde[coeffs.M() + 1 - k];
}

}  // namespace ellracah
