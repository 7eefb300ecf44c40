#pragma once

#include <array>

namespace ellracah {

inline constexpr double kDefaultSeriesTol = 1e-16;

/// Elliptic nome, real-period scale and series truncation tolerance.
///
/// The nome must satisfy 0 <= p < 1. The value p = 0 is admitted and yields
/// the trigonometric degeneration of every scaled theta function; it is what
/// the q-Racah limit pipeline runs on.
///
/// Normalization constants (theta_r(0) and theta_1'(0)) are evaluated once at
/// construction, so a context is cheap to share and copy.
class ThetaContext {
 public:
  ThetaContext(double p, double alpha, double tol = kDefaultSeriesTol);

  double p() const noexcept { return p_; }
  double alpha() const noexcept { return alpha_; }
  double tol() const noexcept { return tol_; }

  /// Same nome and tolerance, different scale.
  ThetaContext with_alpha(double alpha) const { return ThetaContext(p_, alpha, tol_); }

 private:
  friend double scaled_theta(int r, double z, const ThetaContext& ctx);

  double p_;
  double alpha_;
  double tol_;
  // Reduced normalizers: index 0 holds S1'(0), 1..3 hold S_{r}(0) for r=2..4.
  std::array<double, 4> norm_{};
};

/// Jacobi theta_r(z; p), r = 1..4, summed from its Fourier (q-)series.
double theta(int r, double z, const ThetaContext& ctx);

/// Same function from the infinite product representation. Independent code
/// path, kept as a built-in oracle for the series.
double theta_product(int r, double z, const ThetaContext& ctx);

/// theta_1'(0; p) from the term-by-term differentiated series.
double theta1_prime_zero(const ThetaContext& ctx);

/// Rescaled and normalized theta functions [z]_r:
///   [z]_1 = theta_1(alpha z / 2) / ((alpha / 2) theta_1'(0)),
///   [z]_r = theta_r(alpha z / 2) / theta_r(0),  r = 2, 3, 4.
double scaled_theta(int r, double z, const ThetaContext& ctx);

}  // namespace ellracah
