#include "ellracah/theta.hpp"

#include <cmath>
#include <string>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

constexpr int kMaxSeriesTerms = 10000;
constexpr int kMaxProductFactors = 1000000;

void check_index(int r) {
  if (r < 1 || r > 4) {
    throw Error(ErrorKind::InvalidContext, "theta index must be 1..4, got " + std::to_string(r));
  }
}

[[noreturn]] void series_overflow(double p) {
  throw Error(ErrorKind::InvalidContext,
              "theta series did not converge within the iteration cap (p = " +
                  std::to_string(p) + ")");
}

// Reduced series: theta_{1,2} without the leading 2 p^{1/4}, theta_{3,4} as is.
//   S1(x) = sum (-1)^n p^{n(n+1)} sin((2n+1)x)
//   S2(x) = sum        p^{n(n+1)} cos((2n+1)x)
//   S3(x) = 1 + 2 sum        p^{n^2} cos(2nx)
//   S4(x) = 1 + 2 sum (-1)^n p^{n^2} cos(2nx)
// `derivative` selects d/dx at x = 0 for S1 (the only one needed).
double reduced_series(int r, double x, double p, double tol, bool derivative = false) {
  double sum = 0.0;
  if (r == 1 || r == 2) {
    double weight = 1.0;  // p^{n(n+1)}
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
      const double sign = (r == 1 && (n % 2 == 1)) ? -1.0 : 1.0;
      const double freq = 2.0 * n + 1.0;
      const double bound = derivative ? weight * freq : weight;
      if (n > 0 && bound < tol * std::fmax(1.0, std::fabs(sum))) return sum;
      double term;
      if (derivative) {
        term = sign * weight * freq;
      } else {
        term = sign * weight * (r == 1 ? std::sin(freq * x) : std::cos(freq * x));
      }
      sum += term;
      weight *= std::pow(p, 2.0 * (n + 1));
      if (weight == 0.0) return sum;
    }
    series_overflow(p);
  }
  sum = 1.0;
  double weight = p;  // p^{n^2} at n = 1
  for (int n = 1; n < kMaxSeriesTerms; ++n) {
    const double bound = 2.0 * weight;
    if (bound < tol * std::fmax(1.0, std::fabs(sum))) return sum;
    const double sign = (r == 4 && (n % 2 == 1)) ? -1.0 : 1.0;
    sum += 2.0 * sign * weight * std::cos(2.0 * n * x);
    weight *= std::pow(p, 2.0 * n + 1.0);
    if (weight == 0.0) return sum;
  }
  series_overflow(p);
}

double prefactor(int r, double p) { return (r <= 2) ? 2.0 * std::pow(p, 0.25) : 1.0; }

}  // namespace

ThetaContext::ThetaContext(double p, double alpha, double tol) : p_(p), alpha_(alpha), tol_(tol) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidContext, "elliptic nome must satisfy 0 <= p < 1");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidContext, "scale alpha must be positive and finite");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::InvalidContext, "series tolerance must be positive");
  }
  norm_[0] = reduced_series(1, 0.0, p_, tol_, true);
  for (int r = 2; r <= 4; ++r) norm_[r - 1] = reduced_series(r, 0.0, p_, tol_);
}

double theta(int r, double z, const ThetaContext& ctx) {
  check_index(r);
  return prefactor(r, ctx.p()) * reduced_series(r, z, ctx.p(), ctx.tol());
}

double theta_product(int r, double z, const ThetaContext& ctx) {
  check_index(r);
  const double p = ctx.p();
  const double c2 = std::cos(2.0 * z);
  double prod;
  switch (r) {
    case 1: prod = 2.0 * std::pow(p, 0.25) * std::sin(z); break;
    case 2: prod = 2.0 * std::pow(p, 0.25) * std::cos(z); break;
    default: prod = 1.0; break;
  }
  double p2n = p * p;   // p^{2n}
  double p2n1 = p;      // p^{2n-1}
  for (int n = 1; n < kMaxProductFactors; ++n) {
    if (4.0 * p2n1 < ctx.tol()) return prod;
    double factor = 1.0 - p2n;
    switch (r) {
      case 1: factor *= 1.0 - 2.0 * p2n * c2 + p2n * p2n; break;
      case 2: factor *= 1.0 + 2.0 * p2n * c2 + p2n * p2n; break;
      case 3: factor *= 1.0 + 2.0 * p2n1 * c2 + p2n1 * p2n1; break;
      default: factor *= 1.0 - 2.0 * p2n1 * c2 + p2n1 * p2n1; break;
    }
    prod *= factor;
    p2n1 = p2n * p;
    p2n *= p * p;
  }
  series_overflow(p);
}

double theta1_prime_zero(const ThetaContext& ctx) {
  return prefactor(1, ctx.p()) * reduced_series(1, 0.0, ctx.p(), ctx.tol(), true);
}

double scaled_theta(int r, double z, const ThetaContext& ctx) {
  check_index(r);
  const double half = 0.5 * ctx.alpha();
  const double s = reduced_series(r, half * z, ctx.p(), ctx.tol());
  if (r == 1) return s / (half * ctx.norm_[0]);
  return s / ctx.norm_[r - 1];
}

}  // namespace ellracah
