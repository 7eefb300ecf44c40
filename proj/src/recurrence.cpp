#include "ellracah/recurrence.hpp"

#include <boost/multiprecision/float128.hpp>
#include <limits>
#include <string>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

constexpr double kRescaleHigh = 0x1p+256;
constexpr double kRescaleLow = 0x1p-256;

void check_degree(const CoefficientSet& coeffs, int upto) {
  if (upto < 0 || upto > coeffs.M() + 1) {
    throw Error(ErrorKind::InvalidContext,
                "polynomial degree out of range: " + std::to_string(upto));
  }
}

}  // namespace

ScaledReal ScaledReal::from(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  return {m, e};
}

double ScaledReal::log2_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(std::fabs(mantissa)) + static_cast<double>(exponent);
}

ScaledReal operator*(ScaledReal x, ScaledReal y) {
  auto out = ScaledReal::from(x.mantissa * y.mantissa);
  out.exponent += x.exponent + y.exponent;
  return out;
}

ScaledReal operator/(ScaledReal x, ScaledReal y) {
  auto out = ScaledReal::from(x.mantissa / y.mantissa);
  out.exponent += x.exponent - y.exponent;
  return out;
}

std::vector<ScaledReal> poly_recurrence_scaled(const CoefficientSet& coeffs, double E, int upto) {
  check_degree(coeffs, upto);
  std::vector<ScaledReal> out;
  out.reserve(upto + 1);
  // prev and cur share the exponent `shift`.
  double prev = 0.0;
  double cur = 1.0;
  long shift = 0;
  out.push_back(ScaledReal::from(1.0));
  for (int k = 0; k < upto; ++k) {
    const double next = (E - coeffs.b[k]) * cur - recurrence_weight(coeffs, k) * prev;
    prev = cur;
    cur = next;
    const double mag = std::fabs(cur);
    if (mag > kRescaleHigh || (mag < kRescaleLow && mag > 0.0)) {
      int e = 0;
      std::frexp(cur, &e);
      cur = std::ldexp(cur, -e);
      prev = std::ldexp(prev, -e);
      shift += e;
    }
    auto value = ScaledReal::from(cur);
    value.exponent += shift;
    out.push_back(value);
  }
  return out;
}

std::vector<double> poly_recurrence(const CoefficientSet& coeffs, double E, int upto) {
  const auto scaled = poly_recurrence_scaled(coeffs, E, upto);
  std::vector<double> out;
  out.reserve(scaled.size());
  for (const auto& s : scaled) out.push_back(s.value());
  return out;
}

PolyValues poly_and_derivative(const CoefficientSet& coeffs, double E, int upto) {
  check_degree(coeffs, upto);
  PolyValues out;
  out.p.assign(upto + 1, 0.0);
  out.dp.assign(upto + 1, 0.0);
  out.p[0] = 1.0;
  for (int k = 0; k < upto; ++k) {
    const double w = recurrence_weight(coeffs, k);
    const double pm = k > 0 ? out.p[k - 1] : 0.0;
    const double dpm = k > 0 ? out.dp[k - 1] : 0.0;
    out.p[k + 1] = (E - coeffs.b[k]) * out.p[k] - w * pm;
    out.dp[k + 1] = out.p[k] + (E - coeffs.b[k]) * out.dp[k] - w * dpm;
  }
  return out;
}

namespace {

using Quad = boost::multiprecision::float128;

// p_{upto}, p'_{upto} in quad precision.
std::pair<Quad, Quad> quad_value_and_derivative(const CoefficientSet& coeffs, const Quad& E,
                                                int upto) {
  Quad pm = 0, p = 1, dpm = 0, dp = 0;
  for (int k = 0; k < upto; ++k) {
    const Quad w = Quad(coeffs.a[k]) * Quad(coeffs.a_tilde[k == 0 ? 0 : coeffs.M() + 1 - k]);
    const Quad shifted = E - Quad(coeffs.b[k]);
    const Quad next = shifted * p - w * pm;
    const Quad dnext = p + shifted * dp - w * dpm;
    pm = p;
    p = next;
    dpm = dp;
    dp = dnext;
  }
  return {p, dp};
}

ScaledReal to_scaled(const Quad& x) {
  if (x == 0) return {0.0, 0};
  int e = 0;
  const Quad m = boost::multiprecision::frexp(x, &e);
  return {static_cast<double>(m), e};
}

}  // namespace

std::vector<ScaledReal> poly_on_shell(const CoefficientSet& coeffs, double E, int upto) {
  check_degree(coeffs, upto);
  const int top = coeffs.M() + 1;
  Quad x = E;
  // Quadratic convergence from a double root: two steps reach quad precision.
  for (int i = 0; i < 3; ++i) {
    const auto [p, dp] = quad_value_and_derivative(coeffs, x, top);
    if (dp == 0) break;
    const Quad step = p / dp;
    // Never move further than a few double ulps: E is already a root to
    // double accuracy, and a larger jump means the derivative is unreliable.
    if (abs(step) > 64 * std::numeric_limits<double>::epsilon() * (1 + std::fabs(E))) break;
    x -= step;
  }
  std::vector<ScaledReal> out;
  out.reserve(upto + 1);
  Quad pm = 0, p = 1;
  out.push_back(ScaledReal::from(1.0));
  for (int k = 0; k < upto; ++k) {
    const Quad w = k == 0 ? Quad(0) : Quad(coeffs.a[k]) * Quad(coeffs.a_tilde[coeffs.M() + 1 - k]);
    const Quad next = (x - Quad(coeffs.b[k])) * p - w * pm;
    pm = p;
    p = next;
    out.push_back(to_scaled(p));
  }
  return out;
}

}  // namespace ellracah
