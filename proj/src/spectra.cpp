#include "ellracah/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ellracah/error.hpp"
#include "ellracah/recurrence.hpp"

namespace ellracah {

int sturm_count(const Symmetrized& S, double x) {
  const int n = static_cast<int>(S.diag.size());
  constexpr double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (int k = 0; k < n; ++k) {
    const double off2 = k == 0 ? 0.0 : S.off[k] * S.off[k];
    d = S.diag[k] - x - (k == 0 ? 0.0 : off2 / d);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(const Symmetrized& S) {
  const int n = static_cast<int>(S.diag.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int k = 0; k < n; ++k) {
    double radius = 0.0;
    if (k > 0) radius += std::fabs(S.off[k]);
    if (k + 1 < n) radius += std::fabs(S.off[k + 1]);
    lo = std::min(lo, S.diag[k] - radius);
    hi = std::max(hi, S.diag[k] + radius);
  }
  return {lo, hi};
}

namespace {

// index-th smallest eigenvalue (0-based) by bisection on the Sturm count.
std::pair<double, double> bracket(const Symmetrized& S, int index, double lo, double hi,
                                  double rel_tol) {
  const double scale = std::max({1.0, std::fabs(lo), std::fabs(hi)});
  while (hi - lo > rel_tol * scale) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(S, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

double newton_refine(const CoefficientSet& coeffs, double lo, double hi, int steps) {
  const int top = coeffs.M() + 1;
  double x = 0.5 * (lo + hi);
  const double width = hi - lo;
  double best = std::fabs(poly_recurrence(coeffs, x, top).back());
  for (int i = 0; i < steps; ++i) {
    const auto pv = poly_and_derivative(coeffs, x, top);
    const double dp = pv.dp.back();
    if (dp == 0.0 || !std::isfinite(dp)) break;
    const double next = x - pv.p.back() / dp;
    if (!(next >= lo - width && next <= hi + width)) break;
    const double val = std::fabs(poly_recurrence(coeffs, next, top).back());
    if (!(val <= best)) break;
    const bool done = std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                 std::fabs(x);
    x = next;
    best = val;
    if (done) break;
  }
  return x;
}

}  // namespace

Spectrum eigenvalues(const HeunMatrix& H, const EigenSolveOptions& opts) {
  const auto S = symmetrize(H);
  const int n = H.size();
  auto [lo, hi] = gershgorin_bounds(S);
  // Widen slightly so the Sturm counts at the ends are exactly 0 and n.
  const double pad = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)}) + 1e-300;
  lo -= pad;
  hi += pad;
  if (sturm_count(S, lo) != 0 || sturm_count(S, hi) != n) {
    throw Error(ErrorKind::DegenerateSpectrum, "Sturm count at the Gershgorin bounds is wrong");
  }

  Spectrum out;
  out.values.resize(n);
  for (int index = 0; index < n; ++index) {
    const auto [blo, bhi] = bracket(S, index, lo, hi, opts.bracket_rel_tol);
    const double root = newton_refine(H.coefficients(), blo, bhi, opts.newton_steps);
    out.values[n - 1 - index] = root;
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());

  const double spread = out.values.front() - out.values.back();
  for (int j = 0; j + 1 < n; ++j) {
    if (!(out.values[j] - out.values[j + 1] > opts.min_separation * spread)) {
      throw Error(ErrorKind::DegenerateSpectrum,
                  "eigenvalues " + std::to_string(j) + " and " + std::to_string(j + 1) +
                      " are not separated");
    }
  }
  return out;
}

double residual(const HeunMatrix& H, double E, std::span<const double> f) {
  const int n = H.size();
  if (static_cast<int>(f.size()) != n) {
    throw Error(ErrorKind::InvalidContext, "residual vector length must be M+1");
  }
  double fmax = 0.0;
  for (double x : f) fmax = std::max(fmax, std::fabs(x));
  if (fmax == 0.0) return 0.0;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    double hf = H.diag(k) * f[k];
    if (k > 0) hf += H.sub(k) * f[k - 1];
    if (k + 1 < n) hf += H.sup(k) * f[k + 1];
    worst = std::max(worst, std::fabs(hf - E * f[k]));
  }
  return worst / ((1.0 + std::fabs(E)) * fmax);
}

}  // namespace ellracah
