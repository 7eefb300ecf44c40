#include "ellracah/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

void check_positive(const CoefficientSet& c) {
  for (int k = 1; k <= c.M(); ++k) {
    if (!(c.a[k] > 0.0) || !(c.a_tilde[k] > 0.0)) {
      throw Error(ErrorKind::PositivityViolation,
                  "off-diagonal coefficient not positive at k=" + std::to_string(k));
    }
  }
}

}  // namespace

HeunMatrix::HeunMatrix(CoefficientSet coeffs) : coeffs_(std::move(coeffs)) {
  const auto n = coeffs_.b.size();
  if (n == 0 || coeffs_.a.size() != n || coeffs_.a_tilde.size() != n) {
    throw Error(ErrorKind::InvariantViolation, "coefficient arrays must all have length M+1");
  }
  check_positive(coeffs_);
}

double HeunMatrix::entry(int j, int k) const {
  if (j == k) return diag(k);
  if (j == k + 1) return sub(j);
  if (k == j + 1) return sup(j);
  return 0.0;
}

HeunMatrix HeunMatrix::reflected() const {
  // (J H J)_{j,k} = H_{M-j,M-k}: the diagonal reverses and the two
  // off-diagonal sources swap roles.
  CoefficientSet out = coeffs_;
  const int M = this->M();
  for (int k = 0; k <= M; ++k) out.b[k] = coeffs_.b[M - k];
  out.a = coeffs_.a_tilde;
  out.a_tilde = coeffs_.a;
  return HeunMatrix(std::move(out));
}

double HeunMatrix::trace() const {
  double s = 0.0;
  for (double b : coeffs_.b) s += b;
  return s;
}

double HeunMatrix::trace_of_square() const {
  double s = 0.0;
  for (double b : coeffs_.b) s += b * b;
  for (int k = 1; k <= M(); ++k) s += 2.0 * sub(k) * sup(k - 1);
  return s;
}

HeunMatrix build(const CouplingParams& params, const ThetaContext& ctx) {
  return HeunMatrix(lattice_coeffs(params, ctx));
}

Symmetrized symmetrize(const HeunMatrix& H) {
  const int M = H.M();
  Symmetrized out;
  out.scale.assign(M + 1, 1.0);
  out.diag = H.coefficients().b;
  out.off.assign(M + 1, 0.0);
  for (int k = 1; k <= M; ++k) {
    const double lower = H.sub(k);
    const double upper = H.sup(k - 1);
    if (!(lower > 0.0) || !(upper > 0.0)) {
      throw Error(ErrorKind::PositivityViolation, "cannot symmetrize at k=" + std::to_string(k));
    }
    out.scale[k] = out.scale[k - 1] * std::sqrt(upper / lower);
    const double from_lower = out.scale[k] * lower / out.scale[k - 1];
    const double from_upper = out.scale[k - 1] * upper / out.scale[k];
    const double closed = std::sqrt(lower * upper);
    const double tol = 1e-12 * closed;
    if (std::fabs(from_lower - from_upper) > tol || std::fabs(from_lower - closed) > tol) {
      throw Error(ErrorKind::InvariantViolation,
                  "symmetrized off-diagonal mismatch at k=" + std::to_string(k));
    }
    out.off[k] = closed;
  }
  return out;
}

}  // namespace ellracah
