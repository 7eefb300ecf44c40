#include "ellracah/heun_coeffs.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

// [z + shift]_r, rejected when it falls below pole_tol; the message names z.
double guarded(int r, double z, double shift, const ThetaContext& ctx, double pole_tol,
               const char* what) {
  const double val = scaled_theta(r, z + shift, ctx);
  if (std::fabs(val) < pole_tol) {
    std::ostringstream os;
    os.precision(17);
    os << what << " factor r=" << r << " vanishes at z=" << z;
    throw Error(ErrorKind::PoleProximity, os.str());
  }
  return val;
}

double rel_diff(double x, double y) {
  const double scale = std::fmax(std::fabs(x), std::fabs(y));
  return scale == 0.0 ? 0.0 : std::fabs(x - y) / scale;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvariantViolation, what);
}

}  // namespace

double coeff_A(double z, const CouplingParams& params, const ThetaContext& ctx, double pole_tol) {
  double out = 1.0;
  for (int r = 1; r <= 4; ++r) {
    const double den = guarded(r, z, 0.0, ctx, pole_tol, "[z]") *
                       guarded(r, z, 0.5, ctx, pole_tol, "[z+1/2]");
    out *= scaled_theta(r, z + params.u(r), ctx) * scaled_theta(r, z + 0.5 + params.v(r), ctx) /
           den;
  }
  return out;
}

double coeff_c(int r, const CouplingParams& params, const ThetaContext& ctx) {
  const double uu = params.u_virtual();
  const double den = scaled_theta(1, uu, ctx) * scaled_theta(1, uu + 1.0, ctx);
  if (den == 0.0 || !std::isfinite(den)) {
    throw Error(ErrorKind::VirtualParamSingular, "[u]_1 [u+1]_1 vanishes");
  }
  double prod = 2.0 / den;
  for (int s = 1; s <= 4; ++s) {
    const int idx = half_period_perm(r, s);
    prod *= scaled_theta(s, params.u(idx) - 0.5, ctx) * scaled_theta(s, params.v(idx), ctx);
  }
  return prod;
}

double coeff_B(double z, const CouplingParams& params, const ThetaContext& ctx, double pole_tol) {
  const double uu = params.u_virtual();
  double sum = 0.0;
  for (int r = 1; r <= 4; ++r) {
    const double den = guarded(r, z, 0.5, ctx, pole_tol, "[z+1/2]") *
                       guarded(r, z, -0.5, ctx, pole_tol, "[z-1/2]");
    sum += coeff_c(r, params, ctx) * scaled_theta(r, z + 0.5 + uu, ctx) *
           scaled_theta(r, z - 0.5 - uu, ctx) / den;
  }
  return sum;
}

double lattice_a(int k, const CouplingParams& params, const ThetaContext& ctx) {
  const double u1 = params.u(1);
  double out = 1.0;
  for (int r = 1; r <= 4; ++r) {
    out *= scaled_theta(r, u1 - params.u(r) + k, ctx) / scaled_theta(r, u1 + k, ctx) *
           scaled_theta(r, u1 - params.v(r) - 0.5 + k, ctx) /
           scaled_theta(r, u1 - 0.5 + k, ctx);
  }
  return out;
}

double lattice_a_tilde(int k, const CouplingParams& params, const ThetaContext& ctx) {
  const double u2 = params.u(2);
  double out = 1.0;
  for (int r = 1; r <= 4; ++r) {
    const int s = half_period_perm(2, r);
    out *= scaled_theta(r, u2 - params.u(s) + k, ctx) / scaled_theta(r, u2 + k, ctx) *
           scaled_theta(r, u2 - params.v(s) - 0.5 + k, ctx) /
           scaled_theta(r, u2 - 0.5 + k, ctx);
  }
  return out;
}

double principal_trig_factor(int k, const CouplingParams& params) {
  const double h = 0.5 * params.alpha();
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  return std::sin(h * k) / std::sin(h * (u1 + k)) * std::cos(h * (u1 - u2 + k)) /
         std::cos(h * (u1 + k)) * std::sin(h * (u1 - v1 - 0.5 + k)) /
         std::sin(h * (u1 - 0.5 + k)) * std::cos(h * (u1 - v2 - 0.5 + k)) /
         std::cos(h * (u1 - 0.5 + k));
}

CoefficientSet lattice_coeffs(const CouplingParams& params, const ThetaContext& ctx,
                              double invariant_tol) {
  if (rel_diff(ctx.alpha(), params.alpha()) > 1e-15) {
    throw Error(ErrorKind::InvalidContext, "theta context scale does not match the truncation");
  }
  const int M = params.M();
  const double u1 = params.u(1);
  CoefficientSet out;
  out.a.assign(M + 1, 0.0);
  out.a_tilde.assign(M + 1, 0.0);
  out.b.assign(M + 1, 0.0);
  for (int r = 1; r <= 4; ++r) out.c[r - 1] = coeff_c(r, params, ctx);

  for (int k = 1; k <= M; ++k) {
    out.a[k] = lattice_a(k, params, ctx);
    out.a_tilde[k] = lattice_a_tilde(k, params, ctx);
  }
  for (int k = 0; k <= M; ++k) out.b[k] = coeff_B(u1 + k, params, ctx);

  const auto reflected = permute(params, 2);
  for (int k = 1; k <= M; ++k) {
    const std::string at = " at k=" + std::to_string(k);
    require(out.a[k] > 0.0, "positivity of a_k" + at);
    require(out.a_tilde[k] > 0.0, "positivity of a~_k" + at);
    require(rel_diff(out.a[k], coeff_A(-u1 - k, params, ctx)) <= invariant_tol,
            "a_k = A(-u1-k)" + at);
    require(rel_diff(out.a_tilde[k], coeff_A(u1 + M - k, params, ctx)) <= invariant_tol,
            "a~_k = A(u1+M-k)" + at);
  }
  double b_scale = 0.0;
  for (double x : out.b) b_scale = std::fmax(b_scale, std::fabs(x));
  for (int k = 0; k <= M; ++k) {
    const double mirrored = coeff_B(reflected.u(1) + k, reflected, ctx);
    require(std::fabs(out.b[M - k] - mirrored) <= invariant_tol * std::fmax(1.0, b_scale),
            "b_{M-k} = pi_2(b_k) at k=" + std::to_string(k));
  }
  return out;
}

}  // namespace ellracah
