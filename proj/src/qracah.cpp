#include "ellracah/qracah.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/float128.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/complex128.hpp>

#include "ellracah/error.hpp"
#include "ellracah/racah.hpp"
#include "ellracah/recurrence.hpp"
#include "ellracah/spectra.hpp"

namespace ellracah {

namespace {

constexpr double kDenominatorPoleTol = 1e-14;

using Quad = boost::multiprecision::float128;
using QuadC = boost::multiprecision::complex128;

double rel_diff(double x, double y) {
  return std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), 1e-300});
}

double rel_diff(cplx x, cplx y) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

cplx to_cplx(const QuadC& z) {
  return {static_cast<double>(real(z)), static_cast<double>(imag(z))};
}

double to_double_abs(const cplx& z) { return std::abs(z); }
double to_double_abs(const QuadC& z) { return static_cast<double>(abs(z)); }

template <class C>
C pochhammer_t(const C& z, const C& q, int n) {
  C out(1);
  C ql(1);
  for (int l = 0; l < n; ++l) {
    out *= C(1) - z * ql;
    ql *= q;
  }
  return out;
}

template <class C>
C hypergeometric_t(std::span<const C> num, std::span<const C> den, const C& q, const C& z,
                   int terms) {
  C sum(1);
  C term(1);
  C qn(1);  // q^{n-1} inside the loop
  for (int n = 1; n <= terms; ++n) {
    C top = z;
    for (const C& x : num) top *= C(1) - x * qn;
    C bottom = C(1) - qn * q;
    for (std::size_t i = 0; i < den.size(); ++i) {
      const C f = C(1) - den[i] * qn;
      if (to_double_abs(f) < kDenominatorPoleTol) {
        throw Error(ErrorKind::DenominatorPoleBeforeTermination,
                    "denominator " + std::to_string(i + 1) + " vanishes at term " +
                        std::to_string(n));
      }
      bottom *= f;
    }
    if (to_double_abs(bottom) < kDenominatorPoleTol) {
      throw Error(ErrorKind::DenominatorPoleBeforeTermination,
                  "(q;q)_n vanishes at term " + std::to_string(n));
    }
    term *= top / bottom;
    sum += term;
    qn *= q;
  }
  return sum;
}

// q^x = e^{i alpha x} in quad, alpha = pi / (u1 + u2 + M) from the raw inputs.
struct QuadPowers {
  Quad alpha;
  QuadPowers(double u1, double u2, int M)
      : alpha(boost::math::constants::pi<Quad>() / (Quad(u1) + Quad(u2) + M)) {}
  explicit QuadPowers(const CouplingParams& params)
      : QuadPowers(params.u(1), params.u(2), params.M()) {}
  QuadC operator()(const Quad& x) const {
    const Quad t = alpha * x;
    return QuadC(cos(t), sin(t));
  }
  QuadC operator()(double x) const { return (*this)(Quad(x)); }
};

std::array<Quad, 4> quad_exponents(const QRacahParams& qp) {
  const Quad u1 = qp.uv[0], u2 = qp.uv[1], v1 = qp.uv[2], v2 = qp.uv[3];
  const Quad half(0.5);
  std::array<Quad, 4> e{u1 + u2 - 1, u1 - u2, u1 + v2 - half, u2 + v1 - half};
  if (qp.dual_roles) e = {e[2], e[3], e[0], e[1]};
  return e;
}

// The q-Racah parameters of qp rebuilt in quad.
struct QuadQRacah {
  QuadPowers pw;
  std::array<Quad, 4> e;
  QuadC q, a, b, c, d;
  explicit QuadQRacah(const QRacahParams& qp)
      : pw(qp.uv[0], qp.uv[1], qp.M),
        e(quad_exponents(qp)),
        q(pw(1.0)),
        a(-pw(e[0])),
        b(-pw(e[1])),
        c(-pw(e[2])),
        d(-pw(e[3])) {}
  QuadC qi(int n) const { return pw(Quad(n)); }
};

QuadC R_quad(int k, int x, const QuadQRacah& Q) {
  const std::array<QuadC, 4> num{Q.qi(-k), Q.a * Q.b * Q.qi(k + 1), Q.qi(-x),
                                 Q.c * Q.d * Q.qi(x + 1)};
  const std::array<QuadC, 3> den{Q.a * Q.q, Q.b * Q.d * Q.q, Q.c * Q.q};
  return hypergeometric_t<QuadC>(num, den, Q.q, Q.q, std::min(k, x));
}

QuadC A_quad(int k, const QuadQRacah& Q) {
  const QuadC ab = Q.a * Q.b;
  const QuadC qk1 = Q.qi(k + 1);
  const QuadC one(1);
  return (one - Q.a * qk1) * (one - ab * qk1) * (one - Q.b * Q.d * qk1) * (one - Q.c * qk1) /
         ((one - ab * Q.qi(2 * k + 1)) * (one - ab * Q.qi(2 * k + 2)));
}

QuadC C_quad(int k, const QuadQRacah& Q) {
  const QuadC ab = Q.a * Q.b;
  const QuadC qk = Q.qi(k);
  const QuadC one(1);
  return Q.q * (one - qk) * (one - Q.b * qk) * (Q.c - ab * qk) * (Q.d - Q.a * qk) /
         ((one - ab * Q.qi(2 * k)) * (one - ab * Q.qi(2 * k + 1)));
}

// 4 phi 3 in the coupling parameters; shared by qracah_poly_direct and the
// k = M evaluation of eps_t^{-1}.
QuadC direct_quad(int k, int j, const CouplingParams& params) {
  const QuadPowers pw(params);
  const Quad u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  const Quad S = u1 + u2 + v1 + v2;
  const Quad half(0.5);
  const std::array<QuadC, 4> num{pw(Quad(-k)), pw(2 * u1 + k), pw(Quad(-j)), pw(S + j)};
  const std::array<QuadC, 3> den{-pw(u1 + u2), pw(u1 + v1 + half), -pw(u1 + v2 + half)};
  return hypergeometric_t<QuadC>(num, den, pw(1.0), pw(1.0), std::min(k, j));
}

}  // namespace

cplx qpochhammer(cplx z, cplx q, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidContext, "q-Pochhammer length must be >= 0");
  return pochhammer_t(z, q, n);
}

cplx basic_hypergeometric(std::span<const cplx> num, std::span<const cplx> den, cplx q, cplx z,
                          int terms) {
  return hypergeometric_t<cplx>(num, den, q, z, terms);
}

cplx phi43(const std::array<cplx, 4>& num, const std::array<cplx, 3>& den, cplx q, cplx z,
           int k) {
  return basic_hypergeometric(num, den, q, z, k);
}

QRacahParams QRacahParams::from(const CouplingParams& params) {
  QRacahParams qp;
  qp.uv = {params.u(1), params.u(2), params.v(1), params.v(2)};
  qp.M = params.M();
  const cplx trunc = qp.a() * std::pow(qp.q(), params.M() + 1);
  if (std::abs(trunc - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvariantViolation,
                "truncation a q^{M+1} = 1 fails by " + fmt(std::abs(trunc - 1.0)));
  }
  return qp;
}

double QRacahParams::alpha() const { return std::numbers::pi / (uv[0] + uv[1] + M); }

double QRacahParams::exponent(int i) const {
  return static_cast<double>(quad_exponents(*this).at(i));
}

cplx QRacahParams::q() const { return std::polar(1.0, alpha()); }

cplx QRacahParams::param(int i) const {
  const QuadQRacah Q(*this);
  return to_cplx(-Q.pw(Q.e.at(i)));
}

cplx QRacahParams::lattice_point(int x) const {
  const QuadQRacah Q(*this);
  return to_cplx(Q.c * Q.d * Q.qi(x + 1) + Q.qi(-x));
}

cplx qracah_R(int k, int x, const QRacahParams& qp) { return to_cplx(R_quad(k, x, QuadQRacah(qp))); }

double qracah_poly(int k, int j, const QRacahParams& qp) {
  if (k < 0 || j < 0 || k > qp.M || j > qp.M) {
    throw Error(ErrorKind::InvalidContext, "q-Racah indices must lie in 0..M");
  }
  const cplx R = qracah_R(k, j, qp);
  if (std::fabs(R.imag()) > kImaginaryLeakTol * std::max(1.0, std::abs(R))) {
    throw Error(ErrorKind::ImaginaryLeak, "Im R_" + std::to_string(k) + "(x(" +
                                              std::to_string(j) + ")) = " + fmt(R.imag()));
  }
  return R.real();
}

cplx qracah_poly_direct(int k, int j, const CouplingParams& params) {
  return to_cplx(direct_quad(k, j, params));
}

cplx qracah_A(int k, const QRacahParams& qp) { return to_cplx(A_quad(k, QuadQRacah(qp))); }

cplx qracah_C(int k, const QRacahParams& qp) { return to_cplx(C_quad(k, QuadQRacah(qp))); }

double qracah_recurrence_residual(int k, int j, const QRacahParams& qp) {
  const QuadQRacah Q(qp);
  const QuadC A = A_quad(k, Q);
  const QuadC C = C_quad(k, Q);
  const QuadC X = Q.c * Q.d * Q.qi(j + 1) + Q.qi(-j);
  const QuadC Rk = R_quad(k, j, Q);
  const QuadC up = A * R_quad(k + 1, j, Q);
  const QuadC down = k > 0 ? QuadC(C * R_quad(k - 1, j, Q)) : QuadC(0);
  const QuadC mid = (Q.c * Q.d * Q.q + QuadC(1) - A - C) * Rk;
  const QuadC rhs = X * Rk;
  const double scale = std::max({to_double_abs(up), to_double_abs(down), to_double_abs(mid),
                                 to_double_abs(rhs), 1e-300});
  return to_double_abs(QuadC(up + down + mid - rhs)) / scale;
}

cplx qracah_weight(int k, const QRacahParams& qp) {
  const QuadQRacah Q(qp);
  const QuadC &q = Q.q, &a = Q.a, &b = Q.b, &c = Q.c, &d = Q.d;
  const QuadC ab = a * b;
  const QuadC top = pochhammer_t(QuadC(c * q), q, k) * pochhammer_t(QuadC(b * d * q), q, k) *
                    pochhammer_t(QuadC(a * q), q, k) * pochhammer_t(QuadC(ab * q), q, k);
  const QuadC bottom = pochhammer_t(q, q, k) * pochhammer_t(QuadC(ab * q / c), q, k) *
                       pochhammer_t(QuadC(a * q / d), q, k) * pochhammer_t(QuadC(b * q), q, k);
  QuadC cdq_k(1);
  for (int i = 0; i < k; ++i) cdq_k *= c * d * q;
  return to_cplx(top / bottom * (QuadC(1) - ab * Q.qi(2 * k + 1)) /
                 (cdq_k * (QuadC(1) - ab * q)));
}

cplx qracah_total_weight(const QRacahParams& qp) {
  const QuadQRacah Q(qp);
  const int M = qp.M;
  const QuadC binv = QuadC(1) / Q.b;
  return to_cplx(pochhammer_t(binv, Q.q, M) * pochhammer_t(QuadC(Q.c * Q.d * Q.q * Q.q), Q.q, M) /
                 (pochhammer_t(QuadC(binv * Q.c * Q.q), Q.q, M) *
                  pochhammer_t(QuadC(Q.d * Q.q), Q.q, M)));
}

// ---------------------------------------------------------------------------

double coeff_A_trig(double z, const CouplingParams& params) {
  const double h = 0.5 * params.alpha();
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  const double den[4] = {std::sin(h * z), std::cos(h * z), std::sin(h * (z + 0.5)),
                         std::cos(h * (z + 0.5))};
  for (int i = 0; i < 4; ++i) {
    if (std::fabs(den[i]) < kPoleTol) {
      throw Error(ErrorKind::PoleProximity, "A_t denominator " + std::to_string(i + 1) +
                                                " vanishes at z = " + fmt(z));
    }
  }
  return std::sin(h * (z + u1)) / den[0] * std::cos(h * (z + u2)) / den[1] *
         std::sin(h * (z + 0.5 + v1)) / den[2] * std::cos(h * (z + 0.5 + v2)) / den[3];
}

double coeff_c_trig(int r, const CouplingParams& params) {
  const double h = 0.5 * params.alpha();
  const double uu = params.u_virtual();
  const int s1 = half_period_perm(r, 1), s2 = half_period_perm(r, 2);
  return 2.0 * std::sin(h * (params.u(s1) - 0.5)) * std::sin(h * params.v(s1)) *
         std::cos(h * (params.u(s2) - 0.5)) * std::cos(h * params.v(s2)) /
         (std::sin(h * uu) * std::sin(h * (uu + 1.0)));
}

double coeff_B_trig(double z, const CouplingParams& params) {
  const double h = 0.5 * params.alpha();
  const double uu = params.u_virtual();
  const double s_den = std::sin(h * (z + 0.5)) * std::sin(h * (z - 0.5));
  const double c_den = std::cos(h * (z + 0.5)) * std::cos(h * (z - 0.5));
  if (std::fabs(s_den) < kPoleTol || std::fabs(c_den) < kPoleTol) {
    throw Error(ErrorKind::PoleProximity, "B_t denominator vanishes at z = " + fmt(z));
  }
  return coeff_c_trig(1, params) * std::sin(h * (z + 0.5 + uu)) * std::sin(h * (z - 0.5 - uu)) /
             s_den +
         coeff_c_trig(2, params) * std::cos(h * (z + 0.5 + uu)) * std::cos(h * (z - 0.5 - uu)) /
             c_den +
         coeff_c_trig(3, params) + coeff_c_trig(4, params);
}

double constant_C_trig(const CouplingParams& params) {
  const double S = params.u(1) + params.u(2) + params.v(1) + params.v(2);
  double C = 2.0 * std::cos(0.5 * params.alpha() * S);
  for (int r = 1; r <= 4; ++r) C += coeff_c_trig(r, params);
  return C;
}

namespace {

// a_{t,k} with (x, y, w1, w2) = (u1, u2, v1, v2); a~_{t,k} swaps the labels 1 <-> 2.
double trig_a(int k, double h, double x, double y, double w1, double w2) {
  return std::sin(h * k) / std::sin(h * (x + k)) * std::sin(h * (x - w1 - 0.5 + k)) /
         std::sin(h * (x - 0.5 + k)) * std::cos(h * (x - y + k)) / std::cos(h * (x + k)) *
         std::cos(h * (x - w2 - 0.5 + k)) / std::cos(h * (x - 0.5 + k));
}

}  // namespace

CoefficientSet trig_lattice_coeffs(const CouplingParams& params) {
  const int M = params.M();
  const double h = 0.5 * params.alpha();
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  CoefficientSet cs;
  cs.a.assign(M + 1, 0.0);
  cs.a_tilde.assign(M + 1, 0.0);
  cs.b.resize(M + 1);
  for (int k = 1; k <= M; ++k) {
    cs.a[k] = trig_a(k, h, u1, u2, v1, v2);
    cs.a_tilde[k] = trig_a(k, h, u2, u1, v2, v1);
  }
  for (int k = 0; k <= M; ++k) cs.b[k] = coeff_B_trig(u1 + k, params);
  for (int r = 1; r <= 4; ++r) cs.c[r - 1] = coeff_c_trig(r, params);
  return cs;
}

TrigSpectrum trig_spectrum(const CouplingParams& params) {
  TrigSpectrum ts;
  const double S = params.u(1) + params.u(2) + params.v(1) + params.v(2);
  double csum = 0.0;
  for (int r = 1; r <= 4; ++r) {
    ts.c[r - 1] = coeff_c_trig(r, params);
    csum += ts.c[r - 1];
  }
  ts.C = 2.0 * std::cos(0.5 * params.alpha() * S) + csum;
  ts.values.resize(params.M() + 1);
  for (int j = 0; j <= params.M(); ++j) {
    ts.values[j] = 2.0 * std::cos(0.5 * params.alpha() * (2 * j + S)) + csum;
  }
  return ts;
}

TrigEpsilonForms trig_epsilon_inverse(int j, const CouplingParams& params) {
  const double h = 0.5 * params.alpha();
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  const QuadPowers pw(params);
  const Quad U1 = u1, U2 = u2, V1 = v1, V2 = v2;
  const Quad S = U1 + U2 + V1 + V2;
  const Quad half(0.5);
  const QuadC q = pw(1.0);
  TrigEpsilonForms out;
  out.phi43 = to_cplx(direct_quad(params.M(), j, params));
  const std::array<QuadC, 3> num{-pw(U1 - U2), pw(Quad(-j)), pw(S + j)};
  const std::array<QuadC, 2> den{pw(U1 + V1 + half), -pw(U1 + V2 + half)};
  out.phi32 = to_cplx(hypergeometric_t<QuadC>(num, den, q, q, j));
  out.pochhammer = to_cplx(pochhammer_t(QuadC(-pw(U2 + V1 + half)), q, j) *
                           pochhammer_t(pw(-U2 - V2 + half - j), q, j) /
                           (pochhammer_t(pw(U1 + V1 + half), q, j) *
                            pochhammer_t(QuadC(-pw(-U1 - V2 + half - j)), q, j)));
  double t = j % 2 == 0 ? 1.0 : -1.0;
  for (int l = 0; l < j; ++l) {
    t *= std::sin(h * (u2 + v2 + 0.5 + l)) / std::sin(h * (u1 + v1 + 0.5 + l)) *
         std::cos(h * (u2 + v1 + 0.5 + l)) / std::cos(h * (u1 + v2 + 0.5 + l));
  }
  out.trig = t;
  return out;
}

namespace {

std::vector<double> trig_delta(const CouplingParams& params) {
  const int M = params.M();
  const double al = params.alpha();
  const double h = 0.5 * al;
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  std::vector<double> out(M + 1);
  double prod = 1.0;
  for (int k = 0; k <= M; ++k) {
    if (k > 0) {
      const int l = k;
      prod *= std::sin(h * (M + 1 - l)) * std::sin(h * (u2 - v2 + M + 0.5 - l)) /
              (std::sin(h * l) * std::sin(h * (u1 - v1 - 0.5 + l))) *
              std::cos(h * (u2 - u1 + M + 1 - l)) * std::cos(h * (u2 - v1 + M + 0.5 - l)) /
              (std::cos(h * (u1 - u2 + l)) * std::cos(h * (u1 - v2 - 0.5 + l)));
    }
    out[k] = std::sin(al * (u1 + k)) / std::sin(al * u1) * prod;
  }
  return out;
}

std::vector<double> trig_delta_hat(const CouplingParams& params) {
  const int M = params.M();
  const double h = 0.5 * params.alpha();
  const double u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  const double S = params.u(1) + u2 + v1 + v2;
  std::vector<double> out(M + 1);
  double prod = 1.0;
  for (int j = 0; j <= M; ++j) {
    if (j > 0) {
      const int l = j;
      prod *= std::sin(h * (M + 1 - l)) * std::sin(h * (u2 - v2 + M + 0.5 - l)) /
              (std::sin(h * l) * std::sin(h * (u2 + v2 - 0.5 + l))) *
              std::cos(h * (-v1 - v2 + M + 1 - l)) * std::cos(h * (u2 - v1 + M + 0.5 - l)) /
              (std::cos(h * (v1 + v2 + l)) * std::cos(h * (u2 + v1 - 0.5 + l)));
    }
    out[j] = std::sin(h * (S + 2 * j)) / std::sin(h * S) * prod;
  }
  return out;
}

double trig_total_weight(const CouplingParams& params) {
  const double h = 0.5 * params.alpha();
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  const double S = u1 + u2 + v1 + v2;
  double out = 1.0;
  for (int l = 1; l <= params.M(); ++l) {
    out *= std::sin(h * (2 * u1 + l)) * std::sin(h * (S + l)) /
           (std::sin(h * (u1 - v1 - 0.5 + l)) * std::sin(h * (u2 + v2 - 0.5 + l)));
  }
  return out;
}

}  // namespace

TrigTables trig_tables(const CouplingParams& params, double eps_tol, double norm_tol) {
  const int M = params.M();
  const double h = 0.5 * params.alpha();
  const double u1 = params.u(1), u2 = params.u(2), v1 = params.v(1), v2 = params.v(2);
  const double S = u1 + u2 + v1 + v2;

  TrigTables t;
  t.spectrum = trig_spectrum(params);
  t.delta = trig_delta(params);
  t.delta_hat = trig_delta_hat(params);
  t.N0 = trig_total_weight(params);

  double sum_delta = 0.0, sum_hat = 0.0;
  for (int k = 0; k <= M; ++k) {
    sum_delta += t.delta[k];
    sum_hat += t.delta_hat[k];
  }
  if (rel_diff(sum_delta, t.N0) > norm_tol || rel_diff(sum_hat, t.N0) > norm_tol) {
    throw Error(ErrorKind::FormMismatch, "N_t0 = " + fmt(t.N0) + " but sum Delta_t = " +
                                             fmt(sum_delta) + ", sum hat Delta_t = " +
                                             fmt(sum_hat));
  }

  const CoefficientSet tc = trig_lattice_coeffs(params);
  double a_prod = 1.0;
  for (int k = 1; k <= M; ++k) a_prod *= tc.a[k];
  // prod_k of the trigonometric prefactor in the second norm display.
  double pref = 1.0;
  for (int k = 1; k <= M; ++k) {
    pref *= std::sin(h * (u1 + k)) / std::sin(h * k) * std::sin(h * (u1 - 0.5 + k)) /
            std::sin(h * (u1 - v1 - 0.5 + k)) * std::cos(h * (u1 + k)) /
            std::cos(h * (u1 - u2 + k)) * std::cos(h * (u1 - 0.5 + k)) /
            std::cos(h * (u1 - v2 - 0.5 + k));
  }

  t.eps.resize(M + 1);
  t.norms.resize(M + 1);
  t.norms_trig.resize(M + 1);
  t.norms_dual.resize(M + 1);
  for (int j = 0; j <= M; ++j) {
    const auto forms = trig_epsilon_inverse(j, params);
    if (rel_diff(forms.phi32, cplx(forms.trig)) > eps_tol ||
        std::fabs(forms.phi32.imag()) > kImaginaryLeakTol * std::max(1.0, std::abs(forms.phi32))) {
      throw Error(ErrorKind::FormMismatch, "eps_t" + std::to_string(j) + ": 3phi2 and product " +
                                               "forms differ (" + fmt(forms.phi32.real()) +
                                               " vs " + fmt(forms.trig) + ")");
    }
    t.eps[j] = 1.0 / forms.trig;

    const double Ej = t.spectrum.values[j];
    double gap = 1.0, gap_cos = 1.0;
    for (int l = 0; l <= M; ++l) {
      if (l == j) continue;
      gap *= Ej - t.spectrum.values[l];
      gap_cos *= 2.0 * std::cos(h * (2 * j + S)) - 2.0 * std::cos(h * (2 * l + S));
    }
    const double n1 = forms.trig * gap / a_prod;
    const double n2 = forms.trig * pref * gap_cos;
    const double n3 = t.N0 / t.delta_hat[j];
    if (rel_diff(n1, n2) > norm_tol || rel_diff(n1, n3) > norm_tol) {
      throw Error(ErrorKind::FormMismatch, "N_t" + std::to_string(j) + " forms differ: " +
                                               fmt(n1) + ", " + fmt(n2) + ", " + fmt(n3));
    }
    t.norms[j] = n1;
    t.norms_trig[j] = n2;
    t.norms_dual[j] = n3;
  }
  return t;
}

TrigRacahMatrix trig_racah_matrix(const CouplingParams& params, const TrigTables& tables) {
  const int M = params.M();
  const int n = M + 1;
  const auto qp = QRacahParams::from(params);
  TrigRacahMatrix out;
  out.F.resize(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) out.F(k, j) = qracah_poly(k, j, qp);
  }
  out.F_inv.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      out.F_inv(j, k) = tables.delta_hat[j] * out.F(k, j) * tables.delta[k] / tables.N0;
    }
  }
  out.det_elimination = out.F.partialPivLu().determinant();
  double wprod = 1.0;
  for (int l = 0; l < n; ++l) wprod *= tables.delta[l] * tables.delta_hat[l];
  out.det_closed = reversal_sign(M) * std::pow(tables.N0, 0.5 * n) / std::sqrt(wprod);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> default_p_sweep() { return {1e-2, 5e-3, 2.5e-3, 1.25e-3}; }

namespace {

std::vector<ConvergenceRow> convergence_at(const RawParams& base, double p, double series_tol,
                                           const TrigSpectrum& ts,
                                           const Eigen::MatrixXd& ft) {
  RawParams raw = base;
  raw.p = p;
  const auto params = validate(raw);
  const auto ctx = params.context(series_tol);
  const HeunMatrix H = build(params, ctx);
  const Spectrum spec = eigenvalues(H);
  const int n = H.size();
  std::vector<ConvergenceRow> rows;
  for (int j = 0; j < n; ++j) {
    const auto f = eigenvector(H.coefficients(), spec[j]);
    double df = 0.0;
    for (int k = 0; k < n; ++k) df = std::max(df, std::fabs(f[k] - ft(k, j)));
    rows.push_back({p, j, std::fabs(spec[j] - ts.values[j]), df});
  }
  return rows;
}

}  // namespace

ConvergenceReport trig_limit_convergence(const RawParams& base, const std::vector<double>& p_seq,
                                         double series_tol) {
  if (p_seq.empty()) throw Error(ErrorKind::InvalidContext, "empty p sequence");
  for (std::size_t i = 0; i < p_seq.size(); ++i) {
    if (!(p_seq[i] > 0.0 && p_seq[i] < 1.0) || (i > 0 && !(p_seq[i] < p_seq[i - 1]))) {
      throw Error(ErrorKind::InvalidContext,
                  "p sequence must be strictly decreasing inside (0, 1)");
    }
  }
  RawParams trig_raw = base;
  trig_raw.p = 0.0;
  const auto trig_params = validate(trig_raw);
  const TrigSpectrum ts = trig_spectrum(trig_params);
  const auto qp = QRacahParams::from(trig_params);
  const int n = trig_params.M() + 1;
  Eigen::MatrixXd ft(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) ft(k, j) = qracah_poly(k, j, qp);
  }

  // Each p is independent; results are merged in the order given.
  std::vector<std::future<std::vector<ConvergenceRow>>> jobs;
  jobs.reserve(p_seq.size());
  for (double p : p_seq) {
    jobs.push_back(std::async(std::launch::async, convergence_at, std::cref(base), p, series_tol,
                              std::cref(ts), std::cref(ft)));
  }
  ConvergenceReport report;
  for (auto& job : jobs) {
    auto rows = job.get();
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }

  for (std::size_t i = 1; i < p_seq.size() && report.converged; ++i) {
    for (int j = 0; j < n && report.converged; ++j) {
      const auto& prev = report.rows[(i - 1) * n + j];
      const auto& cur = report.rows[i * n + j];
      const std::pair<const char*, std::pair<double, double>> checks[] = {
          {"|dE|", {prev.eigenvalue_dev, cur.eigenvalue_dev}},
          {"max|df|", {prev.function_dev, cur.function_dev}}};
      for (const auto& [name, devs] : checks) {
        if (!(devs.second <= kMaxDecayRatio * devs.first)) {
          report.converged = false;
          report.failure = std::string(name) + " at j = " + std::to_string(j) + ", p = " +
                           fmt(cur.p) + ": " + fmt(devs.second) + " after " + fmt(devs.first) +
                           " at p = " + fmt(prev.p);
          break;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

double lame_alpha(double u, int M) { return 2.0 * std::numbers::pi / (2.0 * u + M); }

ThetaContext lame_context(double u, int M, double p, double tol) {
  return ThetaContext(p, lame_alpha(u, M), tol);
}

RawParams lame_params(double u, int M, double p) {
  RawParams raw;
  raw.u = {u, u, u, u};
  raw.v = {0.0, 0.0, 0.0, 0.0};
  raw.u_virtual = 0.5;
  raw.M = M;
  raw.p = p;
  return raw;
}

HeunMatrix lame_matrix(double u, int M, const ThetaContext& ctx, double match_tol) {
  if (!(u > 0.0) || M < 0) throw Error(ErrorKind::DomainViolation, "Lame slice needs u > 0, M >= 0");
  const double aL = lame_alpha(u, M);
  if (std::fabs(ctx.alpha() - aL) > 1e-14 * aL) {
    throw Error(ErrorKind::InvalidContext,
                "Lame context must carry alpha = 2 pi / (2u + M) = " + fmt(aL));
  }
  CoefficientSet cs;
  cs.a.assign(M + 1, 0.0);
  cs.a_tilde.assign(M + 1, 0.0);
  cs.b.assign(M + 1, 0.0);
  for (int k = 1; k <= M; ++k) {
    cs.a[k] = scaled_theta(1, k, ctx) / scaled_theta(1, u + k, ctx);
    cs.a_tilde[k] = cs.a[k];
  }
  HeunMatrix L(cs);

  const auto params = validate(lame_params(u, M, ctx.p()));
  const HeunMatrix G = build(params, params.context(ctx.tol()));
  for (int k = 1; k <= M; ++k) {
    const double ea = rel_diff(G.coefficients().a[k], cs.a[k]);
    const double et = rel_diff(G.coefficients().a_tilde[k], cs.a_tilde[k]);
    if (ea > match_tol || et > match_tol) {
      throw Error(ErrorKind::FormMismatch, "Lame display and general pipeline differ at k = " +
                                               std::to_string(k) + " (" + fmt(std::max(ea, et)) +
                                               ")");
    }
  }
  for (int k = 0; k <= M; ++k) {
    if (G.diag(k) != 0.0) {
      throw Error(ErrorKind::FormMismatch, "general diagonal on the Lame slice is " +
                                               fmt(G.diag(k)) + " at k = " + std::to_string(k));
    }
  }
  return L;
}

}  // namespace ellracah
