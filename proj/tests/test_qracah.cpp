#include <doctest.h>

#include <cmath>

#include "ellracah/error.hpp"
#include "ellracah/qracah.hpp"
#include "ellracah/sampling.hpp"
#include "ellracah/spectra.hpp"
#include "support/oracle.hpp"

using namespace ellracah;

namespace {

double rel(cplx x, cplx y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }
double rel(double x, double y, double floor = 1e-300) {
  return std::fabs(x - y) / std::max(std::fabs(y), floor);
}

cplx hand_poch(cplx z, cplx q, int n) {
  cplx out = 1.0;
  for (int l = 0; l < n; ++l) out *= 1.0 - z * std::pow(q, l);
  return out;
}

// Sum of |terms| of a terminating series: the scale of its rounding error.
template <std::size_t R, std::size_t S>
double term_majorant(const std::array<cplx, R>& num, const std::array<cplx, S>& den, cplx q, cplx z,
                     int n) {
  double out = 0.0;
  for (int m = 0; m <= n; ++m) {
    cplx t = std::pow(z, m) / hand_poch(q, q, m);
    for (cplx x : num) t *= hand_poch(x, q, m);
    for (cplx x : den) t /= hand_poch(x, q, m);
    out += std::abs(t);
  }
  return out;
}

}  // namespace

TEST_CASE("q-Pochhammer: hand products") {
  const cplx q(0.6, 0.3), z(-0.4, 1.1);
  CHECK(qpochhammer(z, q, 0) == cplx(1.0));
  for (int n = 1; n <= 7; ++n) CHECK(rel(qpochhammer(z, q, n), hand_poch(z, q, n)) < 1e-14);
  CHECK_THROWS_AS(qpochhammer(z, q, -1), Error);
}

TEST_CASE("basic hypergeometric: q-Chu-Vandermonde and q-Saalschutz sums") {
  const cplx q(0.55, -0.35), b(0.3, 0.8), c(-0.7, 0.2);
  for (int n = 0; n <= 8; ++n) {
    const cplx qn = std::pow(q, -n);
    const std::array<cplx, 2> num{qn, b};
    const std::array<cplx, 1> den{c};
    const cplx want = hand_poch(c / b, q, n) / hand_poch(c, q, n) * std::pow(b, n);
    CHECK(std::abs(basic_hypergeometric(num, den, q, q, n) - want) <
          1e-14 * term_majorant(num, den, q, q, n));
  }
  const cplx a(0.9, -0.1);
  for (int n = 0; n <= 8; ++n) {
    const std::array<cplx, 3> num{std::pow(q, -n), a, b};
    const std::array<cplx, 2> den{c, a * b * std::pow(q, 1 - n) / c};
    const cplx want = hand_poch(c / a, q, n) * hand_poch(c / b, q, n) /
                      (hand_poch(c, q, n) * hand_poch(c / (a * b), q, n));
    CHECK(std::abs(basic_hypergeometric(num, den, q, q, n) - want) <
          1e-14 * term_majorant(num, den, q, q, n));
  }
}

TEST_CASE("basic hypergeometric: vanishing denominator before termination") {
  const cplx q(0.5, 0.5);
  const std::array<cplx, 1> num{std::pow(q, -3)};
  const std::array<cplx, 1> den{1.0 / q};  // 1 - q^{-1} q^1 = 0 at term 2
  try {
    basic_hypergeometric(num, den, q, q, 3);
    FAIL("expected a pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DenominatorPoleBeforeTermination);
  }
}

TEST_CASE("q-Racah parameters: truncation and duality") {
  const auto params = validate(desk_params(0.0));
  const auto qp = QRacahParams::from(params);
  CHECK(std::abs(qp.a() * std::pow(qp.q(), qp.M + 1) - 1.0) < 1e-13);
  for (int k = 0; k <= qp.M; ++k) {
    CHECK(std::abs(qracah_R(0, k, qp) - 1.0) < 1e-15);
    CHECK(std::abs(qracah_R(k, 0, qp) - 1.0) < 1e-15);
    for (int x = 0; x <= qp.M; ++x) {
      CHECK(rel(qracah_R(k, x, qp), qracah_R(x, k, qp.dual())) < 1e-12);
      CHECK(rel(qracah_R(k, x, qp), qracah_poly_direct(k, x, params)) < 1e-12);
      CHECK(qracah_recurrence_residual(k, x, qp) < 1e-12);
    }
  }
}

TEST_CASE("q-Racah limit: spectrum and R_k(X(j)) against the p = 0 oracle") {
  std::vector<RawParams> raws{desk_params(0.0)};
  DrawRanges small;
  small.M_max = 6;
  for (const auto& d : random_draws(41, 6, small)) {
    RawParams r = d.raw();
    r.p = 0.0;
    raws.push_back(r);
  }
  for (const auto& raw : raws) {
    const auto params = validate(raw);
    const auto ts = trig_spectrum(params);
    const auto P = oracle::from_raw(raw);
    const auto oc = oracle::coeffs(P);
    const auto H = oracle::heun_dense(oc);
    const auto ev = oracle::eigenvalues(H, 600);
    const auto qp = QRacahParams::from(params);
    CAPTURE(raw.M);
    for (int j = 0; j <= raw.M; ++j) {
      CHECK(std::fabs(ts.values[j] - oracle::d(ev[j])) < 1e-12);
      const auto f = oracle::normalized_poly(H, oc, ev[j]);
      for (int k = 0; k <= raw.M; ++k) {
        CHECK(rel(qracah_poly(k, j, qp), oracle::d(f[k]), 1e-12) < 1e-10);
      }
    }
  }
}

TEST_CASE("q-Racah limit: elliptic coefficients at p = 0 are the trig displays") {
  const auto params = validate(desk_params(0.0));
  const auto cs = lattice_coeffs(params, params.context());
  const auto tc = trig_lattice_coeffs(params);
  for (int k = 0; k <= params.M(); ++k) {
    CHECK(rel(tc.a[k], cs.a[k], 1e-300) < 1e-12);
    CHECK(rel(tc.a_tilde[k], cs.a_tilde[k], 1e-300) < 1e-12);
    CHECK(rel(tc.b[k], cs.b[k], 1.0) < 1e-12);
  }
}

TEST_CASE("trig tables: eps forms, weights and norms") {
  for (const auto& d : random_draws(43, 12)) {
    RawParams raw = d.raw();
    raw.p = 0.0;
    const auto params = validate(raw);
    const auto t = trig_tables(params);
    for (int j = 0; j <= raw.M; ++j) {
      const auto f = trig_epsilon_inverse(j, params);
      CHECK(rel(f.phi43, cplx(f.trig)) < 1e-10);
      CHECK(rel(f.phi32, cplx(f.trig)) < 1e-10);
      CHECK(rel(f.pochhammer, cplx(f.trig)) < 1e-10);
      CHECK((t.eps[j] > 0.0) == (j % 2 == 0));
    }
    const auto qp = QRacahParams::from(params);
    const cplx N0 = qracah_total_weight(qp);
    CHECK(rel(N0, cplx(t.N0)) < 1e-9);
    double sum = 0.0;
    for (double x : t.delta) sum += x;
    CHECK(rel(sum, t.N0) < 1e-9);
  }
}

TEST_CASE("trig Racah matrix: inverse and determinant") {
  const auto params = validate(desk_params(0.0));
  const auto t = trig_tables(params);
  const auto R = trig_racah_matrix(params, t);
  const int n = params.M() + 1;
  CHECK((R.F_inv * R.F - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(rel(R.det_closed, R.det_elimination) < 1e-7);
}

TEST_CASE("convergence: desk sweep decays monotonically") {
  const auto sweep = default_p_sweep();
  const auto report = trig_limit_convergence(desk_params(), sweep);
  CHECK(report.converged);
  REQUIRE(report.rows.size() == sweep.size() * 6);
  for (std::size_t i = 0; i < report.rows.size(); ++i) CHECK(report.rows[i].p == sweep[i / 6]);
  CHECK_THROWS_AS(trig_limit_convergence(desk_params(), {1e-3, 1e-2}), Error);
  CHECK_THROWS_AS(trig_limit_convergence(desk_params(), {}), Error);
}

TEST_CASE("convergence: deviations at p = 1e-6 match the oracle") {
  const RawParams raw = desk_params(1e-6);
  const auto rep = trig_limit_convergence(raw, {1e-6});
  RawParams t = raw;
  t.p = 0.0;
  const auto Pe = oracle::from_raw(raw), Pt = oracle::from_raw(t);
  const auto ce = oracle::coeffs(Pe), ct = oracle::coeffs(Pt);
  const auto He = oracle::heun_dense(ce), Ht = oracle::heun_dense(ct);
  const auto ee = oracle::eigenvalues(He, 600), et = oracle::eigenvalues(Ht, 600);
  for (const auto& row : rep.rows) {
    const double dE = oracle::d(abs(ee[row.j] - et[row.j]));
    const auto fe = oracle::normalized_poly(He, ce, ee[row.j]);
    const auto ft = oracle::normalized_poly(Ht, ct, et[row.j]);
    double df = 0.0;
    for (std::size_t k = 0; k < fe.size(); ++k) df = std::max(df, oracle::d(abs(fe[k] - ft[k])));
    CAPTURE(row.j);
    CHECK(std::fabs(row.eigenvalue_dev - dE) < 1e-13);
    CHECK(std::fabs(row.function_dev - df) < 1e-3 * df + 1e-12);
  }
}

TEST_CASE("Lame slice: display matrix, zero diagonal, antisymmetric spectrum") {
  const double u = 0.8;
  for (int M : {1, 4, 7}) {
    const double p = 0.15;
    const auto ctx = lame_context(u, M, p);
    const HeunMatrix H = lame_matrix(u, M, ctx);
    const Spectrum s = eigenvalues(H);
    for (int k = 0; k <= M; ++k) CHECK(H.diag(k) == 0.0);
    for (int j = 0; j <= M; ++j) CHECK(std::fabs(s[j] + s[M - j]) < 1e-12);

    // Oracle: [k]_1 / [u+k]_1 below, [M-k]_1 / [u+M-k]_1 above, at alpha_L.
    const oracle::Ctx oc{p, 2 * oracle::pi() / (2 * oracle::Real(u) + M)};
    oracle::Dense D(M + 1, std::vector<oracle::Real>(M + 1, oracle::Real(0)));
    for (int k = 0; k <= M; ++k) {
      if (k > 0) D[k][k - 1] = oracle::bracket(1, k, oc) / oracle::bracket(1, u + k, oc);
      if (k < M) D[k][k + 1] = oracle::bracket(1, M - k, oc) / oracle::bracket(1, u + M - k, oc);
    }
    const auto ev = oracle::eigenvalues(D, 800);
    for (int j = 0; j <= M; ++j) CHECK(std::fabs(s[j] - oracle::d(ev[j])) < 1e-12);
  }
  CHECK_THROWS_AS(lame_matrix(u, 4, ThetaContext(0.15, 0.3)), Error);
}
