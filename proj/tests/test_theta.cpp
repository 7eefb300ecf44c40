#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ellracah/error.hpp"
#include "ellracah/theta.hpp"
#include "support/oracle.hpp"

using namespace ellracah;

namespace {

double rel(double x, double y) { return std::fabs(x - y) / std::max(std::fabs(y), 1e-300); }

}  // namespace

TEST_CASE("theta: trivial values") {
  const ThetaContext ctx(0.3, 1.0);
  CHECK(theta(1, 0.0, ctx) == 0.0);
  CHECK(theta(3, 0.0, ThetaContext(0.0, 1.0)) == 1.0);
  CHECK(scaled_theta(1, 0.0, ctx) == 0.0);
  for (int r = 2; r <= 4; ++r) CHECK(scaled_theta(r, 0.0, ctx) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("theta: series against the 50-digit product oracle") {
  for (double p : {0.0, 1e-6, 0.05, 0.1, 0.3, 0.5, 0.8}) {
    const ThetaContext ctx(p, 1.0);
    for (double z : {-2.1, -0.4, 0.3, 0.77, 1.5, 3.0}) {
      for (int r = 1; r <= 4; ++r) {
        CAPTURE(p);
        CAPTURE(z);
        CAPTURE(r);
        const double want = oracle::d(oracle::theta(r, z, p));
        if (want == 0.0) {
          CHECK(theta(r, z, ctx) == 0.0);
          continue;
        }
        if (p <= 0.5) {
          CHECK(rel(theta(r, z, ctx), want) < 1e-13);
          CHECK(rel(theta_product(r, z, ctx), want) < 1e-13);
        } else {
          // Near p = 1 the value can be far smaller than its terms; measure
          // against the majorant of the absolute series instead.
          const double major = oracle::d(oracle::theta(2, 0.0, p) + oracle::theta(3, 0.0, p));
          CHECK(std::fabs(theta(r, z, ctx) - want) < 1e-14 * major);
          CHECK(std::fabs(theta_product(r, z, ctx) - want) < 1e-14 * major);
        }
      }
    }
  }
}

TEST_CASE("theta1'(0): differentiated series, oracle product and triple product") {
  for (double p : {1e-4, 0.1, 0.5}) {
    const ThetaContext ctx(p, 1.0);
    const double d = theta1_prime_zero(ctx);
    CHECK(rel(d, oracle::d(oracle::theta1_prime(p))) < 1e-13);
    const double triple = theta(2, 0.0, ctx) * theta(3, 0.0, ctx) * theta(4, 0.0, ctx);
    CHECK(rel(d, triple) < 1e-12);
  }
  // Leading term 2 p^{1/4} as p -> 0.
  const double p = 1e-12;
  CHECK(rel(theta1_prime_zero(ThetaContext(p, 1.0)), 2.0 * std::pow(p, 0.25)) < 1e-11);
}

TEST_CASE("scaled theta: oracle values and the p = 0 degeneration") {
  const double alpha = 0.61;
  for (double p : {0.0, 0.2}) {
    const ThetaContext ctx(p, alpha);
    const oracle::Ctx oc{p, alpha};
    for (double z : {-1.3, 0.37, 2.9}) {
      for (int r = 1; r <= 4; ++r) {
        CHECK(rel(scaled_theta(r, z, ctx), oracle::d(oracle::bracket(r, z, oc))) < 1e-13);
      }
    }
  }
  const ThetaContext t(0.0, alpha);
  for (double z : {0.4, 1.7}) {
    CHECK(rel(scaled_theta(1, z, t), std::sin(alpha * z / 2) / (alpha / 2)) < 1e-15);
    CHECK(rel(scaled_theta(2, z, t), std::cos(alpha * z / 2)) < 1e-15);
    CHECK(scaled_theta(3, z, t) == 1.0);
    CHECK(scaled_theta(4, z, t) == 1.0);
  }
}

TEST_CASE("scaled theta: parity, duplication, real period") {
  const double alpha = 0.83;
  const ThetaContext ctx(0.2, alpha);
  const double period = 2.0 * std::numbers::pi / alpha;
  for (double z : {0.37, -1.2, 2.6}) {
    CHECK(scaled_theta(1, -z, ctx) == doctest::Approx(-scaled_theta(1, z, ctx)).epsilon(1e-14));
    for (int r = 2; r <= 4; ++r)
      CHECK(scaled_theta(r, -z, ctx) == doctest::Approx(scaled_theta(r, z, ctx)).epsilon(1e-14));
    double prod = 2.0;
    for (int r = 1; r <= 4; ++r) prod *= scaled_theta(r, z, ctx);
    CHECK(rel(scaled_theta(1, 2.0 * z, ctx), prod) < 1e-12);
    for (int r = 1; r <= 4; ++r) {
      const double sign = r <= 2 ? -1.0 : 1.0;
      CHECK(rel(scaled_theta(r, z + period, ctx), sign * scaled_theta(r, z, ctx)) < 1e-12);
    }
  }
}

TEST_CASE("scaled theta: half-period shift holds up to a z-independent constant") {
  // [z + pi/alpha]_r / [-z]_{pi2(r)} is constant in z, and the constants of r
  // and pi2(r) are reciprocal. They are not 1: the normalizations of [.]_1
  // and [.]_2 differ.
  const double alpha = 0.7;
  const ThetaContext ctx(0.25, alpha);
  const double hp = std::numbers::pi / alpha;
  const int pi2[5] = {0, 2, 1, 4, 3};
  double kappa[5] = {};
  for (int r = 1; r <= 4; ++r) {
    kappa[r] = scaled_theta(r, 0.3 + hp, ctx) / scaled_theta(pi2[r], -0.3, ctx);
    for (double z : {-0.9, 0.8, 1.9}) {
      CHECK(rel(scaled_theta(r, z + hp, ctx) / scaled_theta(pi2[r], -z, ctx), kappa[r]) < 1e-12);
    }
  }
  for (int r = 1; r <= 4; ++r) CHECK(kappa[r] * kappa[pi2[r]] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theta context: invalid inputs") {
  CHECK_THROWS_AS(ThetaContext(1.0, 1.0), Error);
  CHECK_THROWS_AS(ThetaContext(-0.1, 1.0), Error);
  CHECK_THROWS_AS(ThetaContext(0.1, 0.0), Error);
  CHECK_THROWS_AS(ThetaContext(0.1, 1.0, 0.0), Error);
  CHECK_THROWS_AS(theta(5, 0.1, ThetaContext(0.1, 1.0)), Error);
}
