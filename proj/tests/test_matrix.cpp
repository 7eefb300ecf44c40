#include <doctest.h>

#include "ellracah/matrix.hpp"
#include "ellracah/sampling.hpp"

using namespace ellracah;

TEST_CASE("matrix: bands follow a_k, b_k, a~_{M-k}") {
  const auto params = validate(desk_params());
  const HeunMatrix H = build(params, params.context());
  const auto& cs = H.coefficients();
  const int M = H.M();
  CHECK(H.size() == M + 1);
  for (int k = 0; k <= M; ++k) {
    CHECK(H.entry(k, k) == cs.b[k]);
    if (k > 0) CHECK(H.entry(k, k - 1) == cs.a[k]);
    if (k < M) CHECK(H.entry(k, k + 1) == cs.a_tilde[M - k]);
    for (int j = 0; j <= M; ++j)
      if (std::abs(j - k) > 1) CHECK(H.entry(k, j) == 0.0);
  }
}

TEST_CASE("matrix: J H J equals H at pi2-permuted parameters") {
  const auto params = validate(desk_params());
  const auto ctx = params.context();
  const HeunMatrix R = build(params, ctx).reflected();
  const HeunMatrix P = build(permute(params, 2), ctx);
  for (int i = 0; i < R.size(); ++i)
    for (int j = 0; j < R.size(); ++j)
      CHECK(R.entry(i, j) == doctest::Approx(P.entry(i, j)).epsilon(1e-12));
}

TEST_CASE("matrix: traces against a dense sum") {
  const auto params = validate(desk_params(0.3));
  const HeunMatrix H = build(params, params.context());
  double tr = 0.0, tr2 = 0.0;
  for (int i = 0; i < H.size(); ++i) {
    tr += H.entry(i, i);
    for (int j = 0; j < H.size(); ++j) tr2 += H.entry(i, j) * H.entry(j, i);
  }
  CHECK(H.trace() == doctest::Approx(tr).epsilon(1e-14));
  CHECK(H.trace_of_square() == doctest::Approx(tr2).epsilon(1e-14));
}

TEST_CASE("matrix: symmetrization") {
  const auto params = validate(desk_params());
  const HeunMatrix H = build(params, params.context());
  const Symmetrized S = symmetrize(H);
  for (int k = 1; k <= H.M(); ++k) {
    CHECK(S.off[k] * S.off[k] == doctest::Approx(H.sub(k) * H.sup(k - 1)).epsilon(1e-13));
    CHECK(S.off[k] > 0.0);
  }
}

TEST_CASE("matrix: non-positive off-diagonal is rejected") {
  CoefficientSet cs;
  cs.a = {0.0, -1.0};
  cs.a_tilde = {0.0, 1.0};
  cs.b = {0.0, 0.0};
  CHECK_THROWS(HeunMatrix(cs));
}
