#pragma once

#include <span>
#include <vector>

#include "ellracah/matrix.hpp"

namespace ellracah {

/// Eigenvalues E_0 > E_1 > ... > E_M.
struct Spectrum {
  std::vector<double> values;

  int size() const noexcept { return static_cast<int>(values.size()); }
  double operator[](int j) const { return values.at(j); }
};

struct EigenSolveOptions {
  double bracket_rel_tol = 1e-13;  // bisection stops at this relative bracket width
  int newton_steps = 5;            // max refinement steps on p_{M+1}
  double min_separation = 1e-9;    // relative to the spectral spread
};

/// Number of eigenvalues of S strictly below x (Sturm count via the LDL^T
/// pivots of S - xI).
int sturm_count(const Symmetrized& S, double x);

/// Lower and upper Gershgorin bounds of S.
std::pair<double, double> gershgorin_bounds(const Symmetrized& S);

/// All eigenvalues of H by Sturm bisection on its symmetrization, each
/// refined with guarded Newton steps on p_{M+1}. Throws DegenerateSpectrum
/// when two neighbours are closer than min_separation * spread.
Spectrum eigenvalues(const HeunMatrix& H, const EigenSolveOptions& opts = {});

/// max_k |(H f)_k - E f_k| / ((1 + |E|) max_k |f_k|); 0 for the null vector.
double residual(const HeunMatrix& H, double E, std::span<const double> f);

}  // namespace ellracah
