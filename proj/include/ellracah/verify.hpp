#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellracah/params.hpp"

namespace ellracah {

/// One machine-checked identity: worst residual over everything it covers.
/// Counting checks (sign patterns) report the number of violations and use
/// threshold 0.
struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Threshold resolution: a per-name entry wins, then the global value, then
/// the built-in default of the check.
struct Thresholds {
  std::optional<double> global;
  std::map<std::string, double> by_name;

  double resolve(const std::string& name, double fallback) const;
};

/// Every identity of the elliptic pipeline at the given parameters, followed
/// by the trigonometric and q-Racah identities at the same u, v and M with
/// p = 0. A centrosymmetric parameter set additionally gets the exact
/// eps_j = (-1)^j check.
std::vector<IdentityCheck> verify_identities(const CouplingParams& params,
                                             const Thresholds& thresholds = {},
                                             double series_tol = kDefaultSeriesTol);

/// (u_1, v_1) = (u_2, v_2) and (u_3, v_3) = (u_4, v_4).
bool is_centrosymmetric(const CouplingParams& params);

/// Checks on the Lame slice: zero diagonal, display vs general pipeline
/// off-diagonals, antisymmetric spectrum.
std::vector<IdentityCheck> verify_lame(double u, int M, double p,
                                       const Thresholds& thresholds = {},
                                       double series_tol = kDefaultSeriesTol);

/// Names of the failed checks, in report order.
std::vector<std::string> failed_checks(const std::vector<IdentityCheck>& checks);

}  // namespace ellracah
