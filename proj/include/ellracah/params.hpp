#pragma once

#include <array>
#include <string>
#include <vector>

#include "ellracah/theta.hpp"

namespace ellracah {

/// Unvalidated coupling parameters as read from flags or a config file.
/// Arrays are 0-based: u[0] is u_1.
struct RawParams {
  std::array<double, 4> u{1.0, 1.0, 0.0, 0.0};
  std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};
  double u_virtual = 0.3;
  int M = 0;
  double p = 0.1;

  bool operator==(const RawParams&) const = default;
};

/// Half-period permutation pi_r acting on indices s = 1..4:
/// pi_1 = id, pi_2 = (12)(34), pi_3 = (13)(24), pi_4 = (14)(23).
int half_period_perm(int r, int s);

/// Parameters with pi_r applied: u_s -> u_{pi_r(s)}, v_s -> v_{pi_r(s)}.
RawParams permute(const RawParams& raw, int r);

/// Lattice distance below which u or u+1 counts as a zero of [.]_1.
inline constexpr double kVirtualSingularTol = 1e-10;

/// Validated parameter set. Only obtainable through validate(), so holding
/// one means every domain inequality was checked and alpha is consistent
/// with the truncation alpha (u_1 + u_2 + M) = pi.
class CouplingParams {
 public:
  const RawParams& raw() const noexcept { return raw_; }
  /// 1-based accessors matching the usual u_1..u_4, v_1..v_4 labels.
  double u(int r) const { return raw_.u.at(r - 1); }
  double v(int r) const { return raw_.v.at(r - 1); }
  double u_virtual() const noexcept { return raw_.u_virtual; }
  int M() const noexcept { return raw_.M; }
  double p() const noexcept { return raw_.p; }
  double alpha() const noexcept { return alpha_; }

  ThetaContext context(double tol = kDefaultSeriesTol) const {
    return ThetaContext(raw_.p, alpha_, tol);
  }

 private:
  friend CouplingParams validate(const RawParams& raw);
  CouplingParams(RawParams raw, double alpha) : raw_(raw), alpha_(alpha) {}

  RawParams raw_;
  double alpha_;
};

/// Every violated domain constraint, in a fixed order. Empty means valid.
std::vector<std::string> domain_violations(const RawParams& raw);

/// Throws DomainError (kind DomainViolation or VirtualParamSingular).
CouplingParams validate(const RawParams& raw);

/// validate(permute(params.raw(), r)). May throw for r = 3, 4.
CouplingParams permute(const CouplingParams& params, int r);

}  // namespace ellracah
