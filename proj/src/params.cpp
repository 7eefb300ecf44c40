#include "ellracah/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ellracah/error.hpp"

namespace ellracah {

namespace {

constexpr int kPerm[4][4] = {
    {1, 2, 3, 4},
    {2, 1, 4, 3},
    {3, 4, 1, 2},
    {4, 3, 2, 1},
};

double lattice_distance(double x, double period) {
  return std::fabs(x - period * std::round(x / period));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

int half_period_perm(int r, int s) {
  if (r < 1 || r > 4 || s < 1 || s > 4) {
    throw Error(ErrorKind::InvalidContext, "half-period permutation indices must be 1..4");
  }
  return kPerm[r - 1][s - 1];
}

RawParams permute(const RawParams& raw, int r) {
  RawParams out = raw;
  for (int s = 1; s <= 4; ++s) {
    out.u[s - 1] = raw.u[half_period_perm(r, s) - 1];
    out.v[s - 1] = raw.v[half_period_perm(r, s) - 1];
  }
  return out;
}

std::vector<std::string> domain_violations(const RawParams& raw) {
  std::vector<std::string> out;
  for (double x : raw.u) {
    if (!std::isfinite(x)) out.emplace_back("u entries must be finite");
  }
  for (double x : raw.v) {
    if (!std::isfinite(x)) out.emplace_back("v entries must be finite");
  }
  if (!std::isfinite(raw.u_virtual)) out.emplace_back("virtual parameter must be finite");
  if (!out.empty()) return out;

  if (!(raw.u[0] > 0.0)) out.push_back("u1>0 (u1 = " + fmt(raw.u[0]) + ")");
  if (!(raw.u[1] > 0.0)) out.push_back("u2>0 (u2 = " + fmt(raw.u[1]) + ")");
  if (!(std::fabs(raw.v[0]) < raw.u[0] + 0.5)) {
    out.push_back("|v1|<u1+1/2 (v1 = " + fmt(raw.v[0]) + ")");
  }
  if (!(std::fabs(raw.v[1]) < raw.u[1] + 0.5)) {
    out.push_back("|v2|<u2+1/2 (v2 = " + fmt(raw.v[1]) + ")");
  }
  if (raw.M < 0) out.push_back("M>=0 (M = " + std::to_string(raw.M) + ")");
  if (!(raw.p >= 0.0 && raw.p < 1.0)) out.push_back("0<=p<1 (p = " + fmt(raw.p) + ")");
  return out;
}

CouplingParams validate(const RawParams& raw) {
  auto violations = domain_violations(raw);
  if (!violations.empty()) throw DomainError(ErrorKind::DomainViolation, std::move(violations));

  const double alpha = std::numbers::pi / (raw.u[0] + raw.u[1] + raw.M);
  const double period = 2.0 * std::numbers::pi / alpha;
  std::vector<std::string> singular;
  if (lattice_distance(raw.u_virtual, period) < kVirtualSingularTol) {
    singular.push_back("u = 0 mod 2pi/alpha (u = " + fmt(raw.u_virtual) + ")");
  }
  if (lattice_distance(raw.u_virtual + 1.0, period) < kVirtualSingularTol) {
    singular.push_back("u+1 = 0 mod 2pi/alpha (u = " + fmt(raw.u_virtual) + ")");
  }
  if (!singular.empty()) throw DomainError(ErrorKind::VirtualParamSingular, std::move(singular));
  return CouplingParams(raw, alpha);
}

CouplingParams permute(const CouplingParams& params, int r) {
  return validate(permute(params.raw(), r));
}

}  // namespace ellracah
