#include "ellracah/sampling.hpp"

#include <cmath>

#include "ellracah/error.hpp"

namespace ellracah {

double DrawEngine::uniform(double lo, double hi) {
  const double unit = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

int DrawEngine::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(gen_() % span);
}

namespace {

double draw_u(DrawEngine& e, const DrawRanges& r) {
  for (;;) {
    const double u = e.uniform(r.u_min, r.u_max);
    if (std::fabs(u - 0.5) >= r.half_gap) return u;
  }
}

}  // namespace

RawParams random_params(DrawEngine& e, const DrawRanges& r) {
  RawParams raw;
  raw.u[0] = draw_u(e, r);
  raw.u[1] = draw_u(e, r);
  raw.u[2] = e.uniform(-1.0, 1.0);
  raw.u[3] = e.uniform(-1.0, 1.0);
  raw.v[0] = 0.9 * e.uniform(-1.0, 1.0) * (raw.u[0] + 0.5);
  raw.v[1] = 0.9 * e.uniform(-1.0, 1.0) * (raw.u[1] + 0.5);
  raw.v[2] = e.uniform(-1.0, 1.0);
  raw.v[3] = e.uniform(-1.0, 1.0);
  raw.u_virtual = e.uniform(0.1, 0.9);
  raw.M = e.integer(r.M_min, r.M_max);
  raw.p = e.uniform(r.p_min, r.p_max);
  return raw;
}

std::vector<CouplingParams> random_draws(std::uint64_t seed, int count, const DrawRanges& ranges) {
  DrawEngine e(seed);
  std::vector<CouplingParams> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    try {
      out.push_back(validate(random_params(e, ranges)));
    } catch (const DomainError&) {
    }
  }
  return out;
}

RawParams desk_params(double p) {
  RawParams raw;
  raw.u = {1.3, 0.9, 0.4, -0.2};
  raw.v = {0.5, -0.3, 0.7, 0.1};
  raw.u_virtual = 0.37;
  raw.M = 5;
  raw.p = p;
  return raw;
}

}  // namespace ellracah
