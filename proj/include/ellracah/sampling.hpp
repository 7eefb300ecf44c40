#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ellracah/params.hpp"

namespace ellracah {

/// Ranges for random parameter draws. Draws stay inside the validated domain
/// and keep u_1, u_2 at least `half_gap` away from 1/2, where b_0 or b_M
/// passes through a removable singularity.
struct DrawRanges {
  int M_min = 0;
  int M_max = 16;
  double p_min = 0.0;
  double p_max = 0.3;
  double u_min = 0.15;
  double u_max = 2.0;
  double half_gap = 0.05;
};

/// std::mt19937_64 with the seed given; reals are formed from the top 53
/// bits, so a seed reproduces the same draws on every platform.
class DrawEngine {
 public:
  explicit DrawEngine(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive

 private:
  std::mt19937_64 gen_;
};

RawParams random_params(DrawEngine& engine, const DrawRanges& ranges = {});

/// `count` validated draws. Candidates rejected by validate() are skipped,
/// so the sequence depends only on the seed and the ranges.
std::vector<CouplingParams> random_draws(std::uint64_t seed, int count,
                                         const DrawRanges& ranges = {});

/// The desk-scale parameter set used for limit and CLI defaults:
/// u = (1.3, 0.9, 0.4, -0.2), v = (0.5, -0.3, 0.7, 0.1), u_virtual = 0.37, M = 5.
RawParams desk_params(double p = 0.1);

}  // namespace ellracah
