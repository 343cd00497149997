#pragma once

#include <vector>

#include "gg/common.hpp"

namespace gg {

// DDPM-style noise schedule: linear betas, cumulative alpha-bar table shared
// by training-time noising and DDPM/DDIM sampling.
struct NoiseSchedule {
  int steps = 0;
  std::vector<double> beta;
  std::vector<double> alpha_bar;  // strictly decreasing, in (0,1)
};

NoiseSchedule build_schedule(int steps, double beta_start = 1e-4,
                             double beta_end = 2e-2);

}  // namespace gg
