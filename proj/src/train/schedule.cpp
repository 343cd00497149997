#include "gg/schedule.hpp"

namespace gg {

NoiseSchedule build_schedule(int steps, double beta_start, double beta_end) {
  require(steps >= 2, "build_schedule: need at least 2 steps");
  require(0.0 <= beta_start && beta_start <= beta_end && beta_end < 1.0,
          "build_schedule: betas must satisfy 0 <= start <= end < 1");
  NoiseSchedule s;
  s.steps = steps;
  s.beta.resize(steps);
  s.alpha_bar.resize(steps);
  double prod = 1.0;
  for (int t = 0; t < steps; ++t) {
    s.beta[t] = beta_start + (beta_end - beta_start) * t / (steps - 1);
    prod *= 1.0 - s.beta[t];
    s.alpha_bar[t] = prod;
  }
  return s;
}

}  // namespace gg
