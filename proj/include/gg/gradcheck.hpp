#pragma once

#include <functional>
#include <vector>

#include "gg/tensor.hpp"

namespace gg {

// Central-difference gradient verification. `f` must be a deterministic map
// from the tensors' current values to a scalar; it is evaluated without any
// tape for the difference quotients, and once under a fresh tape for the
// analytic gradients. Returns the max over all coordinates of
//   |analytic - central| / (|analytic| + |central| + 1e-12).
// A non-finite f output is reported as +infinity.
double finite_diff_check(const std::function<Tensor()>& f,
                         const std::vector<Tensor>& inputs,
                         double eps = 1e-5);

double finite_diff_check(const std::function<Tensor()>& f, const Tensor& input,
                         double eps = 1e-5);

}  // namespace gg
