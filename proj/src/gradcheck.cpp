#include "gg/gradcheck.hpp"

#include <cmath>
#include <limits>

namespace gg {

double finite_diff_check(const std::function<Tensor()>& f,
                         const std::vector<Tensor>& inputs, double eps) {
  require(eps > 0.0, "finite_diff_check: eps must be positive");

  // Analytic pass.
  std::vector<std::vector<double>> analytic;
  {
    Tape tape;
    Tape::Scope scope(tape);
    Tensor loss = f();
    require(loss.size() == 1, "finite_diff_check: f must return a scalar");
    if (!std::isfinite(loss.item()))
      return std::numeric_limits<double>::infinity();
    tape.backward(loss);
    for (const auto& x : inputs)
      analytic.push_back(x.has_grad() ? x.grad()
                                      : std::vector<double>(x.size(), 0.0));
    for (const auto& x : inputs) const_cast<Tensor&>(x).clear_grad();
  }

  // Central differences, no tape active.
  double worst = 0.0;
  for (size_t t = 0; t < inputs.size(); ++t) {
    Tensor x = inputs[t];
    double* data = x.mutable_data();
    for (size_t i = 0; i < x.size(); ++i) {
      const double saved = data[i];
      data[i] = saved + eps;
      const double fp = f().item();
      data[i] = saved - eps;
      const double fm = f().item();
      data[i] = saved;
      if (!std::isfinite(fp) || !std::isfinite(fm))
        return std::numeric_limits<double>::infinity();
      const double central = (fp - fm) / (2.0 * eps);
      const double a = analytic[t][i];
      const double rel =
          std::abs(a - central) / (std::abs(a) + std::abs(central) + 1e-12);
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

double finite_diff_check(const std::function<Tensor()>& f, const Tensor& input,
                         double eps) {
  return finite_diff_check(f, std::vector<Tensor>{input}, eps);
}

}  // namespace gg
