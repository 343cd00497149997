#include "gg/tensor.hpp"

#include <cmath>

namespace gg {

size_t shape_numel(const std::vector<int>& shape) {
  size_t n = 1;
  for (int d : shape) {
    require(d >= 1, "tensor shape dims must be >= 1, got " + shape_str(shape));
    n *= static_cast<size_t>(d);
  }
  return n;
}

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
  auto impl = std::make_shared<Impl>();
  size_t n = shape_numel(shape);
  impl->shape = std::move(shape);
  impl->data.assign(n, 0.0);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::full(std::vector<int> shape, double value, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (auto& v : t.impl_->data) v = value;
  return t;
}

Tensor Tensor::from_data(std::vector<int> shape, std::vector<double> data,
                         bool requires_grad) {
  size_t n = shape_numel(shape);
  require(n == data.size(), "from_data: shape " + shape_str(shape) +
                                " does not match data length " +
                                std::to_string(data.size()));
  auto impl = std::make_shared<Impl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from_data({1}, {value}, requires_grad);
}

Tensor Tensor::randn(std::vector<int> shape, Rng& rng, double stddev,
                     bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (auto& v : t.impl_->data) v = stddev * normal(rng);
  return t;
}

int Tensor::rows() const {
  require(ndim() == 2, "rows(): tensor is not 2-d");
  return impl_->shape[0];
}

int Tensor::cols() const {
  require(ndim() == 2, "cols(): tensor is not 2-d");
  return impl_->shape[1];
}

double Tensor::item() const {
  require(impl_ && impl_->data.size() == 1,
          "item(): tensor is not a scalar");
  return impl_->data[0];
}

Tensor Tensor::detach() const {
  auto impl = std::make_shared<Impl>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  impl->requires_grad = false;
  return Tensor(std::move(impl));
}

const std::vector<double>& Tensor::grad() const {
  require(has_grad(), "grad(): no gradient present (run backward first)");
  return *impl_->grad;
}

std::vector<double>& Tensor::ensure_grad(const std::shared_ptr<Impl>& impl) {
  if (!impl->grad)
    impl->grad = std::make_unique<std::vector<double>>(impl->data.size(), 0.0);
  return *impl->grad;
}

namespace {
thread_local Tape* g_current_tape = nullptr;
}

Tape* Tape::current() { return g_current_tape; }

Tape::Scope::Scope(Tape& tape) : prev_(g_current_tape) {
  g_current_tape = &tape;
}

Tape::Scope::~Scope() { g_current_tape = prev_; }

void Tape::backward(const Tensor& loss) {
  require(loss.defined() && loss.size() == 1,
          "backward: loss must be a scalar tensor");
  require(loss.requires_grad(),
          "backward: loss does not depend on any requires_grad tensor");
  Tensor::ensure_grad(loss.impl())[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
}

}  // namespace gg
