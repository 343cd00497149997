#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gg/common.hpp"
#include "gg/rng.hpp"

namespace gg {

// Dense row-major f64 tensor. Value semantics over a shared buffer; by
// convention a tensor's data is not mutated once it has entered a tape
// (mutable_data exists for parameter init, optimizer updates, and tests).
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
  static Tensor full(std::vector<int> shape, double value,
                     bool requires_grad = false);
  static Tensor from_data(std::vector<int> shape, std::vector<double> data,
                          bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor randn(std::vector<int> shape, Rng& rng, double stddev = 1.0,
                      bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const std::vector<int>& shape() const { return impl_->shape; }
  int dim(int i) const { return impl_->shape[i]; }
  int ndim() const { return static_cast<int>(impl_->shape.size()); }
  size_t size() const { return impl_->data.size(); }
  int rows() const;  // 2-d helpers
  int cols() const;

  const double* data() const { return impl_->data.data(); }
  double* mutable_data() { return impl_->data.data(); }
  const std::vector<double>& vec() const { return impl_->data; }
  double item() const;  // scalar tensors only

  bool requires_grad() const { return impl_ && impl_->requires_grad; }
  void set_requires_grad(bool v) { impl_->requires_grad = v; }
  Tensor detach() const;  // same buffer, grad-free

  bool has_grad() const { return impl_ && impl_->grad != nullptr; }
  const std::vector<double>& grad() const;
  void clear_grad() { if (impl_) impl_->grad.reset(); }

  bool same_impl(const Tensor& o) const { return impl_ == o.impl_; }

  struct Impl {
    std::vector<int> shape;
    std::vector<double> data;
    bool requires_grad = false;
    std::unique_ptr<std::vector<double>> grad;
  };
  const std::shared_ptr<Impl>& impl() const { return impl_; }
  static std::vector<double>& ensure_grad(const std::shared_ptr<Impl>& impl);

 private:
  explicit Tensor(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

size_t shape_numel(const std::vector<int>& shape);

// Define-by-run computation graph. Ops append one node per recorded
// operation, in execution order; backward() replays them in reverse.
// A tape is confined to one execution context (thread_local current).
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void record(std::function<void()> backward_fn) {
    nodes_.push_back(std::move(backward_fn));
  }
  size_t num_nodes() const { return nodes_.size(); }

  // Seeds d(loss)/d(loss)=1 and accumulates gradients into every
  // requires_grad tensor that participated. Loss must be scalar.
  void backward(const Tensor& loss);

  static Tape* current();

  // RAII activation: ops record onto the innermost active tape.
  class Scope {
   public:
    explicit Scope(Tape& tape);
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Tape* prev_;
  };

 private:
  std::vector<std::function<void()>> nodes_;
};

}  // namespace gg
