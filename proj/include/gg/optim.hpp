#pragma once

#include <map>
#include <string>
#include <vector>

#include "gg/tensor.hpp"

namespace gg {

// Named parameter collection. Iteration order is insertion order so that
// checkpoints and optimizer state line up deterministically.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor t);
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const;

  const std::vector<std::string>& names() const { return order_; }
  size_t size() const { return order_.size(); }
  size_t num_scalars() const;

  void zero_grads();
  std::vector<Tensor> tensors() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, Tensor> params_;
};

struct AdamWConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

// Decoupled-weight-decay Adam. Missing gradients are treated as zero.
class AdamW {
 public:
  explicit AdamW(AdamWConfig cfg = {}) : cfg_(cfg) {}

  void step(ParamStore& params);
  long step_count() const { return step_; }

  AdamWConfig& config() { return cfg_; }
  const AdamWConfig& config() const { return cfg_; }

  // Moment buffers exposed for exact checkpoint/resume.
  std::map<std::string, std::vector<double>>& moments1() { return m_; }
  std::map<std::string, std::vector<double>>& moments2() { return v_; }
  void set_step_count(long s) { step_ = s; }

 private:
  AdamWConfig cfg_;
  long step_ = 0;
  std::map<std::string, std::vector<double>> m_;
  std::map<std::string, std::vector<double>> v_;
};

}  // namespace gg
