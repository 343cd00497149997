#include "gg/optim.hpp"

#include <cmath>

namespace gg {

Tensor& ParamStore::add(const std::string& name, Tensor t) {
  require(!contains(name), "ParamStore: duplicate parameter '" + name + "'");
  t.set_requires_grad(true);
  order_.push_back(name);
  return params_[name] = std::move(t);
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = params_.find(name);
  require(it != params_.end(), "ParamStore: unknown parameter '" + name + "'");
  return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = params_.find(name);
  require(it != params_.end(), "ParamStore: unknown parameter '" + name + "'");
  return it->second;
}

bool ParamStore::contains(const std::string& name) const {
  return params_.count(name) != 0;
}

size_t ParamStore::num_scalars() const {
  size_t n = 0;
  for (const auto& [name, t] : params_) n += t.size();
  return n;
}

void ParamStore::zero_grads() {
  for (auto& [name, t] : params_) t.clear_grad();
}

std::vector<Tensor> ParamStore::tensors() const {
  std::vector<Tensor> out;
  for (const auto& name : order_) out.push_back(params_.at(name));
  return out;
}

void AdamW::step(ParamStore& params) {
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (const auto& name : params.names()) {
    Tensor& p = params.get(name);
    const size_t n = p.size();
    auto& m = m_[name];
    auto& v = v_[name];
    if (m.empty()) m.assign(n, 0.0);
    if (v.empty()) v.assign(n, 0.0);
    require(m.size() == n && v.size() == n,
            "AdamW: moment shape mismatch for '" + name + "'");
    static const std::vector<double> kEmpty;
    const std::vector<double>& g = p.has_grad() ? p.grad() : kEmpty;
    double* w = p.mutable_data();
    for (size_t i = 0; i < n; ++i) {
      const double gi = g.empty() ? 0.0 : g[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * gi;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * gi * gi;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) +
                         cfg_.weight_decay * w[i]);
    }
  }
}

}  // namespace gg
