#pragma once

#include <map>
#include <string>
#include <vector>

#include "gg/optim.hpp"
#include "gg/tensor.hpp"

namespace gg {

// Checkpoint file: "GGCK" magic, u64 JSON-header length, the header, then a
// flat little-endian f64 section. The header lists {name, shape, offset}
// per tensor (offset in bytes from the start of the data section) plus an
// arbitrary "meta" object used for model/audio config and optimizer step.
struct Checkpoint {
  std::map<std::string, Tensor> tensors;     // name -> tensor
  std::vector<std::string> order;            // file order
  std::string meta_json = "{}";

  void put(const std::string& name, const Tensor& t);
  const Tensor& get(const std::string& name) const;
  bool contains(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Convenience bridges for a ParamStore (params keep their names) and
// optimizer moments (stored under "opt.m." / "opt.v." prefixes).
void checkpoint_from_params(Checkpoint& ckpt, const ParamStore& params);
void params_from_checkpoint(const Checkpoint& ckpt, ParamStore& params);
void checkpoint_from_optimizer(Checkpoint& ckpt, const AdamW& opt);
bool optimizer_from_checkpoint(const Checkpoint& ckpt, AdamW& opt);

}  // namespace gg
