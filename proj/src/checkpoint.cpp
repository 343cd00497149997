#include "gg/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "gg/io_util.hpp"

namespace gg {

using nlohmann::json;

void Checkpoint::put(const std::string& name, const Tensor& t) {
  if (!tensors.count(name)) order.push_back(name);
  tensors[name] = t;
}

const Tensor& Checkpoint::get(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end())
    throw FormatError("checkpoint: missing tensor '" + name + "'");
  return it->second;
}

bool Checkpoint::contains(const std::string& name) const {
  return tensors.count(name) != 0;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  json header;
  header["params"] = json::array();
  uint64_t offset = 0;
  for (const auto& name : ckpt.order) {
    const Tensor& t = ckpt.tensors.at(name);
    json entry;
    entry["name"] = name;
    entry["shape"] = t.shape();
    entry["offset"] = offset;
    header["params"].push_back(entry);
    offset += t.size() * 8;
  }
  header["meta"] = json::parse(ckpt.meta_json);
  const std::string header_str = header.dump();

  atomic_write_file(path, [&](std::ostream& os) {
    os.write("GGCK", 4);
    le::put_u64(os, header_str.size());
    os.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
    for (const auto& name : ckpt.order) {
      const Tensor& t = ckpt.tensors.at(name);
      for (size_t i = 0; i < t.size(); ++i) le::put_f64(os, t.data()[i]);
    }
  });
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "GGCK")
    throw FormatError("'" + path + "' is not a checkpoint file");
  const uint64_t hlen = le::get_u64(is);
  std::string header_str(hlen, '\0');
  is.read(header_str.data(), static_cast<std::streamsize>(hlen));
  if (!is) throw FormatError("checkpoint header truncated in '" + path + "'");

  json header;
  try {
    header = json::parse(header_str);
  } catch (const json::exception& e) {
    throw FormatError("checkpoint header is not valid JSON: " +
                      std::string(e.what()));
  }

  Checkpoint ckpt;
  ckpt.meta_json = header.value("meta", json::object()).dump();
  const std::streampos data_start = is.tellg();
  for (const auto& entry : header.at("params")) {
    const std::string name = entry.at("name").get<std::string>();
    const std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    const uint64_t offset = entry.at("offset").get<uint64_t>();
    const size_t n = shape_numel(shape);
    is.seekg(data_start + static_cast<std::streamoff>(offset));
    std::vector<double> data(n);
    for (size_t i = 0; i < n; ++i) data[i] = le::get_f64(is);
    ckpt.put(name, Tensor::from_data(shape, std::move(data)));
  }
  return ckpt;
}

void checkpoint_from_params(Checkpoint& ckpt, const ParamStore& params) {
  for (const auto& name : params.names()) ckpt.put(name, params.get(name));
}

void params_from_checkpoint(const Checkpoint& ckpt, ParamStore& params) {
  for (const auto& name : params.names()) {
    const Tensor& src = ckpt.get(name);
    Tensor& dst = params.get(name);
    if (src.shape() != dst.shape())
      throw FormatError("checkpoint: shape mismatch for '" + name + "': " +
                        shape_str(src.shape()) + " vs expected " +
                        shape_str(dst.shape()));
    std::copy(src.data(), src.data() + src.size(), dst.mutable_data());
  }
}

void checkpoint_from_optimizer(Checkpoint& ckpt, const AdamW& opt) {
  AdamW& o = const_cast<AdamW&>(opt);
  for (const auto& [name, buf] : o.moments1())
    ckpt.put("opt.m." + name,
             Tensor::from_data({static_cast<int>(buf.size())}, buf));
  for (const auto& [name, buf] : o.moments2())
    ckpt.put("opt.v." + name,
             Tensor::from_data({static_cast<int>(buf.size())}, buf));
  json meta = json::parse(ckpt.meta_json);
  meta["opt_step"] = opt.step_count();
  ckpt.meta_json = meta.dump();
}

bool optimizer_from_checkpoint(const Checkpoint& ckpt, AdamW& opt) {
  json meta = json::parse(ckpt.meta_json);
  if (!meta.contains("opt_step")) return false;
  opt.set_step_count(meta["opt_step"].get<long>());
  for (const auto& name : ckpt.order) {
    if (name.rfind("opt.m.", 0) == 0)
      opt.moments1()[name.substr(6)] = ckpt.get(name).vec();
    else if (name.rfind("opt.v.", 0) == 0)
      opt.moments2()[name.substr(6)] = ckpt.get(name).vec();
  }
  return true;
}

}  // namespace gg
