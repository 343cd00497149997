#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gg/checkpoint.hpp"
#include "gg/ops.hpp"

using namespace gg;

TEST_SUITE_BEGIN("optim_checkpoint");

TEST_CASE("adamw: zero gradient and zero decay leave params unchanged") {
  ParamStore store;
  store.add("p", Tensor::from_data({3}, {1.0, -2.0, 0.5}));
  AdamW opt;
  opt.step(store);
  const Tensor& p = store.get("p");
  CHECK(p.data()[0] == 1.0);
  CHECK(p.data()[1] == -2.0);
  CHECK(p.data()[2] == 0.5);
}

TEST_CASE("adamw: first step with unit gradient moves by ~lr") {
  ParamStore store;
  Tensor& p = store.add("p", Tensor::scalar(0.0));
  Tensor::ensure_grad(p.impl())[0] = 1.0;
  AdamWConfig cfg;
  cfg.lr = 1e-2;
  AdamW opt(cfg);
  opt.step(store);
  // bias-corrected mhat/sqrt(vhat) = 1 at step 1
  CHECK(p.item() == doctest::Approx(-1e-2).epsilon(1e-6));
}

TEST_CASE("adamw: descends x^2 with strictly decreasing |x|") {
  ParamStore store;
  Tensor& x = store.add("x", Tensor::scalar(1.0));
  AdamWConfig cfg;
  cfg.lr = 1e-2;
  AdamW opt(cfg);
  double prev = std::abs(x.item());
  for (int i = 0; i < 100; ++i) {
    store.zero_grads();
    Tape tape;
    {
      Tape::Scope scope(tape);
      tape.backward(mul(x, x));
    }
    opt.step(store);
    const double cur = std::abs(x.item());
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("adamw: decoupled weight decay shrinks params without gradient") {
  ParamStore store;
  Tensor& p = store.add("p", Tensor::scalar(2.0));
  AdamWConfig cfg;
  cfg.lr = 0.1;
  cfg.weight_decay = 0.5;
  AdamW opt(cfg);
  opt.step(store);
  CHECK(p.item() == doctest::Approx(2.0 - 0.1 * 0.5 * 2.0));
}

TEST_CASE("checkpoint round trip preserves tensors and meta") {
  const std::string path = "/tmp/gg_test_ckpt.bin";
  Rng rng(5);
  Checkpoint out;
  out.put("alpha", Tensor::randn({3, 4}, rng));
  out.put("beta", Tensor::randn({7}, rng));
  out.meta_json = R"({"note":42})";
  save_checkpoint(path, out);

  Checkpoint in = load_checkpoint(path);
  REQUIRE(in.order == std::vector<std::string>{"alpha", "beta"});
  for (const auto& name : in.order) {
    const Tensor& a = out.get(name);
    const Tensor& b = in.get(name);
    REQUIRE(a.shape() == b.shape());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);
  }
  CHECK(in.meta_json.find("42") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint: shape mismatch on load is a format error") {
  const std::string path = "/tmp/gg_test_ckpt2.bin";
  Checkpoint out;
  out.put("w", Tensor::zeros({2, 2}));
  save_checkpoint(path, out);

  ParamStore store;
  store.add("w", Tensor::zeros({3, 2}));
  const Checkpoint in = load_checkpoint(path);
  CHECK_THROWS_AS(params_from_checkpoint(in, store), FormatError);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint: optimizer moments survive the round trip") {
  ParamStore store;
  Tensor& p = store.add("p", Tensor::scalar(1.0));
  Tensor::ensure_grad(p.impl())[0] = 0.3;
  AdamW opt;
  opt.step(store);

  Checkpoint ck;
  checkpoint_from_params(ck, store);
  checkpoint_from_optimizer(ck, opt);
  const std::string path = "/tmp/gg_test_ckpt3.bin";
  save_checkpoint(path, ck);

  AdamW restored;
  CHECK(optimizer_from_checkpoint(load_checkpoint(path), restored));
  CHECK(restored.step_count() == 1);
  CHECK(restored.moments1()["p"][0] == doctest::Approx(0.03));
  std::filesystem::remove(path);
}

TEST_SUITE_END();
