#include <doctest.h>

#include <cmath>
#include <cstring>

#include "gg/gradcheck.hpp"
#include "gg/ops.hpp"

using namespace gg;

namespace {

Tensor rand_t(Rng& rng, std::vector<int> shape, bool grad = true) {
  return Tensor::randn(std::move(shape), rng, 1.0, grad);
}

// Scalar objective that exercises an op output against fixed weights.
Tensor weighted_sum(const Tensor& y, const Tensor& w) {
  return sum_all(mul(y, w));
}

}  // namespace

TEST_SUITE_BEGIN("tensor_ops");

TEST_CASE("matmul of all-ones 2x3 and 3x2 gives 3s") {
  Tensor a = Tensor::full({2, 3}, 1.0);
  Tensor b = Tensor::full({3, 2}, 1.0);
  Tensor c = matmul(a, b);
  REQUIRE(c.shape() == std::vector<int>{2, 2});
  for (size_t i = 0; i < c.size(); ++i) CHECK(c.data()[i] == doctest::Approx(3.0));
}

TEST_CASE("softmax of zeros is uniform") {
  Tensor y = softmax_rows(Tensor::zeros({1, 3}));
  for (int i = 0; i < 3; ++i)
    CHECK(y.data()[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("layer_norm of a constant row is zero") {
  Tensor y = layer_norm(Tensor::full({2, 8}, 4.2));
  for (size_t i = 0; i < y.size(); ++i) CHECK(y.data()[i] == 0.0);
}

TEST_CASE("shape mismatch names the op and both shapes") {
  Tensor a = Tensor::zeros({2, 3}), b = Tensor::zeros({3, 3});
  CHECK_THROWS_WITH_AS(add(a, b), doctest::Contains("add"), ContractError);
  CHECK_THROWS_AS(matmul(a, Tensor::zeros({2, 2})), ContractError);
}

TEST_CASE("backward: loss=sum(x^2) gives 2x") {
  Tensor x = Tensor::from_data({2}, {1.0, 2.0}, true);
  Tape tape;
  {
    Tape::Scope scope(tape);
    Tensor loss = sum_all(mul(x, x));
    tape.backward(loss);
  }
  REQUIRE(x.has_grad());
  CHECK(x.grad()[0] == doctest::Approx(2.0));
  CHECK(x.grad()[1] == doctest::Approx(4.0));
}

TEST_CASE("backward: matmul gradient follows the B-transpose rule") {
  Rng rng(5);
  Tensor a = rand_t(rng, {2, 2});
  Tensor b = rand_t(rng, {2, 2});
  Tape tape;
  {
    Tape::Scope scope(tape);
    tape.backward(sum_all(matmul(a, b)));
  }
  // d/dA sum(A*B) = ones * B^T
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double expect = b.data()[j * 2 + 0] + b.data()[j * 2 + 1];
      CHECK(a.grad()[i * 2 + j] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("backward requires a scalar loss") {
  Tensor x = Tensor::zeros({2, 2}, true);
  Tape tape;
  Tape::Scope scope(tape);
  Tensor y = add(x, x);
  CHECK_THROWS_AS(tape.backward(y), ContractError);
}

TEST_CASE("gradients accumulate across fan-out") {
  Tensor x = Tensor::from_data({2}, {1.0, -1.0}, true);
  Tape tape;
  {
    Tape::Scope scope(tape);
    Tensor y = add(x, x);  // dy/dx = 2
    tape.backward(sum_all(y));
  }
  CHECK(x.grad()[0] == doctest::Approx(2.0));
  CHECK(x.grad()[1] == doctest::Approx(2.0));
}

TEST_CASE("finite_diff_check: linear f is exact") {
  Rng rng(7);
  Tensor x = rand_t(rng, {3, 4});
  const double err = finite_diff_check([&] { return sum_all(x); }, x);
  CHECK(err < 1e-9);
}

TEST_CASE("gradient check: every primitive matches central differences") {
  Rng rng(42);
  const double tol = 1e-4;

  SUBCASE("add/sub/mul/scale/add_scalar") {
    Tensor a = rand_t(rng, {3, 4}), b = rand_t(rng, {3, 4});
    Tensor w = rand_t(rng, {3, 4}, false);
    CHECK(finite_diff_check([&] { return weighted_sum(add(a, b), w); },
                            {a, b}) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(sub(a, b), w); },
                            {a, b}) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(mul(a, b), w); },
                            {a, b}) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(scale(a, -1.3), w); },
                            a) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(add_scalar(a, 0.7), w); },
                            a) < tol);
  }
  SUBCASE("sqrt/silu/gelu") {
    Tensor w = rand_t(rng, {2, 5}, false);
    Tensor pos = rand_t(rng, {2, 5});
    for (size_t i = 0; i < pos.size(); ++i)
      pos.mutable_data()[i] = std::abs(pos.data()[i]) + 0.5;
    CHECK(finite_diff_check([&] { return weighted_sum(sqrt_elem(pos), w); },
                            pos) < tol);
    Tensor x = rand_t(rng, {2, 5});
    CHECK(finite_diff_check([&] { return weighted_sum(silu(x), w); }, x) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(gelu(x), w); }, x) < tol);
  }
  SUBCASE("matmul/transpose/reshape") {
    Tensor a = rand_t(rng, {3, 4}), b = rand_t(rng, {4, 2});
    Tensor w = rand_t(rng, {3, 2}, false);
    CHECK(finite_diff_check([&] { return weighted_sum(matmul(a, b), w); },
                            {a, b}) < tol);
    Tensor wt = rand_t(rng, {4, 3}, false);
    CHECK(finite_diff_check([&] { return weighted_sum(transpose(a), wt); },
                            a) < tol);
    Tensor wr = rand_t(rng, {12}, false);
    CHECK(finite_diff_check(
              [&] { return weighted_sum(reshape(a, {12}), wr); }, a) < tol);
  }
  SUBCASE("concat/slice") {
    Tensor a = rand_t(rng, {2, 3}), b = rand_t(rng, {4, 3});
    Tensor w = rand_t(rng, {6, 3}, false);
    CHECK(finite_diff_check(
              [&] { return weighted_sum(concat_rows({a, b}), w); }, {a, b}) <
          tol);
    Tensor wc = rand_t(rng, {2, 7}, false);
    Tensor c = rand_t(rng, {2, 4});
    CHECK(finite_diff_check(
              [&] { return weighted_sum(concat_cols({a, c}), wc); }, {a, c}) <
          tol);
    Tensor big = rand_t(rng, {5, 6});
    Tensor ws = rand_t(rng, {2, 6}, false);
    CHECK(finite_diff_check(
              [&] { return weighted_sum(slice_rows(big, 1, 3), ws); }, big) <
          tol);
    Tensor wsc = rand_t(rng, {5, 3}, false);
    CHECK(finite_diff_check(
              [&] { return weighted_sum(slice_cols(big, 2, 5), wsc); }, big) <
          tol);
  }
  SUBCASE("broadcast ops") {
    Tensor a = rand_t(rng, {4, 3});
    Tensor v = rand_t(rng, {3});
    Tensor u = rand_t(rng, {4, 1});
    Tensor w = rand_t(rng, {4, 3}, false);
    CHECK(finite_diff_check([&] { return weighted_sum(add_rowvec(a, v), w); },
                            {a, v}) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(mul_rowvec(a, v), w); },
                            {a, v}) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(mul_colvec(a, u), w); },
                            {a, u}) < tol);
  }
  SUBCASE("reductions") {
    Tensor a = rand_t(rng, {3, 5});
    CHECK(finite_diff_check([&] { return sum_all(a); }, a) < tol);
    CHECK(finite_diff_check([&] { return mean_square(a); }, a) < tol);
    Tensor w = rand_t(rng, {3, 1}, false);
    CHECK(finite_diff_check([&] { return weighted_sum(sum_cols(a), w); }, a) <
          tol);
  }
  SUBCASE("normalizations and softmax") {
    Tensor a = rand_t(rng, {4, 6});
    Tensor w = rand_t(rng, {4, 6}, false);
    CHECK(finite_diff_check([&] { return weighted_sum(layer_norm(a), w); },
                            a) < tol);
    CHECK(finite_diff_check([&] { return weighted_sum(rms_norm(a), w); }, a) <
          tol);
    CHECK(finite_diff_check([&] { return weighted_sum(softmax_rows(a), w); },
                            a) < tol);
  }
  SUBCASE("embedding and rope") {
    Tensor table = rand_t(rng, {7, 4});
    std::vector<int> ids = {0, 3, 3, 6, 1};
    Tensor w = rand_t(rng, {5, 4}, false);
    CHECK(finite_diff_check(
              [&] { return weighted_sum(embed_lookup(table, ids), w); },
              table) < tol);
    Tensor x = rand_t(rng, {5, 4});
    std::vector<int> pos = {0, 1, 2, 3, 4};
    CHECK(finite_diff_check(
              [&] { return weighted_sum(rope(x, pos, 10000.0), w); }, x) <
          tol);
  }
}

TEST_CASE("linearity: grad(a*f + b*g) == a*grad(f) + b*grad(g)") {
  Rng rng(99);
  Tensor x = rand_t(rng, {3, 3});
  Tensor w = rand_t(rng, {3, 3}, false);
  const double ca = 1.7, cb = -0.4;

  auto f = [&] { return mean_square(matmul(x, w)); };
  auto g = [&] { return sum_all(silu(x)); };

  auto grad_of = [&](const std::function<Tensor()>& fn) {
    x.clear_grad();
    Tape tape;
    Tape::Scope scope(tape);
    tape.backward(fn());
    return x.grad();
  };

  auto gf = grad_of(f);
  auto gg_ = grad_of(g);
  auto gboth = grad_of(
      [&] { return add(scale(f(), ca), scale(g(), cb)); });
  for (size_t i = 0; i < gboth.size(); ++i)
    CHECK(gboth[i] ==
          doctest::Approx(ca * gf[i] + cb * gg_[i]).epsilon(1e-10));
}

TEST_CASE("determinism: identical runs are bit-identical") {
  auto run = [] {
    Rng rng(123);
    Tensor x = Tensor::randn({4, 4}, rng, 1.0, true);
    Tensor w = Tensor::randn({4, 4}, rng);
    Tape tape;
    Tape::Scope scope(tape);
    Tensor loss = mean_square(gelu(matmul(layer_norm(x), w)));
    tape.backward(loss);
    std::vector<double> out = {loss.item()};
    out.insert(out.end(), x.grad().begin(), x.grad().end());
    return out;
  };
  auto a = run(), b = run();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(std::memcmp(&a[i], &b[i], 8) == 0);
}

TEST_CASE("forward values stay finite on wild inputs") {
  Rng rng(321);
  Tensor x = Tensor::randn({6, 8}, rng, 10.0);
  Tensor y = softmax_rows(rms_norm(layer_norm(x)));
  for (size_t i = 0; i < y.size(); ++i) CHECK(std::isfinite(y.data()[i]));
}

TEST_SUITE_END();
