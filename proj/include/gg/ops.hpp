#pragma once

#include <vector>

#include "gg/tensor.hpp"

namespace gg {

// Differentiable primitives. Every op computes its forward value eagerly and,
// when a Tape is active and any input requires grad, records a backward node.
// Gradients accumulate additively across fan-out. Shape mismatches throw
// ContractError naming the op and both shapes.

// elementwise, same shape
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);
Tensor add_scalar(const Tensor& a, double c);
Tensor sqrt_elem(const Tensor& a);  // requires a >= 0 elementwise
Tensor silu(const Tensor& a);
Tensor gelu(const Tensor& a);

// linear algebra (2-d)
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// shape manipulation (data copied; tensors stay immutable)
Tensor reshape(const Tensor& a, std::vector<int> new_shape);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& a, int r0, int r1);  // half-open [r0, r1)
Tensor slice_cols(const Tensor& a, int c0, int c1);

// broadcasting over one axis of a 2-d tensor
Tensor add_rowvec(const Tensor& a, const Tensor& v);  // v: [cols]
Tensor mul_rowvec(const Tensor& a, const Tensor& v);  // v: [cols]
Tensor mul_colvec(const Tensor& a, const Tensor& u);  // u: [rows] or [rows,1]

// reductions
Tensor sum_all(const Tensor& a);              // -> [1]
Tensor sum_cols(const Tensor& a);             // [r,c] -> [r,1]
Tensor mean_all(const Tensor& a);             // -> [1]
Tensor mean_square(const Tensor& a);          // -> [1], sum(a*a)/numel

// row-wise normalizations (non-affine) and attention pieces
Tensor layer_norm(const Tensor& a, double eps = 1e-6);
Tensor rms_norm(const Tensor& a, double eps = 1e-6);
Tensor softmax_rows(const Tensor& a);

// table: [vocab, width]; ids in [0, vocab)
Tensor embed_lookup(const Tensor& table, const std::vector<int>& ids);

// rotary position embedding over pairs of columns; x: [T, d], d even
Tensor rope(const Tensor& x, const std::vector<int>& positions, double base);

// convenience: x[n,in] * w[in,out] + b[out]
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

}  // namespace gg
