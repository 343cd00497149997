#pragma once

#include "gg/ops.hpp"
#include "gg/skeleton.hpp"

namespace gg {

// Differentiable counterparts of the strict rot6d/FK used by the training
// losses. Norms are regularized (||.|| + 1e-8) so gradients stay finite on
// near-degenerate predictions; data loading keeps the strict variant.

// [N,6] -> [N,9] row-major rotation matrices (columns b1,b2,b3).
Tensor rot6d_to_rotmat(const Tensor& r6);

// rotmats [T, J*9] local rotations + trans [T,3] -> positions [T, J*3].
Tensor fk_positions(const Tensor& rotmats, const Tensor& trans,
                    const Skeleton& skeleton);

}  // namespace gg
