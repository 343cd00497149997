#include "gg/losses.hpp"

#include <cmath>

namespace gg {
namespace {

constexpr double kMagEps = 1e-12;  // keeps the jerk norm differentiable at 0

Tensor mask_column(const std::vector<uint8_t>& mask, int from, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = mask[from + i] ? 1.0 : 0.0;
  return Tensor::from_data({count, 1}, std::move(v));
}

double mask_total(const Tensor& mask_col) {
  double s = 0.0;
  for (size_t i = 0; i < mask_col.size(); ++i) s += mask_col.data()[i];
  return s;
}

Tensor masked_frame_mse(const char* name, const Tensor& pred,
                        const Tensor& gt, const std::vector<uint8_t>& mask) {
  if (pred.shape() != gt.shape()) shape_error(name, pred.shape(), gt.shape());
  require(static_cast<int>(mask.size()) == pred.rows(),
          std::string(name) + ": mask length mismatch");
  Tensor mcol = mask_column(mask, 0, pred.rows());
  const double total = mask_total(mcol);
  require(total > 0.0, std::string(name) + ": all-zero validity mask");
  Tensor err = sub(pred, gt);
  Tensor per_frame = sum_cols(mul(err, err));
  Tensor masked = mul(per_frame, mcol);
  return scale(sum_all(masked), 1.0 / (total * pred.cols()));
}

// ||jerk||_2 per (frame, joint), scaled by fps^3: [T, J*3] -> [T-3, J]
Tensor jerk_magnitudes(const Tensor& positions, int joints, double fps) {
  const int t = positions.rows();
  Tensor p3 = slice_rows(positions, 3, t);
  Tensor p2 = slice_rows(positions, 2, t - 1);
  Tensor p1 = slice_rows(positions, 1, t - 2);
  Tensor p0 = slice_rows(positions, 0, t - 3);
  Tensor third = add(sub(p3, scale(p2, 3.0)), sub(scale(p1, 3.0), p0));
  Tensor scaled = scale(third, fps * fps * fps);
  Tensor sq = mul(scaled, scaled);
  Tensor grouped = reshape(sq, {(t - 3) * joints, 3});
  Tensor mag = sqrt_elem(add_scalar(sum_cols(grouped), kMagEps));
  return reshape(mag, {t - 3, joints});
}

}  // namespace

Tensor motion_positions(const Tensor& motion, const Skeleton& skeleton) {
  require(motion.ndim() == 2 && motion.cols() == kMotionDims,
          "motion_positions: bad motion shape " + shape_str(motion.shape()));
  const int t = motion.rows();
  const int j = skeleton.num_joints();
  Tensor rot = slice_cols(motion, 0, kRotDims);
  Tensor trans = slice_cols(motion, kRotDims, kMotionDims);
  Tensor rotmats = rot6d_to_rotmat(reshape(rot, {t * j, 6}));
  return fk_positions(reshape(rotmats, {t, j * 9}), trans, skeleton);
}

Tensor loss_rot6d(const Tensor& pred_rot, const Tensor& gt_rot,
                  const std::vector<uint8_t>& mask) {
  require(pred_rot.ndim() == 2 && pred_rot.cols() == kRotDims,
          "loss_rot6d: expected [T," + std::to_string(kRotDims) + "], got " +
              shape_str(pred_rot.shape()));
  return masked_frame_mse("loss_rot6d", pred_rot, gt_rot, mask);
}

Tensor loss_trans(const Tensor& pred_trans, const Tensor& gt_trans,
                  const std::vector<uint8_t>& mask) {
  require(pred_trans.ndim() == 2 && pred_trans.cols() == kTransDims,
          "loss_trans: expected [T," + std::to_string(kTransDims) +
              "], got " + shape_str(pred_trans.shape()));
  return masked_frame_mse("loss_trans", pred_trans, gt_trans, mask);
}

Tensor loss_jitter(const Tensor& pred_motion, const Tensor& gt_motion,
                   const Skeleton& skeleton, const std::vector<uint8_t>& mask,
                   double fps) {
  if (pred_motion.shape() != gt_motion.shape())
    shape_error("loss_jitter", pred_motion.shape(), gt_motion.shape());
  const int t = pred_motion.rows();
  require(t >= 4, "loss_jitter: need at least 4 frames, got " +
                      std::to_string(t));
  require(static_cast<int>(mask.size()) == t,
          "loss_jitter: mask length mismatch");
  const int j = skeleton.num_joints();

  // A jerk sample at t uses frames t..t+3; mask it out if any is invalid.
  std::vector<uint8_t> jerk_mask(t - 3);
  for (int i = 0; i < t - 3; ++i)
    jerk_mask[i] = mask[i] && mask[i + 1] && mask[i + 2] && mask[i + 3];
  Tensor mcol = mask_column(jerk_mask, 0, t - 3);
  const double total = mask_total(mcol);
  require(total > 0.0, "loss_jitter: no fully-valid jerk windows");

  Tensor mag_pred =
      jerk_magnitudes(motion_positions(pred_motion, skeleton), j, fps);
  Tensor mag_gt =
      jerk_magnitudes(motion_positions(gt_motion, skeleton), j, fps);
  Tensor diff = sub(mag_pred, mag_gt);
  Tensor per_frame = sum_cols(mul(diff, diff));
  Tensor masked = mul(per_frame, mcol);
  return scale(sum_all(masked), 1.0 / (total * j));
}

LossTerms total_loss(const Tensor& pred_motion, const Tensor& gt_motion,
                     const Skeleton& skeleton,
                     const std::vector<uint8_t>& mask, double fps,
                     const LossWeights& weights) {
  require(weights.rot6d >= 0 && weights.trans >= 0 && weights.jitter >= 0,
          "total_loss: loss weights must be nonnegative");
  LossTerms terms;
  terms.rot6d = loss_rot6d(slice_cols(pred_motion, 0, kRotDims),
                           slice_cols(gt_motion, 0, kRotDims), mask);
  terms.trans = loss_trans(slice_cols(pred_motion, kRotDims, kMotionDims),
                           slice_cols(gt_motion, kRotDims, kMotionDims), mask);
  terms.jitter = loss_jitter(pred_motion, gt_motion, skeleton, mask, fps);
  terms.total = add(add(scale(terms.rot6d, weights.rot6d),
                        scale(terms.trans, weights.trans)),
                    scale(terms.jitter, weights.jitter));
  return terms;
}

}  // namespace gg
