#include "gg/motion_ops.hpp"

#include <cmath>

namespace gg {
namespace {

constexpr double kNormEps = 1e-8;
constexpr double kTiny = 1e-30;

inline double dot3(const double* a, const double* b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline void cross3(const double* a, const double* b, double* out) {
  out[0] = a[1] * b[2] - a[2] * b[1];
  out[1] = a[2] * b[0] - a[0] * b[2];
  out[2] = a[0] * b[1] - a[1] * b[0];
}

}  // namespace

Tensor rot6d_to_rotmat(const Tensor& r6) {
  require(r6.ndim() == 2 && r6.cols() == 6,
          "rot6d_to_rotmat: input must be [N,6], got " +
              shape_str(r6.shape()));
  const int n = r6.rows();
  Tensor out = Tensor::zeros({n, 9});

  // Saved intermediates for the backward pass, per row.
  auto saved = std::make_shared<std::vector<double>>(
      static_cast<size_t>(n) * 11);  // b1(3) u2(3) b2(3) n1 n2

  for (int i = 0; i < n; ++i) {
    const double* x = r6.data() + static_cast<size_t>(i) * 6;
    const double* a1 = x;
    const double* a2 = x + 3;
    double* sv = saved->data() + static_cast<size_t>(i) * 11;
    double* b1 = sv;
    double* u2 = sv + 3;
    double* b2 = sv + 6;

    const double n1 = std::sqrt(dot3(a1, a1));
    const double s1 = 1.0 / (n1 + kNormEps);
    for (int k = 0; k < 3; ++k) b1[k] = a1[k] * s1;

    const double d = dot3(b1, a2);
    for (int k = 0; k < 3; ++k) u2[k] = a2[k] - d * b1[k];
    const double n2 = std::sqrt(dot3(u2, u2));
    const double s2 = 1.0 / (n2 + kNormEps);
    for (int k = 0; k < 3; ++k) b2[k] = u2[k] * s2;

    double b3[3];
    cross3(b1, b2, b3);

    sv[9] = n1;
    sv[10] = n2;

    double* r = out.mutable_data() + static_cast<size_t>(i) * 9;
    for (int k = 0; k < 3; ++k) {
      r[k * 3 + 0] = b1[k];
      r[k * 3 + 1] = b2[k];
      r[k * 3 + 2] = b3[k];
    }
  }

  if (Tape::current() && r6.requires_grad()) {
    out.set_requires_grad(true);
    Tape::current()->record([xi = r6.impl(), oi = out.impl(), saved, n] {
      if (!oi->grad) return;
      const auto& g = *oi->grad;
      auto& dst = Tensor::ensure_grad(xi);
      for (int i = 0; i < n; ++i) {
        const double* gr = g.data() + static_cast<size_t>(i) * 9;
        const double* sv = saved->data() + static_cast<size_t>(i) * 11;
        const double* b1 = sv;
        const double* u2 = sv + 3;
        const double* b2 = sv + 6;
        const double n1 = sv[9], n2 = sv[10];
        const double s1 = 1.0 / (n1 + kNormEps);
        const double s2 = 1.0 / (n2 + kNormEps);
        const double* x = xi->data.data() + static_cast<size_t>(i) * 6;
        const double* a1 = x;
        const double* a2 = x + 3;

        double g1[3], g2[3], g3[3];
        for (int k = 0; k < 3; ++k) {
          g1[k] = gr[k * 3 + 0];
          g2[k] = gr[k * 3 + 1];
          g3[k] = gr[k * 3 + 2];
        }

        // b3 = b1 x b2
        double tmp[3];
        cross3(b2, g3, tmp);
        for (int k = 0; k < 3; ++k) g1[k] += tmp[k];
        cross3(g3, b1, tmp);
        for (int k = 0; k < 3; ++k) g2[k] += tmp[k];

        // b2 = u2 / (||u2|| + eps)
        double du2[3];
        const double u2g2 = dot3(u2, g2);
        const double c2 = s2 * s2 * u2g2 / std::max(n2, kTiny);
        for (int k = 0; k < 3; ++k) du2[k] = s2 * g2[k] - c2 * u2[k];

        // u2 = a2 - (b1.a2) b1
        const double d = dot3(b1, a2);
        double da2[3];
        const double dd = -dot3(du2, b1);
        for (int k = 0; k < 3; ++k) {
          da2[k] = du2[k] + dd * b1[k];
          g1[k] += -d * du2[k] + dd * a2[k];
        }

        // b1 = a1 / (||a1|| + eps)
        const double a1g1 = dot3(a1, g1);
        const double c1 = s1 * s1 * a1g1 / std::max(n1, kTiny);
        double* dx = dst.data() + static_cast<size_t>(i) * 6;
        for (int k = 0; k < 3; ++k) {
          dx[k] += s1 * g1[k] - c1 * a1[k];
          dx[3 + k] += da2[k];
        }
      }
    });
  }
  return out;
}

Tensor fk_positions(const Tensor& rotmats, const Tensor& trans,
                    const Skeleton& skeleton) {
  const int j = skeleton.num_joints();
  require(rotmats.ndim() == 2 && rotmats.cols() == j * 9,
          "fk_positions: rotmats must be [T," + std::to_string(j * 9) +
              "], got " + shape_str(rotmats.shape()));
  require(trans.ndim() == 2 && trans.cols() == 3 &&
              trans.rows() == rotmats.rows(),
          "fk_positions: trans must be [T,3] matching rotmats, got " +
              shape_str(trans.shape()));
  const int t_count = rotmats.rows();

  Tensor out = Tensor::zeros({t_count, j * 3});
  // World rotations are needed again in the backward pass.
  auto world = std::make_shared<std::vector<double>>(
      static_cast<size_t>(t_count) * j * 9);

  for (int t = 0; t < t_count; ++t) {
    const double* local = rotmats.data() + static_cast<size_t>(t) * j * 9;
    const double* tr = trans.data() + static_cast<size_t>(t) * 3;
    double* pos = out.mutable_data() + static_cast<size_t>(t) * j * 3;
    double* w = world->data() + static_cast<size_t>(t) * j * 9;
    for (int i = 0; i < j; ++i) {
      const int p = skeleton.parents[i];
      const double* li = local + i * 9;
      double* wi = w + i * 9;
      if (p < 0) {
        std::copy(li, li + 9, wi);
        pos[i * 3 + 0] = tr[0];
        pos[i * 3 + 1] = tr[1];
        pos[i * 3 + 2] = tr[2];
      } else {
        const double* wp = w + p * 9;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            wi[r * 3 + c] = wp[r * 3 + 0] * li[0 * 3 + c] +
                            wp[r * 3 + 1] * li[1 * 3 + c] +
                            wp[r * 3 + 2] * li[2 * 3 + c];
        const auto& off = skeleton.offsets[i];
        for (int r = 0; r < 3; ++r)
          pos[i * 3 + r] = pos[p * 3 + r] + wp[r * 3 + 0] * off[0] +
                           wp[r * 3 + 1] * off[1] + wp[r * 3 + 2] * off[2];
      }
    }
  }

  if (Tape::current() && (rotmats.requires_grad() || trans.requires_grad())) {
    out.set_requires_grad(true);
    Skeleton skel = skeleton;  // captured by value; cheap at this size
    Tape::current()->record([ri = rotmats.impl(), ti = trans.impl(),
                             oi = out.impl(), world, skel, t_count, j] {
      if (!oi->grad) return;
      const auto& g = *oi->grad;
      std::vector<double> dw(static_cast<size_t>(j) * 9);
      std::vector<double> dpos(static_cast<size_t>(j) * 3);
      for (int t = 0; t < t_count; ++t) {
        const double* gp = g.data() + static_cast<size_t>(t) * j * 3;
        const double* local = ri->data.data() + static_cast<size_t>(t) * j * 9;
        const double* w = world->data() + static_cast<size_t>(t) * j * 9;
        std::fill(dw.begin(), dw.end(), 0.0);
        std::copy(gp, gp + static_cast<size_t>(j) * 3, dpos.begin());

        for (int i = j - 1; i >= 0; --i) {
          const int p = skel.parents[i];
          const double* dwi = dw.data() + i * 9;
          if (p < 0) {
            if (ti->requires_grad) {
              auto& dtr = Tensor::ensure_grad(ti);
              for (int r = 0; r < 3; ++r)
                dtr[static_cast<size_t>(t) * 3 + r] += dpos[i * 3 + r];
            }
            if (ri->requires_grad) {
              auto& dl = Tensor::ensure_grad(ri);
              for (int k = 0; k < 9; ++k)
                dl[static_cast<size_t>(t) * j * 9 + i * 9 + k] += dwi[k];
            }
            continue;
          }
          // pos[i] = pos[p] + W[p] * off[i]
          const auto& off = skel.offsets[i];
          double* dwp = dw.data() + p * 9;
          for (int r = 0; r < 3; ++r) {
            const double dp = dpos[i * 3 + r];
            dpos[p * 3 + r] += dp;
            dwp[r * 3 + 0] += dp * off[0];
            dwp[r * 3 + 1] += dp * off[1];
            dwp[r * 3 + 2] += dp * off[2];
          }
          // W[i] = W[p] * L[i]  ->  dW[p] += dW[i]*L^T, dL += W[p]^T*dW[i]
          const double* li = local + i * 9;
          const double* wp = w + p * 9;
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
              dwp[r * 3 + c] += dwi[r * 3 + 0] * li[c * 3 + 0] +
                                dwi[r * 3 + 1] * li[c * 3 + 1] +
                                dwi[r * 3 + 2] * li[c * 3 + 2];
            }
          if (ri->requires_grad) {
            auto& dl = Tensor::ensure_grad(ri);
            double* dli = dl.data() + static_cast<size_t>(t) * j * 9 + i * 9;
            for (int r = 0; r < 3; ++r)
              for (int c = 0; c < 3; ++c)
                dli[r * 3 + c] += wp[0 * 3 + r] * dwi[0 * 3 + c] +
                                  wp[1 * 3 + r] * dwi[1 * 3 + c] +
                                  wp[2 * 3 + r] * dwi[2 * 3 + c];
          }
        }
      }
    });
  }
  return out;
}

}  // namespace gg
