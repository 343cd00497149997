#include "gg/fgd.hpp"

#include <cmath>

#include "gg/kernels.hpp"

namespace gg {
namespace {

constexpr double kNegEigTol = 1e-8;  // relative to the largest |eigenvalue|

std::vector<double> symmetrized(const std::vector<double>& a, int n) {
  std::vector<double> s(a.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s[static_cast<size_t>(i) * n + j] =
          0.5 * (a[static_cast<size_t>(i) * n + j] +
                 a[static_cast<size_t>(j) * n + i]);
  return s;
}

// Eigenvalues clamped at zero; error out if the spectrum is meaningfully
// negative (beyond roundoff) since that indicates a broken covariance.
std::vector<double> psd_eigvals(const std::vector<double>& sym, int n,
                                std::vector<double>* eigvecs,
                                const char* what) {
  std::vector<double> vals, vecs;
  jacobi_eigen(sym, n, vals, vecs);
  double max_abs = 0.0;
  for (double v : vals) max_abs = std::max(max_abs, std::abs(v));
  const double floor = -kNegEigTol * std::max(max_abs, 1.0);
  for (double& v : vals) {
    if (v < floor)
      throw NumericError(std::string(what) +
                         ": matrix is not PSD after symmetrization (eig " +
                         std::to_string(v) + ")");
    v = std::max(v, 0.0);
  }
  if (eigvecs) *eigvecs = std::move(vecs);
  return vals;
}

std::vector<double> matmul_sq(const std::vector<double>& a,
                              const std::vector<double>& b, int n) {
  std::vector<double> c(static_cast<size_t>(n) * n);
  kernels::active().matmul(a.data(), b.data(), c.data(), n, n, n);
  return c;
}

}  // namespace

void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eigvals,
                  std::vector<double>& eigvecs) {
  require(n >= 1, "jacobi_eigen: empty matrix");
  eigvecs.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eigvecs[static_cast<size_t>(i) * n + i] = 1.0;

  auto at = [&](std::vector<double>& m, int i, int j) -> double& {
    return m[static_cast<size_t>(i) * n + j];
  };

  double frob = 0.0;
  for (double v : a) frob += v * v;
  const double tol = 1e-24 * std::max(frob, 1e-300);

  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * at(a, i, j) * at(a, i, j);
    if (off <= tol) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (apq == 0.0) continue;
        const double app = at(a, p, p), aqq = at(a, q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(a, k, p), akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(a, p, k), aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = at(eigvecs, k, p), vkq = at(eigvecs, k, q);
          at(eigvecs, k, p) = c * vkp - s * vkq;
          at(eigvecs, k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  eigvals.resize(n);
  for (int i = 0; i < n; ++i) eigvals[i] = at(a, i, i);
}

GaussianFit fit_gaussian(const Tensor& features) {
  require(features.ndim() == 2, "fit_gaussian: features must be 2-d");
  const int n = features.rows(), f = features.cols();
  require(n >= 2, "fit_gaussian: need at least 2 feature rows, got " +
                      std::to_string(n));
  GaussianFit fit;
  fit.dim = f;
  fit.mean.assign(f, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < f; ++j)
      fit.mean[j] += features.data()[static_cast<size_t>(i) * f + j];
  for (double& m : fit.mean) m /= n;

  fit.cov.assign(static_cast<size_t>(f) * f, 0.0);
  std::vector<double> centered(static_cast<size_t>(n) * f);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < f; ++j)
      centered[static_cast<size_t>(i) * f + j] =
          features.data()[static_cast<size_t>(i) * f + j] - fit.mean[j];
  kernels::active().matmul_tn(centered.data(), centered.data(), fit.cov.data(),
                              f, n, f);
  const double inv = 1.0 / (n - 1);
  for (double& v : fit.cov) v *= inv;
  return fit;
}

double fgd_from_fits(const GaussianFit& real, const GaussianFit& gen) {
  require(real.dim == gen.dim, "fgd: feature dimension mismatch (" +
                                   std::to_string(real.dim) + " vs " +
                                   std::to_string(gen.dim) + ")");
  const int n = real.dim;

  double mean_term = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = real.mean[i] - gen.mean[i];
    mean_term += d * d;
  }

  const auto cov_r = symmetrized(real.cov, n);
  const auto cov_g = symmetrized(gen.cov, n);

  double trace_r = 0.0, trace_g = 0.0;
  for (int i = 0; i < n; ++i) {
    trace_r += cov_r[static_cast<size_t>(i) * n + i];
    trace_g += cov_g[static_cast<size_t>(i) * n + i];
  }

  // sqrtm(cov_r) through its eigendecomposition, then the PSD product trick:
  // Tr((S_r S_g)^1/2) = Tr(sqrt(sqrt(S_r) S_g sqrt(S_r))).
  std::vector<double> vecs;
  auto vals = psd_eigvals(cov_r, n, &vecs, "fgd: real covariance");
  std::vector<double> scaled(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      scaled[static_cast<size_t>(i) * n + j] =
          vecs[static_cast<size_t>(i) * n + j] * std::sqrt(vals[j]);
  std::vector<double> sqrt_r(static_cast<size_t>(n) * n);
  kernels::active().matmul_nt(scaled.data(), vecs.data(), sqrt_r.data(), n, n,
                              n);
  // sqrt_r is V sqrt(D) V^T; note matmul_nt multiplies by vecs^T.

  auto middle = symmetrized(matmul_sq(matmul_sq(sqrt_r, cov_g, n), sqrt_r, n),
                            n);
  auto mid_vals = psd_eigvals(middle, n, nullptr, "fgd: product matrix");
  double tr_sqrt = 0.0;
  for (double v : mid_vals) tr_sqrt += std::sqrt(v);

  return mean_term + trace_r + trace_g - 2.0 * tr_sqrt;
}

double fgd(const Tensor& real_features, const Tensor& gen_features) {
  return fgd_from_fits(fit_gaussian(real_features),
                       fit_gaussian(gen_features));
}

Tensor window_stat_features(const MotionSequence& motion,
                            const Skeleton& skeleton, int window) {
  require(window >= 2, "window_stat_features: window must be >= 2");
  const int t_count = motion.num_frames();
  const int n_windows = t_count / window;
  require(n_windows >= 1, "window_stat_features: motion shorter than window");
  const auto positions =
      forward_kinematics(motion, skeleton, /*zero_translation=*/true);
  const int j = positions.joints;
  const int f = 2 * j * 3;

  Tensor out = Tensor::zeros({n_windows, f});
  for (int wi = 0; wi < n_windows; ++wi) {
    double* row = out.mutable_data() + static_cast<size_t>(wi) * f;
    for (int jj = 0; jj < j; ++jj) {
      for (int k = 0; k < 3; ++k) {
        double mean = 0.0, var = 0.0;
        for (int t = wi * window; t < (wi + 1) * window; ++t)
          mean += positions.at(t, jj)[k];
        mean /= window;
        for (int t = wi * window; t < (wi + 1) * window; ++t) {
          const double d = positions.at(t, jj)[k] - mean;
          var += d * d;
        }
        row[(jj * 3 + k) * 2] = mean;
        row[(jj * 3 + k) * 2 + 1] = std::sqrt(var / window);
      }
    }
  }
  return out;
}

}  // namespace gg
