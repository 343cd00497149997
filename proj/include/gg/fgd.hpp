#pragma once

#include <vector>

#include "gg/fk.hpp"
#include "gg/tensor.hpp"

namespace gg {

struct GaussianFit {
  int dim = 0;
  std::vector<double> mean;  // [dim]
  std::vector<double> cov;   // [dim x dim], symmetric PSD
};

// Sample mean and (N-1)-normalized covariance of row features; N >= 2.
GaussianFit fit_gaussian(const Tensor& features);

// Frechet (Wasserstein-2) distance between two Gaussian fits:
//   ||mu_r - mu_g||^2 + Tr(S_r + S_g - 2 (S_r S_g)^{1/2})
// computed via symmetric eigendecompositions; covariances whose spectra go
// meaningfully negative after symmetrization raise NumericError.
double fgd_from_fits(const GaussianFit& real, const GaussianFit& gen);
double fgd(const Tensor& real_features, const Tensor& gen_features);

// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major n x n).
// Eigenvectors are returned as columns of V: A = V diag(vals) V^T.
void jacobi_eigen(std::vector<double> sym, int n, std::vector<double>& eigvals,
                  std::vector<double>& eigvecs);

// Default pluggable gesture encoder: non-overlapping windows of joint
// positions (translation zeroed), each summarized by the per-coordinate mean
// and std -> one feature row of 2*J*3 values per window.
Tensor window_stat_features(const MotionSequence& motion,
                            const Skeleton& skeleton, int window = 30);

}  // namespace gg
