#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "core/tensor.hpp"

namespace tnet {

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

// Tensor <-> Eigen bridges. as_matrix fuses row_indices (in the given order)
// against the remaining indices (in tensor order).
Mat as_matrix(const Tensor& t, const std::vector<int>& row_indices);
Tensor from_matrix(const Mat& m, const std::vector<int64_t>& row_dims,
                   const std::vector<int64_t>& col_dims);

struct SvdResult {
  Tensor left_isometry;           // row dims ..., kept
  std::vector<double> singular_values;  // nonincreasing, >= 0
  Tensor right_isometry;          // kept, col dims ...
  double discarded_weight = 0.0;  // sum of squared dropped singular values
};

// SVD of t matricized over row_indices. Keeps at most max_keep values
// (max_keep < 0 means unbounded) and drops values below cutoff * sigma_max.
// At least one value is always kept. Phases fixed so the largest-modulus
// entry of every left column is real positive.
SvdResult factorize_svd(const Tensor& t, const std::vector<int>& row_indices,
                        int64_t max_keep = -1, double cutoff = 1e-12);

struct EigH {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns
};
EigH eig_hermitian(const Mat& m);

struct EigG {
  std::vector<cplx> values;  // sorted by nonincreasing modulus
  Mat vectors;               // columns, matching order
};
EigG eig_general(const Mat& m);

// Lowest eigenpair of a hermitian operator given only its action.
// Lanczos with full reorthogonalization and thick restarts from the current
// Ritz vector; suited to the desk-scale local problems of the sweeps.
struct LowestPair {
  double value = 0.0;
  Vec vector;
  int iterations = 0;
  bool converged = false;
};
LowestPair lowest_eigenpair(const std::function<Vec(const Vec&)>& apply, const Vec& seed,
                            double tol = 1e-11, int max_iters = 600);

// Lowest eigenpair of the pencil (H, N) with N hermitian positive
// semidefinite. Small negative N eigenvalues below -floor * |N| abort;
// near-null directions are regularized away.
LowestPair lowest_generalized(const Mat& H, const Mat& N, double floor = 1e-8);

// QR-based isometrization: columns span the same space, Q^dagger Q = I.
Mat orthonormal_columns(const Mat& m);

double matrix_inf_residual(const Mat& m);  // max |entry|

}  // namespace tnet
