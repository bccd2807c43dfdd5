#include "core/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace tnet {

Mat as_matrix(const Tensor& t, const std::vector<int>& row_indices) {
  std::vector<bool> in_row(static_cast<size_t>(t.rank()), false);
  for (int k : row_indices) {
    require(k >= 0 && k < t.rank(), "row index out of range");
    in_row[static_cast<size_t>(k)] = true;
  }
  std::vector<int> order(row_indices);
  int64_t rows = 1, cols = 1;
  for (int k : row_indices) rows *= t.dim(k);
  for (int k = 0; k < t.rank(); ++k)
    if (!in_row[static_cast<size_t>(k)]) {
      order.push_back(k);
      cols *= t.dim(k);
    }
  Tensor p = permute(t, order);
  return Eigen::Map<const Mat>(p.data(), rows, cols);
}

Tensor from_matrix(const Mat& m, const std::vector<int64_t>& row_dims,
                   const std::vector<int64_t>& col_dims) {
  std::vector<int64_t> dims = row_dims;
  dims.insert(dims.end(), col_dims.begin(), col_dims.end());
  Tensor out(dims);
  require(out.size() == static_cast<int64_t>(m.size()), "from_matrix size mismatch");
  std::copy(m.data(), m.data() + m.size(), out.data());
  return out;
}

SvdResult factorize_svd(const Tensor& t, const std::vector<int>& row_indices,
                        int64_t max_keep, double cutoff) {
  require(!row_indices.empty() && static_cast<int>(row_indices.size()) < t.rank(),
          "row_indices must be a nonempty proper subset");
  require(cutoff >= 0.0, "cutoff must be nonnegative");

  std::vector<bool> in_row(static_cast<size_t>(t.rank()), false);
  for (int k : row_indices) in_row[static_cast<size_t>(k)] = true;
  std::vector<int64_t> row_dims, col_dims;
  for (int k : row_indices) row_dims.push_back(t.dim(k));
  for (int k = 0; k < t.rank(); ++k)
    if (!in_row[static_cast<size_t>(k)]) col_dims.push_back(t.dim(k));

  Mat m = as_matrix(t, row_indices);
  for (int64_t i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag()))
      fail_numeric("factorize_svd: non-finite entries");

  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const int64_t full = sv.size();

  const double smax = full > 0 ? sv(0) : 0.0;
  int64_t keep = 0;
  for (int64_t i = 0; i < full; ++i)
    if (sv(i) > cutoff * smax) ++keep;
  if (max_keep >= 0) keep = std::min(keep, max_keep);
  keep = std::max<int64_t>(keep, 1);

  double discarded = 0.0;
  for (int64_t i = keep; i < full; ++i) discarded += sv(i) * sv(i);

  Mat U = svd.matrixU().leftCols(keep);
  Mat Vh = svd.matrixV().leftCols(keep).adjoint();

  // Deterministic phases: rotate each column of U so its largest-modulus
  // entry is real positive, compensating in the matching row of Vh.
  for (int64_t c = 0; c < keep; ++c) {
    int64_t arg = 0;
    double best = -1.0;
    for (int64_t r = 0; r < U.rows(); ++r)
      if (std::abs(U(r, c)) > best + 1e-15) {
        best = std::abs(U(r, c));
        arg = r;
      }
    if (best > 0.0) {
      cplx phase = U(arg, c) / best;
      U.col(c) *= std::conj(phase);
      Vh.row(c) *= phase;
    }
  }

  SvdResult out;
  out.singular_values.assign(sv.data(), sv.data() + keep);
  out.discarded_weight = discarded;
  std::vector<int64_t> urows = row_dims;
  out.left_isometry = from_matrix(U, urows, {keep});
  out.right_isometry = from_matrix(Vh, {keep}, col_dims);
  return out;
}

EigH eig_hermitian(const Mat& m) {
  require(m.rows() == m.cols(), "eig_hermitian: matrix not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) fail_numeric("hermitian eigensolver failed");
  EigH out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  out.vectors = es.eigenvectors();
  return out;
}

EigG eig_general(const Mat& m) {
  require(m.rows() == m.cols(), "eig_general: matrix not square");
  Eigen::ComplexEigenSolver<Mat> es(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) fail_numeric("general eigensolver failed");
  const int64_t n = m.rows();
  std::vector<int64_t> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(idx.begin(), idx.end(), [&](int64_t a, int64_t b) {
    return std::abs(ev(a)) > std::abs(ev(b));
  });
  EigG out;
  out.values.reserve(static_cast<size_t>(n));
  out.vectors.resize(n, n);
  for (int64_t k = 0; k < n; ++k) {
    out.values.push_back(ev(idx[static_cast<size_t>(k)]));
    out.vectors.col(k) = es.eigenvectors().col(idx[static_cast<size_t>(k)]);
  }
  return out;
}

namespace {

// One Lanczos pass from seed; returns the best Ritz pair found.
LowestPair lanczos_cycle(const std::function<Vec(const Vec&)>& apply, const Vec& seed,
                         int krylov_max, double tol) {
  const int64_t n = seed.size();
  std::vector<Vec> basis;
  std::vector<double> alpha, beta;

  Vec v = seed;
  double nv = v.norm();
  require(nv > 0.0, "lanczos: zero seed");
  v /= nv;
  basis.push_back(v);

  LowestPair best;
  Vec w;
  for (int it = 0; it < krylov_max; ++it) {
    w = apply(basis.back());
    cplx a = basis.back().dot(w);
    alpha.push_back(a.real());
    w -= a * basis.back();
    if (basis.size() > 1) w -= cplx(beta.back()) * basis[basis.size() - 2];
    // full reorthogonalization, twice for safety
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& u : basis) w -= u.dot(w) * u;

    // Ritz values of the current tridiagonal block
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[static_cast<size_t>(i)];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXd y = es.eigenvectors().col(0);
    best.value = es.eigenvalues()(0);
    best.vector = Vec::Zero(n);
    for (int i = 0; i < k; ++i) best.vector += cplx(y(i)) * basis[static_cast<size_t>(i)];
    best.vector.normalize();
    best.iterations = k;

    double b = w.norm();
    // Residual of the Ritz pair: |beta_k * y_last|.
    double resid = b * std::abs(y(k - 1));
    if (resid < tol * std::max(1.0, std::abs(best.value))) {
      best.converged = true;
      return best;
    }
    if (b < 1e-14 || static_cast<int64_t>(basis.size()) >= n) {
      best.converged = true;  // invariant subspace exhausted
      return best;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return best;
}

}  // namespace

LowestPair lowest_eigenpair(const std::function<Vec(const Vec&)>& apply, const Vec& seed,
                            double tol, int max_iters) {
  const int krylov = 64;
  Vec v = seed;
  LowestPair p;
  int used = 0;
  while (used < max_iters) {
    p = lanczos_cycle(apply, v, std::min(krylov, max_iters - used), tol);
    used += p.iterations;
    p.iterations = used;
    if (p.converged) return p;
    v = p.vector;  // restart from the current Ritz vector
  }
  return p;
}

LowestPair lowest_generalized(const Mat& H, const Mat& N, double floor) {
  require(H.rows() == H.cols() && N.rows() == N.cols() && H.rows() == N.rows(),
          "generalized solve: shape mismatch");
  Mat Hs = 0.5 * (H + H.adjoint());
  Mat Ns = 0.5 * (N + N.adjoint());

  EigH en = eig_hermitian(Ns);
  const int64_t n = Ns.rows();
  double nmax = 0.0;
  for (double v : en.values) nmax = std::max(nmax, std::abs(v));
  if (nmax == 0.0) fail_numeric("generalized solve: zero norm operator");
  if (en.values.front() < -floor * nmax)
    fail_numeric("generalized solve: norm operator indefinite beyond tolerance");

  // Keep directions with meaningful norm weight; invert the square root there.
  const double keep_floor = 1e-12 * nmax;
  std::vector<int64_t> kept;
  for (int64_t i = 0; i < n; ++i)
    if (en.values[static_cast<size_t>(i)] > keep_floor) kept.push_back(i);
  require(!kept.empty(), "generalized solve: norm operator numerically zero");

  Mat P(n, static_cast<int64_t>(kept.size()));  // columns: eigvec / sqrt(lambda)
  for (size_t j = 0; j < kept.size(); ++j)
    P.col(static_cast<int64_t>(j)) =
        en.vectors.col(kept[j]) / std::sqrt(en.values[static_cast<size_t>(kept[j])]);

  Mat Ht = P.adjoint() * Hs * P;
  EigH eh = eig_hermitian(Ht);
  LowestPair out;
  out.value = eh.values.front();
  out.vector = P * eh.vectors.col(0);
  // Normalize in the N metric so the caller gets <v|N|v> = 1.
  double nn = std::sqrt(std::abs((out.vector.adjoint() * Ns * out.vector)(0, 0).real()));
  if (nn > 0) out.vector /= nn;
  out.converged = true;
  return out;
}

Mat orthonormal_columns(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  Mat Q = qr.householderQ() * Mat::Identity(m.rows(), std::min(m.rows(), m.cols()));
  return Q;
}

double matrix_inf_residual(const Mat& m) {
  double r = 0.0;
  for (int64_t i = 0; i < m.size(); ++i) r = std::max(r, std::abs(m.data()[i]));
  return r;
}

}  // namespace tnet
