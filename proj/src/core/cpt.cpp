#include "core/cpt.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "core/error.hpp"

namespace tnet {

namespace {

// Kronecker product in the row-major vec convention:
// out[(a,b),(i,j)] = A(a,i) * B(b,j).
Mat kron(const Mat& A, const Mat& B) {
  Mat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int64_t a = 0; a < A.rows(); ++a)
    for (int64_t i = 0; i < A.cols(); ++i)
      out.block(a * B.rows(), i * B.cols(), B.rows(), B.cols()) = A(a, i) * B;
  return out;
}

Mat vec_to_mat(const Vec& v, int64_t n) {
  Mat m(n, n);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) m(i, j) = v(i * n + j);
  return m;
}

}  // namespace

CptMap CptMap::from_kraus(std::vector<Mat> kraus) {
  CptMap m = from_kraus_unchecked(std::move(kraus));
  Mat acc = Mat::Zero(m.dim_in_, m.dim_in_);
  for (const Mat& v : m.kraus_) acc += v.adjoint() * v;
  acc -= Mat::Identity(m.dim_in_, m.dim_in_);
  if (matrix_inf_residual(acc) > 1e-10)
    fail_invalid("Kraus set is not trace preserving (residual " +
                 std::to_string(matrix_inf_residual(acc)) + ")");
  m.trace_preserving_ = true;
  return m;
}

CptMap CptMap::from_kraus_unchecked(std::vector<Mat> kraus) {
  require(!kraus.empty(), "empty Kraus set");
  CptMap m;
  m.dim_out_ = kraus.front().rows();
  m.dim_in_ = kraus.front().cols();
  for (const Mat& v : kraus)
    require(v.rows() == m.dim_out_ && v.cols() == m.dim_in_, "ragged Kraus set");
  m.kraus_ = std::move(kraus);
  return m;
}

Mat CptMap::apply(const Mat& rho) const {
  require(rho.rows() == dim_in_ && rho.cols() == dim_in_, "apply: dimension mismatch");
  Mat out = Mat::Zero(dim_out_, dim_out_);
  for (const Mat& v : kraus_) out += v * rho * v.adjoint();
  return out;
}

CptMap CptMap::adjoint() const {
  std::vector<Mat> adj;
  adj.reserve(kraus_.size());
  for (const Mat& v : kraus_) adj.push_back(v.adjoint());
  return from_kraus_unchecked(std::move(adj));
}

const Mat& CptMap::superop() const {
  if (!superop_) {
    Mat s = Mat::Zero(dim_out_ * dim_out_, dim_in_ * dim_in_);
    for (const Mat& v : kraus_) s += kron(v, v.conjugate());
    superop_ = std::move(s);
  }
  return *superop_;
}

CptMap CptMap::tensor(const CptMap& m1, const CptMap& m2) {
  std::vector<Mat> kraus;
  kraus.reserve(m1.kraus_.size() * m2.kraus_.size());
  for (const Mat& a : m1.kraus_)
    for (const Mat& b : m2.kraus_) kraus.push_back(kron(a, b));
  CptMap out = from_kraus_unchecked(std::move(kraus));
  out.trace_preserving_ = m1.trace_preserving_ && m2.trace_preserving_;
  return out;
}

CptMap CptMap::weighted_sum(const std::vector<std::pair<double, CptMap>>& terms) {
  require(!terms.empty(), "weighted_sum: no terms");
  std::vector<Mat> kraus;
  for (const auto& [w, m] : terms) {
    require(w >= 0.0, "weighted_sum: negative weight");
    for (const Mat& v : m.kraus()) kraus.push_back(std::sqrt(w) * v);
  }
  return from_kraus_unchecked(std::move(kraus));
}

CptMap CptMap::compose(const CptMap& outer, const CptMap& inner) {
  require(outer.dim_in() == inner.dim_out(), "compose: dimension mismatch");
  std::vector<Mat> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const Mat& a : outer.kraus())
    for (const Mat& b : inner.kraus()) kraus.push_back(a * b);
  CptMap out = from_kraus_unchecked(std::move(kraus));
  out.trace_preserving_ = outer.trace_preserving() && inner.trace_preserving();
  return out;
}

SpectralSummary spectral_summary(const CptMap& map, double mixing_gap_tol) {
  require(map.dim_in() == map.dim_out(), "spectral_summary: endomorphisms only");
  const int64_t n = map.dim_in();
  SpectralSummary out;

  if (n * n <= 4096) {
    EigG eig = eig_general(map.superop());
    out.eigenvalues = eig.values;
    out.gap = eig.values.size() > 1 ? 1.0 - std::abs(eig.values[1]) : 1.0;
    // simple leading eigenvalue 1 and every other eigenvalue strictly inside
    bool leading_is_one = std::abs(eig.values.front() - cplx(1.0)) < 1e-9;
    bool simple = eig.values.size() < 2 || std::abs(eig.values[1]) <= 1.0 - mixing_gap_tol;
    out.mixing = leading_is_one && simple;
    Mat fp = vec_to_mat(eig.vectors.col(0), n);
    fp = 0.5 * (fp + fp.adjoint());  // eigenvalue-1 eigenmatrix can be taken hermitian
    cplx tr = fp.trace();
    if (std::abs(tr) > 1e-12) fp /= tr;
    out.fixed_point = fp;
  } else {
    out.dense = false;
    // power iteration on vec(rho); CPT maps have spectral radius 1
    Mat rho = Mat::Identity(n, n) / double(n);
    double lambda = 1.0;
    for (int it = 0; it < 5000; ++it) {
      Mat next = map.apply(rho);
      lambda = trace_norm(next) / std::max(trace_norm(rho), 1e-300);
      double delta = trace_norm(next - rho);
      rho = next;
      if (delta < 1e-13) break;
    }
    out.eigenvalues = {cplx(lambda)};
    cplx tr = rho.trace();
    if (std::abs(tr) > 1e-12) rho /= tr;
    out.fixed_point = rho;
    out.gap = 0.0;
    out.mixing = false;
  }
  return out;
}

Mat iterate_to_fixed_point(const CptMap& map, const Mat& seed, int max_iters, double tol) {
  require(map.dim_in() == map.dim_out(), "fixed point: endomorphisms only");
  Mat rho = seed;
  for (int it = 0; it < max_iters; ++it) {
    Mat next = map.apply(rho);
    if (trace_norm(next - rho) < tol) return rho;
    rho = next;
  }
  fail_numeric("fixed-point iteration did not converge (non-mixing map or tiny gap)");
}

CptMap identity_channel(int64_t n) { return CptMap::from_kraus({Mat::Identity(n, n)}); }

CptMap depolarizing_channel(double p) {
  require(p >= 0.0 && p <= 4.0 / 3.0, "depolarizing strength out of range");
  Mat id = Mat::Identity(2, 2), sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  std::vector<Mat> kraus = {std::sqrt(1.0 - 3.0 * p / 4.0) * id, std::sqrt(p / 4.0) * sx,
                            std::sqrt(p / 4.0) * sy, std::sqrt(p / 4.0) * sz};
  return CptMap::from_kraus(std::move(kraus));
}

CptMap dephasing_channel() {
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  return CptMap::from_kraus({p0, p1});
}

CptMap channel_from_left_gauged(const Tensor& site) {
  require(site.rank() == 3, "expected a 3-index site tensor");
  const int64_t dl = site.dim(0), d = site.dim(1), dr = site.dim(2);
  std::vector<Mat> kraus;
  kraus.reserve(static_cast<size_t>(d));
  for (int64_t s = 0; s < d; ++s) {
    Mat v(dl, dr);
    for (int64_t a = 0; a < dl; ++a)
      for (int64_t b = 0; b < dr; ++b) v(a, b) = site.at({a, s, b});
    kraus.push_back(std::move(v));
  }
  return CptMap::from_kraus(std::move(kraus));
}

double trace_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

}  // namespace tnet
