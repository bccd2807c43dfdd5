#pragma once

#include <optional>
#include <vector>

#include "core/linalg.hpp"
#include "core/tensor.hpp"

namespace tnet {

// Completely positive trace-preserving map held as a Kraus set
// {V_s : dim_out x dim_in}, Sum_s V_s^dagger V_s = I. The superoperator
// (dim_out^2 x dim_in^2, row-major vec convention) is built on first use.
class CptMap {
public:
  // Validates trace preservation to 1e-10; rejects invalid sets.
  static CptMap from_kraus(std::vector<Mat> kraus);
  // Skips the trace-preservation check: for completely positive maps that
  // are not channels (adjoints are unital instead). Still requires a
  // consistent Kraus set.
  static CptMap from_kraus_unchecked(std::vector<Mat> kraus);

  int64_t dim_in() const { return dim_in_; }
  int64_t dim_out() const { return dim_out_; }
  const std::vector<Mat>& kraus() const { return kraus_; }
  bool trace_preserving() const { return trace_preserving_; }

  Mat apply(const Mat& rho) const;
  // Adjoint map A -> Sum V^dagger A V; completely positive and unital.
  CptMap adjoint() const;

  const Mat& superop() const;  // cached

  // Tensor product of two maps: (M1 (x) M2)(rho) on dim_in1*dim_in2.
  static CptMap tensor(const CptMap& m1, const CptMap& m2);
  // Convex-style sum with nonnegative weights (Kraus sets scaled by sqrt(w)).
  static CptMap weighted_sum(const std::vector<std::pair<double, CptMap>>& terms);
  // Composition m_outer after m_inner.
  static CptMap compose(const CptMap& outer, const CptMap& inner);

private:
  std::vector<Mat> kraus_;
  int64_t dim_in_ = 0, dim_out_ = 0;
  bool trace_preserving_ = false;
  mutable std::optional<Mat> superop_;
};

struct SpectralSummary {
  std::vector<cplx> eigenvalues;  // nonincreasing modulus
  Mat fixed_point;                // trace-1 when mixing
  double gap = 0.0;               // 1 - |lambda_2|
  bool mixing = false;
  bool dense = true;              // false when the size guard forced power iteration
};

// Dense superoperator eigendecomposition up to dim^2 = 4096; beyond that,
// power iteration recovers only the leading pair.
SpectralSummary spectral_summary(const CptMap& map, double mixing_gap_tol = 1e-8);

// Repeated application until trace-norm stationarity; throws a numeric error
// on non-convergence (non-mixing map or tiny gap).
Mat iterate_to_fixed_point(const CptMap& map, const Mat& seed, int max_iters = 10000,
                           double tol = 1e-12);

// Canonical channels.
CptMap identity_channel(int64_t n);
CptMap depolarizing_channel(double p);
CptMap dephasing_channel();
// Channel of a left-gauged MPS tensor A(a,s,b): rho -> Sum_s A_s rho A_s^dagger.
CptMap channel_from_left_gauged(const Tensor& site);

double trace_norm(const Mat& m);

}  // namespace tnet
