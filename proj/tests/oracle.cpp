#include "oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>
#include <functional>

namespace oracle {

Tensor naive_contract(const Tensor& a, const Tensor& b,
                      const std::vector<std::pair<int, int>>& pairs) {
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (auto [ia, ib] : pairs) {
    used_a[ia] = true;
    used_b[ib] = true;
  }
  std::vector<int> free_a, free_b;
  std::vector<int64_t> out_dims;
  for (int k = 0; k < a.rank(); ++k)
    if (!used_a[k]) {
      free_a.push_back(k);
      out_dims.push_back(a.dim(k));
    }
  for (int k = 0; k < b.rank(); ++k)
    if (!used_b[k]) {
      free_b.push_back(k);
      out_dims.push_back(b.dim(k));
    }
  if (out_dims.empty()) out_dims.push_back(1);

  std::vector<int64_t> sum_dims;
  for (auto [ia, ib] : pairs) {
    (void)ib;
    sum_dims.push_back(a.dim(ia));
  }

  Tensor out(out_dims);
  std::vector<int64_t> ia_idx(a.rank(), 0), ib_idx(b.rank(), 0);
  std::vector<int64_t> fa(free_a.size(), 0), fb(free_b.size(), 0);
  std::vector<int64_t> s(pairs.size(), 0);

  // iterate over all (free_a, free_b) output cells
  int64_t out_flat = 0;
  std::function<void(size_t)> walk_out = [&](size_t level) {
    size_t nfa = free_a.size(), nfb = free_b.size();
    if (level == nfa + nfb) {
      // sum over contracted indices
      cplx acc = 0.0;
      std::function<void(size_t)> walk_sum = [&](size_t sl) {
        if (sl == pairs.size()) {
          for (size_t k = 0; k < free_a.size(); ++k) ia_idx[free_a[k]] = fa[k];
          for (size_t k = 0; k < pairs.size(); ++k) ia_idx[pairs[k].first] = s[k];
          for (size_t k = 0; k < free_b.size(); ++k) ib_idx[free_b[k]] = fb[k];
          for (size_t k = 0; k < pairs.size(); ++k) ib_idx[pairs[k].second] = s[k];
          acc += a[a.flat_index(ia_idx)] * b[b.flat_index(ib_idx)];
          return;
        }
        for (s[sl] = 0; s[sl] < sum_dims[sl]; ++s[sl]) walk_sum(sl + 1);
      };
      walk_sum(0);
      out[out_flat++] = acc;
      return;
    }
    if (level < nfa) {
      for (fa[level] = 0; fa[level] < a.dim(free_a[level]); ++fa[level]) walk_out(level + 1);
    } else {
      size_t j = level - nfa;
      for (fb[j] = 0; fb[j] < b.dim(free_b[j]); ++fb[j]) walk_out(level + 1);
    }
  };
  walk_out(0);
  return out;
}

Tensor random_tensor(const std::vector<int64_t>& dims, std::mt19937_64& rng,
                     bool complex_entries) {
  std::normal_distribution<double> g(0.0, 1.0);
  Tensor t(dims);
  for (int64_t i = 0; i < t.size(); ++i)
    t[i] = complex_entries ? cplx(g(rng), g(rng)) : cplx(g(rng), 0.0);
  return t;
}

Tensor random_hermitian(int64_t n, std::mt19937_64& rng) {
  Tensor t = random_tensor({n, n}, rng);
  Tensor out({n, n});
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j)
      out[i * n + j] = 0.5 * (t[i * n + j] + std::conj(t[j * n + i]));
  return out;
}

double entropy_bits(const Tensor& state, const std::vector<int>& region) {
  std::vector<bool> in_region(state.rank(), false);
  for (int r : region) in_region[r] = true;
  int64_t rows = 1, cols = 1;
  for (int k = 0; k < state.rank(); ++k) (in_region[k] ? rows : cols) *= state.dim(k);
  Eigen::MatrixXcd m(rows, cols);
  std::vector<int64_t> idx(state.rank(), 0);
  for (int64_t flat = 0; flat < state.size(); ++flat) {
    int64_t r = 0, c = 0;
    for (int k = 0; k < state.rank(); ++k) {
      if (in_region[k]) {
        r = r * state.dim(k) + idx[k];
      } else {
        c = c * state.dim(k) + idx[k];
      }
    }
    m(r, c) = state[flat];
    for (int k = state.rank() - 1; k >= 0; --k) {
      if (++idx[k] < state.dim(k)) break;
      idx[k] = 0;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double total = 0.0;
  for (int64_t i = 0; i < svd.singularValues().size(); ++i)
    total += svd.singularValues()(i) * svd.singularValues()(i);
  double s = 0.0;
  for (int64_t i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i) / total;
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

Tensor random_isometry(int64_t rows, int64_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  Tensor out({rows, cols});
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) out[i * cols + j] = q(i, j);
  return out;
}

}  // namespace oracle
