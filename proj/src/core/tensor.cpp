#include "core/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace tnet {

namespace {

int64_t checked_product(const std::vector<int64_t>& dims) {
  require(!dims.empty(), "tensor must have at least one index");
  int64_t n = 1;
  for (int64_t d : dims) {
    require(d >= 1, "tensor dimensions must be >= 1");
    n *= d;
  }
  return n;
}

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Tensor::Tensor(std::vector<int64_t> dims) : dims_(std::move(dims)) {
  entries_.assign(static_cast<size_t>(checked_product(dims_)), cplx(0.0, 0.0));
}

Tensor::Tensor(std::vector<int64_t> dims, std::vector<cplx> entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
  require(checked_product(dims_) == static_cast<int64_t>(entries_.size()),
          "entry count does not match dimensions");
}

Tensor Tensor::scalar(cplx v) { return Tensor({1}, {v}); }

Tensor Tensor::identity(int64_t d) {
  Tensor t({d, d});
  for (int64_t i = 0; i < d; ++i) t.entries_[static_cast<size_t>(i * d + i)] = 1.0;
  return t;
}

int64_t Tensor::flat_index(const std::vector<int64_t>& idx) const {
  require(idx.size() == dims_.size(), "index rank mismatch");
  int64_t flat = 0;
  for (size_t k = 0; k < dims_.size(); ++k) {
    require(idx[k] >= 0 && idx[k] < dims_[k], "index out of range");
    flat = flat * dims_[k] + idx[k];
  }
  return flat;
}

cplx Tensor::at(std::initializer_list<int64_t> idx) const {
  return entries_[static_cast<size_t>(flat_index(std::vector<int64_t>(idx)))];
}

void Tensor::set(std::initializer_list<int64_t> idx, cplx v) {
  entries_[static_cast<size_t>(flat_index(std::vector<int64_t>(idx)))] = v;
}

double Tensor::norm() const {
  double s = 0.0;
  for (const cplx& v : entries_) s += std::norm(v);
  return std::sqrt(s);
}

Tensor permute(const Tensor& t, const std::vector<int>& order) {
  const int r = t.rank();
  require(static_cast<int>(order.size()) == r, "permutation rank mismatch");
  std::vector<bool> seen(static_cast<size_t>(r), false);
  for (int o : order) {
    require(o >= 0 && o < r && !seen[static_cast<size_t>(o)], "order is not a permutation");
    seen[static_cast<size_t>(o)] = true;
  }

  std::vector<int64_t> new_dims(static_cast<size_t>(r));
  for (int k = 0; k < r; ++k) new_dims[static_cast<size_t>(k)] = t.dim(order[static_cast<size_t>(k)]);

  // strides of the input, then walk output multi-index in order.
  std::vector<int64_t> in_stride(static_cast<size_t>(r), 1);
  for (int k = r - 2; k >= 0; --k)
    in_stride[static_cast<size_t>(k)] = in_stride[static_cast<size_t>(k + 1)] * t.dim(k + 1);

  Tensor out(new_dims);
  std::vector<int64_t> idx(static_cast<size_t>(r), 0);
  const int64_t n = t.size();
  for (int64_t flat = 0; flat < n; ++flat) {
    int64_t src = 0;
    for (int k = 0; k < r; ++k) src += idx[static_cast<size_t>(k)] * in_stride[static_cast<size_t>(order[static_cast<size_t>(k)])];
    out[flat] = t[src];
    for (int k = r - 1; k >= 0; --k) {
      if (++idx[static_cast<size_t>(k)] < new_dims[static_cast<size_t>(k)]) break;
      idx[static_cast<size_t>(k)] = 0;
    }
  }
  return out;
}

Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<int, int>>& pairs) {
  const int ra = a.rank(), rb = b.rank();
  std::vector<bool> used_a(static_cast<size_t>(ra), false), used_b(static_cast<size_t>(rb), false);
  for (const auto& [ia, ib] : pairs) {
    require(ia >= 0 && ia < ra && ib >= 0 && ib < rb, "contraction index out of range");
    require(!used_a[static_cast<size_t>(ia)] && !used_b[static_cast<size_t>(ib)], "contraction index repeated");
    require(a.dim(ia) == b.dim(ib), "contracted dimensions differ");
    used_a[static_cast<size_t>(ia)] = used_b[static_cast<size_t>(ib)] = true;
  }

  // Move contracted indices of a to the back, of b to the front, fuse into
  // matrices and hand the product to Eigen.
  std::vector<int> order_a, order_b;
  std::vector<int64_t> free_dims;
  int64_t rows = 1, cols = 1, inner = 1;
  for (int k = 0; k < ra; ++k)
    if (!used_a[static_cast<size_t>(k)]) {
      order_a.push_back(k);
      rows *= a.dim(k);
      free_dims.push_back(a.dim(k));
    }
  for (const auto& [ia, ib] : pairs) {
    (void)ib;
    order_a.push_back(ia);
    inner *= a.dim(ia);
  }
  for (const auto& [ia, ib] : pairs) {
    (void)ia;
    order_b.push_back(ib);
  }
  for (int k = 0; k < rb; ++k)
    if (!used_b[static_cast<size_t>(k)]) {
      order_b.push_back(k);
      cols *= b.dim(k);
      free_dims.push_back(b.dim(k));
    }

  Tensor pa = permute(a, order_a);
  Tensor pb = permute(b, order_b);
  Eigen::Map<const RowMat> ma(pa.data(), rows, inner);
  Eigen::Map<const RowMat> mb(pb.data(), inner, cols);
  RowMat mc = ma * mb;

  if (free_dims.empty()) free_dims.push_back(1);  // full contraction -> scalar tensor
  Tensor out(free_dims);
  std::copy(mc.data(), mc.data() + mc.size(), out.data());
  return out;
}

Tensor fuse(const Tensor& t, const std::vector<std::vector<int>>& groups) {
  const int r = t.rank();
  std::vector<int> flat_order;
  std::vector<int64_t> new_dims;
  std::vector<bool> seen(static_cast<size_t>(r), false);
  for (const auto& g : groups) {
    require(!g.empty(), "empty fuse group");
    int64_t d = 1;
    for (int k : g) {
      require(k >= 0 && k < r && !seen[static_cast<size_t>(k)], "fuse groups must partition the indices");
      seen[static_cast<size_t>(k)] = true;
      flat_order.push_back(k);
      d *= t.dim(k);
    }
    new_dims.push_back(d);
  }
  require(static_cast<int>(flat_order.size()) == r, "fuse groups must cover all indices");
  Tensor p = permute(t, flat_order);
  return reshape(p, new_dims);
}

Tensor reshape(const Tensor& t, std::vector<int64_t> dims) {
  require(checked_product(dims) == t.size(), "reshape size mismatch");
  return Tensor(std::move(dims), t.entries());
}

Tensor conj(const Tensor& t) {
  Tensor out = t;
  for (int64_t i = 0; i < out.size(); ++i) out[i] = std::conj(out[i]);
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require(a.dims() == b.dims(), "add: shape mismatch");
  Tensor out = a;
  for (int64_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Tensor scale(const Tensor& t, cplx factor) {
  Tensor out = t;
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= factor;
  return out;
}

cplx overlap(const Tensor& a, const Tensor& b) {
  require(a.size() == b.size(), "overlap: size mismatch");
  cplx s = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double distance(const Tensor& a, const Tensor& b) {
  require(a.size() == b.size(), "distance: size mismatch");
  double s = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

Tensor outer(const Tensor& a, const Tensor& b) {
  std::vector<int64_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  Tensor out(dims);
  const int64_t nb = b.size();
  for (int64_t i = 0; i < a.size(); ++i)
    for (int64_t j = 0; j < nb; ++j) out[i * nb + j] = a[i] * b[j];
  return out;
}

}  // namespace tnet
