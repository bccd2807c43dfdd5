#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

namespace tnet {

using cplx = std::complex<double>;

// Dense multi-index array of complex doubles.
// Linearization is fixed once and for all: the LAST index runs fastest
// (row-major). fuse/split round trips and the binary dump format rely on it.
// Tensors are value types; operations allocate fresh outputs, so sharing a
// tensor across threads is safe.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> dims);
  Tensor(std::vector<int64_t> dims, std::vector<cplx> entries);

  static Tensor scalar(cplx v);
  // d x d identity matrix.
  static Tensor identity(int64_t d);

  int rank() const { return static_cast<int>(dims_.size()); }
  const std::vector<int64_t>& dims() const { return dims_; }
  int64_t dim(int k) const { return dims_.at(static_cast<size_t>(k)); }
  int64_t size() const { return static_cast<int64_t>(entries_.size()); }

  const cplx* data() const { return entries_.data(); }
  cplx* data() { return entries_.data(); }
  const std::vector<cplx>& entries() const { return entries_; }

  cplx operator[](int64_t flat) const { return entries_[static_cast<size_t>(flat)]; }
  cplx& operator[](int64_t flat) { return entries_[static_cast<size_t>(flat)]; }

  int64_t flat_index(const std::vector<int64_t>& idx) const;
  cplx at(std::initializer_list<int64_t> idx) const;
  void set(std::initializer_list<int64_t> idx, cplx v);

  double norm() const;  // Frobenius

private:
  std::vector<int64_t> dims_;
  std::vector<cplx> entries_;
};

// Pairwise contraction over the given (index-of-a, index-of-b) pairs.
// Result indices: unpaired indices of a in order, then unpaired of b.
Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<int, int>>& pairs);

// Entry rearrangement: result index k is input index order[k].
Tensor permute(const Tensor& t, const std::vector<int>& order);

// Merge contiguous index groups (given in input order, covering all indices)
// into single composite indices. The inverse is split().
Tensor fuse(const Tensor& t, const std::vector<std::vector<int>>& groups);

// Pure metadata reshape; product of dims must match.
Tensor reshape(const Tensor& t, std::vector<int64_t> dims);

Tensor conj(const Tensor& t);
Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& t, cplx factor);
cplx overlap(const Tensor& a, const Tensor& b);  // sum conj(a)*b over all entries
double distance(const Tensor& a, const Tensor& b);

// Outer (tensor) product: indices of a then indices of b.
Tensor outer(const Tensor& a, const Tensor& b);

}  // namespace tnet
