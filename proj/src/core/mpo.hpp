#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "mps.hpp"
#include "tensor.hpp"

namespace tnet {

// Matrix product operator. Site tensor l has indices
// (D_{l}, d_out, d_in, D_{l+1}); edge bonds are 1 unless boundary vectors are
// supplied, in which case the operator is (b0| O^[0] ... O^[L-1] |bL).
struct Mpo {
  std::vector<Tensor> sites;
  std::optional<Vec> left_boundary;   // (b0|, length D_0
  std::optional<Vec> right_boundary;  // |bL), length D_L

  int length() const { return static_cast<int>(sites.size()); }
  int64_t out_dim(int l) const { return sites[static_cast<size_t>(l)].dim(1); }
  int64_t in_dim(int l) const { return sites[static_cast<size_t>(l)].dim(2); }
};

void validate(const Mpo& op);

Mpo identity_mpo(int length, int64_t d);

// O|psi>, exact bond D_A * D_O, then recompressed bond-by-bond (one
// left-to-right and one right-to-left truncating sweep). Returns the state
// with its physical norm (no renormalization) and the total relative weight
// discarded across all truncations. max_bond < 0 leaves bonds unbounded;
// cutoff 0 keeps every nonzero singular value.
std::pair<Mps, double> apply(const Mpo& op, const Mps& mps, int64_t max_bond = -1,
                             double cutoff = 0.0);

// Diagonal correlator-product operator. tables[r-1][j] is the (d, d) factor
// coupling sites (j, j+r), r = 1..tables.size(); tables[r-1].size() must be
// length - r. Amplitudes are multiplied by the product of all factors.
// Interior bonds are exactly d^range wide.
Mpo from_jastrow(const std::vector<std::vector<Tensor>>& tables, int length, int64_t d);

// Same factor table replicated at every position of each range.
Mpo from_jastrow_uniform(const std::vector<Tensor>& per_range, int length, int64_t d);

// Bipartition entropy ceiling, in bits, of a range-l correlator product
// applied to a product state: l * log2(d).
double entanglement_bound_jastrow(int range, int64_t d);

// Dense (d_out^L, d_in^L) matrix; guarded to 2^20 entries.
Mat to_dense_matrix(const Mpo& op);

void save_mpo(const Mpo& op, const std::string& dir);
Mpo load_mpo(const std::string& dir);

}  // namespace tnet
