#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hamiltonian.hpp"
#include "tensor.hpp"

namespace tnet {

enum class GaugeMark { left, right, center, unknown };
enum class Direction { left, right };

// Open-boundary matrix product state.  Site l holds a tensor of shape
// (D_l, d_l, D_{l+1}) with D_0 = D_L = 1; bond b in [1, L-1] separates
// sites b-1 and b.
struct Mps {
  std::vector<Tensor> sites;
  std::vector<GaugeMark> gauge_marks;

  int length() const { return static_cast<int>(sites.size()); }
  int64_t phys_dim(int l) const { return sites[static_cast<size_t>(l)].dim(1); }
  int64_t bond_dim(int b) const {
    return b == 0 ? sites.front().dim(0) : sites[static_cast<size_t>(b - 1)].dim(2);
  }
};

struct SchmidtData {
  int bond = 0;
  std::vector<double> values;  // nonincreasing, sum of squares 1
  double entropy = 0.0;        // bits
};

void validate(const Mps& mps);

// Structural gauge checks on one site tensor.
bool left_gauged(const Tensor& site, double tol = 1e-10);
bool right_gauged(const Tensor& site, double tol = 1e-10);

Mps random_mps(int length, int64_t d, int64_t max_bond, std::mt19937_64& rng);

// Exact sequential-SVD factorization of a dense state (rank-L tensor, one
// index per site).  cutoff is relative; 0 keeps everything above the
// numerical floor.
Mps from_dense(const Tensor& state, double cutoff = 0.0);

Tensor to_dense(const Mps& mps);

// Amplitude of one computational-basis configuration.
cplx amplitude(const Mps& mps, const std::vector<int64_t>& config);

cplx overlap(const Mps& bra, const Mps& ket);
double norm(const Mps& mps);

// Full left- or right-canonical form: minimal bond dimensions, norm 1.
Mps canonicalize(const Mps& mps, Direction direction);

// Sites < l1 left-gauged, sites > l2 right-gauged, the tensor at l1 carries
// the whole norm (which is preserved, not reset to 1).
Mps mix_gauge(const Mps& mps, int l1, int l2);

SchmidtData schmidt(const Mps& mps, int bond);

// Keeps the max_keep largest Schmidt values across `bond`, renormalizes the
// survivors, and returns the normalized state plus the discarded weight.
std::pair<Mps, double> truncate(const Mps& mps, int bond, int64_t max_keep);

// <Psi| ox_l ops[l] |Psi> by an ordered transfer-matrix sweep.
cplx expval_product(const Mps& mps, const std::vector<Tensor>& ops);

// Expectation of an operator on the window [l1, l2] (matrix of size d^w),
// evaluated inside the window only; normalized by the state norm.
cplx expval_local(const Mps& mps, const Tensor& op, int l1, int l2);

// Energy of a nearest-neighbour Hamiltonian in one right-to-left sweep of
// accumulator vectors; cost linear in L.
double expval_nn_hamiltonian(const Mps& mps, const NnHamiltonian& h);

void save_mps(const Mps& mps, const std::string& dir);
Mps load_mps(const std::string& dir);

}  // namespace tnet
