#pragma once

#include <cstdint>
#include <vector>

#include "linalg.hpp"
#include "tensor.hpp"

namespace tnet {

// Nearest-neighbour Hamiltonian H = sum_l sum_q g_q Theta_q^[l]
//                                 + sum_l sum_p h_p ThetaL_p^[l] ThetaR_p^[l+1].
// two_site[b] couples sites (b, b+1); with periodic boundary the extra entry
// two_site[L-1] couples sites (L-1, 0).
struct NnHamiltonian {
  enum class Boundary { open, periodic };
  struct OneSite {
    double g;
    Tensor op;  // (d, d)
  };
  struct TwoSite {
    double h;
    Tensor left;   // (d, d), acts on the lower site of the bond
    Tensor right;  // (d, d), acts on the upper site
  };

  int length = 0;
  int64_t phys_dim = 0;
  Boundary boundary = Boundary::open;
  std::vector<std::vector<OneSite>> one_site;  // size L
  std::vector<std::vector<TwoSite>> two_site;  // size L-1 (open) or L (periodic)

  int bond_count() const {
    return boundary == Boundary::open ? length - 1 : length;
  }
};

void validate(const NnHamiltonian& h);

struct ModelSpec {
  enum class Name { tfim, xxz, heisenberg, custom };
  Name name = Name::tfim;
  int length = 2;
  double coupling = 1.0;  // J
  double field = 0.0;     // transverse field (tfim)
  double delta = 0.0;     // anisotropy (xxz)
  NnHamiltonian::Boundary boundary = NnHamiltonian::Boundary::open;
};

// Conventions: tfim = -J sum sx sx - h sum sz; heisenberg = J sum (sx sx +
// sy sy + sz sz); xxz = J sum (sx sx + sy sy + delta sz sz).
NnHamiltonian build_hamiltonian(const ModelSpec& spec);

Tensor pauli_x();
Tensor pauli_y();
Tensor pauli_z();

// Dense d^L x d^L assembly; guarded to d^L <= 4096.
Mat dense_hamiltonian(const NnHamiltonian& h);

// Max-modulus entry of H - H^dagger at dense scale (same guard as above).
double hermiticity_residual(const NnHamiltonian& h);

// Matrix-free action on a d^L state vector (site 0 most significant digit).
Vec apply_hamiltonian(const NnHamiltonian& h, const Vec& v);

struct EdResult {
  double energy = 0.0;
  Vec state;  // d^L entries; in sector runs, zero outside the sector
};

// Lowest eigenpair, dense below 2048 states and Lanczos above; d^L <= 2^20.
EdResult ed_ground(const NnHamiltonian& h);

// Ground state restricted to the charge sector sum_l q(s_l) = total, where
// q(s) = site_charges[s].
EdResult ed_ground_sector(const NnHamiltonian& h, const std::vector<int>& site_charges,
                          int total);

}  // namespace tnet
