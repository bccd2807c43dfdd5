#pragma once

#include <string>
#include <vector>

#include "mpo.hpp"
#include "mps.hpp"
#include "network.hpp"

namespace tnet {

// A set of one-body orbitals phi_alpha(l), one row per orbital.
struct OrbitalSet {
  int length = 0;
  std::vector<std::vector<cplx>> orbitals;

  int count() const { return static_cast<int>(orbitals.size()); }
};

void validate(const OrbitalSet& orbs);

// max |sum_l phi_a(l) conj(phi_b(l)) - delta_ab| over all pairs.
double orthonormality_residual(const OrbitalSet& orbs);

OrbitalSet load_orbitals(const std::string& path);
void save_orbitals(const OrbitalSet& orbs, const std::string& path);

// |0...0> as a bond-1 MPS.
Mps vacuum_mps(int length);

// D = 2 operator for sum_l phi(l) c_l^dagger with the exchange string of the
// chosen statistics on everything left of the creation site: sigma^z for
// fermions, none for spin (hard-core boson), exp(i*phase*sigma^z) for anyons.
// activated = false flips the left boundary so the operator is the identity.
Mpo creation_mpo(const std::vector<cplx>& orbital,
                 Statistics statistics = Statistics::fermion, double anyon_phase = 0.0,
                 bool activated = true);

// Filled-orbital state c~_1^dag ... c~_N^dag |vacuum> built by stacking
// creation operators right-to-left; exact, bond dimension <= 2^N.
Mps slater_mps(const OrbitalSet& orbs);

// Von Neumann entropy in bits across the middle cut of slater_mps(orbs).
double slater_half_chain_entropy(const OrbitalSet& orbs);

enum class CiVariant { standard, cheap };

// alpha * c~_1^dag c~_2^dag + beta * c~_3^dag c~_4^dag from four orbital
// rows. The standard variant is the bond-8 block-diagonal sum of stacked
// pairs; the cheap variant is the bond-6 form, equivalent on the vacuum.
Mpo ci_two_plus_two(const OrbitalSet& four, cplx alpha, cplx beta, CiVariant variant);

}  // namespace tnet
