#include "fermion.hpp"

#include <cmath>
#include <complex>

#include "error.hpp"
#include "io.hpp"

namespace tnet {

namespace {

// Site block of the creation operator, homogeneous in l up to phi(l):
// pass-through identity right of the creation site (bond 0), the statistics
// string left of it (bond 1), and the creation transition between them.
Tensor creation_site(cplx phi, Statistics statistics, double anyon_phase) {
  Tensor t({2, 2, 2, 2});
  t.set({0, 0, 0, 0}, 1.0);
  t.set({1, 0, 0, 1}, 1.0);
  cplx up = 1.0, down = 1.0;
  switch (statistics) {
    case Statistics::spin: break;
    case Statistics::fermion: down = -1.0; break;
    case Statistics::anyon:
      up = std::polar(1.0, anyon_phase);
      down = std::polar(1.0, -anyon_phase);
      break;
  }
  t.set({0, 1, 1, 0}, up);
  t.set({1, 1, 1, 1}, down);
  t.set({1, 1, 0, 0}, phi);
  return t;
}

// Site-local composition outer(inner(.)): physical indices chained, bonds
// paired with the outer factor on the major digit.
Tensor compose_sites(const Tensor& outer_site, const Tensor& inner_site) {
  Tensor t = contract(outer_site, inner_site, {{2, 1}});
  // (bo_l, s_out, bo_r, bi_l, s_in, bi_r) -> (bo_l, bi_l, s_out, s_in, bo_r, bi_r)
  t = permute(t, {0, 3, 1, 4, 2, 5});
  return fuse(t, {{0, 1}, {2}, {3}, {4, 5}});
}

}  // namespace

void validate(const OrbitalSet& orbs) {
  if (orbs.length < 1) fail_invalid("orbital set: length must be positive");
  for (const auto& row : orbs.orbitals) {
    if (static_cast<int>(row.size()) != orbs.length)
      fail_invalid("orbital set: every orbital needs exactly one amplitude per site");
    for (cplx v : row)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        fail_invalid("orbital set: amplitudes must be finite");
  }
}

double orthonormality_residual(const OrbitalSet& orbs) {
  validate(orbs);
  double worst = 0.0;
  for (int a = 0; a < orbs.count(); ++a)
    for (int b = 0; b < orbs.count(); ++b) {
      cplx g = 0.0;
      for (int l = 0; l < orbs.length; ++l)
        g += orbs.orbitals[static_cast<size_t>(a)][static_cast<size_t>(l)] *
             std::conj(orbs.orbitals[static_cast<size_t>(b)][static_cast<size_t>(l)]);
      worst = std::max(worst, std::abs(g - (a == b ? cplx(1.0) : cplx(0.0))));
    }
  return worst;
}

OrbitalSet load_orbitals(const std::string& path) {
  OrbitalSet orbs;
  orbs.orbitals = load_orbitals_csv(path);
  if (orbs.orbitals.empty()) fail_io("orbital file " + path + " has no rows");
  orbs.length = static_cast<int>(orbs.orbitals.front().size());
  validate(orbs);
  return orbs;
}

void save_orbitals(const OrbitalSet& orbs, const std::string& path) {
  validate(orbs);
  save_orbitals_csv(orbs.orbitals, path);
}

Mps vacuum_mps(int length) {
  require(length >= 1, "vacuum: length must be positive");
  Mps mps;
  Tensor site({1, 2, 1});
  site.set({0, 0, 0}, 1.0);
  mps.sites.assign(static_cast<size_t>(length), site);
  mps.gauge_marks.assign(static_cast<size_t>(length), GaugeMark::right);
  mps.gauge_marks[0] = GaugeMark::center;
  return mps;
}

Mpo creation_mpo(const std::vector<cplx>& orbital, Statistics statistics,
                 double anyon_phase, bool activated) {
  require(!orbital.empty(), "creation operator: orbital must not be empty");
  Mpo op;
  for (cplx phi : orbital) {
    if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag()))
      fail_invalid("creation operator: orbital amplitudes must be finite");
    op.sites.push_back(creation_site(phi, statistics, anyon_phase));
  }
  Vec b0(2), bl(2);
  b0 << (activated ? 0.0 : 1.0), (activated ? 1.0 : 0.0);
  bl << 1.0, 0.0;
  op.left_boundary = b0;
  op.right_boundary = bl;
  return op;
}

Mps slater_mps(const OrbitalSet& orbs) {
  validate(orbs);
  const int n = orbs.count();
  if (n > orbs.length) fail_invalid("slater: more orbitals than sites");
  require(n <= 8, "slater: 2^N bond dimension guard allows at most 8 orbitals");
  const double residual = orthonormality_residual(orbs);
  if (residual > 1e-10)
    fail_invalid("slater: orbitals are not orthonormal (residual " +
                 std::to_string(residual) + ")");
  Mps psi = vacuum_mps(orbs.length);
  for (int m = n - 1; m >= 0; --m)
    psi = apply(creation_mpo(orbs.orbitals[static_cast<size_t>(m)]), psi, -1, 0.0).first;
  return psi;
}

double slater_half_chain_entropy(const OrbitalSet& orbs) {
  require(orbs.length >= 2, "half-chain entropy: need at least two sites");
  return schmidt(slater_mps(orbs), orbs.length / 2).entropy;
}

Mpo ci_two_plus_two(const OrbitalSet& four, cplx alpha, cplx beta, CiVariant variant) {
  validate(four);
  if (four.count() != 4)
    fail_invalid("configuration-interaction operator needs exactly four orbitals");
  const int length = four.length;
  Mpo op;

  if (variant == CiVariant::standard) {
    // Block-diagonal sum of the two stacked pairs; boundary vectors weight
    // the blocks by alpha and beta.
    for (int l = 0; l < length; ++l) {
      std::vector<Tensor> pair_sites;
      for (int p = 0; p < 2; ++p) {
        const cplx phi_outer = four.orbitals[static_cast<size_t>(2 * p)][static_cast<size_t>(l)];
        const cplx phi_inner =
            four.orbitals[static_cast<size_t>(2 * p + 1)][static_cast<size_t>(l)];
        pair_sites.push_back(
            compose_sites(creation_site(phi_outer, Statistics::fermion, 0.0),
                          creation_site(phi_inner, Statistics::fermion, 0.0)));
      }
      Tensor t({8, 2, 2, 8});
      for (int p = 0; p < 2; ++p)
        for (int64_t i = 0; i < 4; ++i)
          for (int64_t s = 0; s < 2; ++s)
            for (int64_t r = 0; r < 2; ++r)
              for (int64_t j = 0; j < 4; ++j)
                t.set({4 * p + i, s, r, 4 * p + j},
                      pair_sites[static_cast<size_t>(p)].at({i, s, r, j}));
      op.sites.push_back(t);
    }
    Vec b0(8), bl(8);
    b0.setZero();
    bl.setZero();
    b0(3) = 1.0;
    b0(7) = 1.0;
    bl(0) = alpha;
    bl(4) = beta;
    op.left_boundary = b0;
    op.right_boundary = bl;
    return op;
  }

  // Cheap bond-6 form: one creation funnels out of state 5, the second
  // funnels into state 0, with the exchange string on the diagonal between.
  const cplx ra = std::sqrt(alpha);
  const cplx rb = std::sqrt(beta);
  for (int l = 0; l < length; ++l) {
    const cplx p1 = four.orbitals[0][static_cast<size_t>(l)];
    const cplx p2 = four.orbitals[1][static_cast<size_t>(l)];
    const cplx p3 = four.orbitals[2][static_cast<size_t>(l)];
    const cplx p4 = four.orbitals[3][static_cast<size_t>(l)];
    Tensor t({6, 2, 2, 6});
    for (int64_t b = 0; b < 6; ++b) t.set({b, 0, 0, b}, 1.0);
    const double sign[6] = {1.0, -1.0, -1.0, -1.0, -1.0, 1.0};
    for (int64_t b = 0; b < 6; ++b) t.set({b, 1, 1, b}, sign[b]);
    t.set({1, 1, 0, 0}, ra * p1);
    t.set({2, 1, 0, 0}, rb * p3);
    t.set({3, 1, 0, 0}, rb * p4);
    t.set({4, 1, 0, 0}, ra * p2);
    t.set({5, 1, 0, 1}, -ra * p2);
    t.set({5, 1, 0, 2}, -rb * p4);
    t.set({5, 1, 0, 3}, rb * p3);
    t.set({5, 1, 0, 4}, ra * p1);
    op.sites.push_back(t);
  }
  Vec b0(6), bl(6);
  b0.setZero();
  bl.setZero();
  b0(5) = 1.0;
  bl(0) = 1.0;
  op.left_boundary = b0;
  op.right_boundary = bl;
  return op;
}

}  // namespace tnet
