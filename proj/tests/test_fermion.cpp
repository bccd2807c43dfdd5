#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>

#include "core/error.hpp"
#include "core/fermion.hpp"
#include "oracle.hpp"

using tnet::CiVariant;
using tnet::cplx;
using tnet::Mpo;
using tnet::Mps;
using tnet::OrbitalSet;
using tnet::Statistics;
using tnet::Tensor;

namespace {

// c_k^dagger with the Jordan-Wigner string on sites < k; site 0 is the most
// significant digit of the dense index.
Tensor apply_creation_dense(const Tensor& state, int k) {
  const int length = state.rank();
  int64_t stride = 1;
  for (int m = k + 1; m < length; ++m) stride *= 2;
  Tensor out(state.dims());
  for (int64_t n = 0; n < state.size(); ++n) {
    if ((n / stride) % 2 != 0) continue;
    int occupied_left = 0;
    for (int m = 0; m < k; ++m) {
      int64_t s = n;
      for (int t = m + 1; t < length; ++t) s /= 2;
      occupied_left += static_cast<int>(s % 2);
    }
    const double sign = occupied_left % 2 == 0 ? 1.0 : -1.0;
    out[n + stride] += sign * state[n];
  }
  return out;
}

Tensor apply_orbital_dense(const Tensor& state, const std::vector<cplx>& phi) {
  Tensor out(state.dims());
  for (int k = 0; k < static_cast<int>(phi.size()); ++k) {
    Tensor piece = apply_creation_dense(state, k);
    for (int64_t n = 0; n < out.size(); ++n) out[n] += phi[static_cast<size_t>(k)] * piece[n];
  }
  return out;
}

std::vector<cplx> random_orbital(int length, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> phi;
  for (int l = 0; l < length; ++l) phi.emplace_back(g(rng), g(rng));
  return phi;
}

// Rows of an isometry's adjoint are orthonormal over the site index.
OrbitalSet random_orthonormal_orbitals(int length, int n, std::mt19937_64& rng) {
  Tensor iso = oracle::random_isometry(length, n, rng);
  OrbitalSet orbs;
  orbs.length = length;
  for (int a = 0; a < n; ++a) {
    std::vector<cplx> row;
    for (int l = 0; l < length; ++l) row.push_back(std::conj(iso.at({l, a})));
    orbs.orbitals.push_back(row);
  }
  return orbs;
}

OrbitalSet plane_waves(int length, int n) {
  OrbitalSet orbs;
  orbs.length = length;
  for (int a = 1; a <= n; ++a) {
    std::vector<cplx> row;
    for (int l = 0; l < length; ++l)
      row.push_back(std::polar(1.0 / std::sqrt(static_cast<double>(length)),
                               4.0 * std::numbers::pi * a * l / length));
    orbs.orbitals.push_back(row);
  }
  return orbs;
}

cplx dot(const Tensor& a, const Tensor& b) {
  cplx acc = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace

TEST_SUITE("fermion") {
  TEST_CASE("localized orbital creates a single particle at its site") {
    std::vector<cplx> phi(5, 0.0);
    phi[2] = 1.0;
    auto [state, w] = tnet::apply(tnet::creation_mpo(phi), tnet::vacuum_mps(5));
    CHECK(w <= 1e-14);
    Tensor dense = tnet::to_dense(state);
    CHECK(std::abs(dense.at({0, 0, 1, 0, 0}) - cplx(1.0)) < 1e-13);
    CHECK(dense.norm() == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("deactivated boundary turns the operator into the identity") {
    std::mt19937_64 rng(111);
    Mps mps = tnet::random_mps(6, 2, 5, rng);
    Mpo off = tnet::creation_mpo(random_orbital(6, rng), Statistics::fermion, 0.0, false);
    auto [out, w] = tnet::apply(off, mps);
    CHECK(std::abs(tnet::overlap(out, mps) - cplx(1.0)) < 1e-12);
  }

  TEST_CASE("delocalized creation matches the dense second-quantization oracle") {
    std::mt19937_64 rng(112);
    std::vector<cplx> phi = random_orbital(8, rng);

    Tensor vac({2, 2, 2, 2, 2, 2, 2, 2});
    vac.set({0, 0, 0, 0, 0, 0, 0, 0}, 1.0);
    auto [on_vac, w1] = tnet::apply(tnet::creation_mpo(phi), tnet::vacuum_mps(8));
    CHECK(tnet::distance(tnet::to_dense(on_vac), apply_orbital_dense(vac, phi)) < 1e-12);

    // Random occupied states exercise the string signs.
    Mps mps = tnet::random_mps(8, 2, 5, rng);
    auto [on_state, w2] = tnet::apply(tnet::creation_mpo(phi), mps);
    CHECK(tnet::distance(tnet::to_dense(on_state),
                         apply_orbital_dense(tnet::to_dense(mps), phi)) < 1e-11);
  }

  TEST_CASE("statistics variants differ exactly by the string factor") {
    // Create at site 2 on a state whose site 0 is occupied.
    Tensor occ({2, 2, 2});
    occ.set({1, 0, 0}, 1.0);
    Mps base = tnet::from_dense(occ);
    std::vector<cplx> phi(3, 0.0);
    phi[2] = 1.0;

    Tensor fermi = tnet::to_dense(
        tnet::apply(tnet::creation_mpo(phi, Statistics::fermion), base).first);
    CHECK(std::abs(fermi.at({1, 0, 1}) - cplx(-1.0)) < 1e-13);

    Tensor bose = tnet::to_dense(
        tnet::apply(tnet::creation_mpo(phi, Statistics::spin), base).first);
    CHECK(std::abs(bose.at({1, 0, 1}) - cplx(1.0)) < 1e-13);

    Tensor pi_anyon = tnet::to_dense(
        tnet::apply(tnet::creation_mpo(phi, Statistics::anyon, std::numbers::pi), base)
            .first);
    CHECK(tnet::distance(pi_anyon, fermi) < 1e-12);

    const double theta = 0.7;
    Tensor anyon = tnet::to_dense(
        tnet::apply(tnet::creation_mpo(phi, Statistics::anyon, theta), base).first);
    CHECK(std::abs(anyon.at({1, 0, 1}) - std::polar(1.0, -theta)) < 1e-13);
  }

  TEST_CASE("creation operators anticommute and are nilpotent") {
    std::mt19937_64 rng(113);
    std::vector<cplx> a = random_orbital(7, rng);
    std::vector<cplx> b = random_orbital(7, rng);
    Mps vac = tnet::vacuum_mps(7);

    Mps ab = tnet::apply(tnet::creation_mpo(a),
                         tnet::apply(tnet::creation_mpo(b), vac).first)
                 .first;
    Mps ba = tnet::apply(tnet::creation_mpo(b),
                         tnet::apply(tnet::creation_mpo(a), vac).first)
                 .first;
    const cplx ratio = dot(tnet::to_dense(ab), tnet::to_dense(ba)) /
                       dot(tnet::to_dense(ab), tnet::to_dense(ab));
    CHECK(std::abs(ratio - cplx(-1.0)) < 1e-11);

    Mps twice = tnet::apply(tnet::creation_mpo(a),
                            tnet::apply(tnet::creation_mpo(a), vac).first)
                    .first;
    CHECK(tnet::to_dense(twice).norm() <= 1e-10);
  }

  TEST_CASE("empty orbital set gives the product vacuum") {
    OrbitalSet none;
    none.length = 5;
    Mps psi = tnet::slater_mps(none);
    Tensor dense = tnet::to_dense(psi);
    CHECK(std::abs(dense.at({0, 0, 0, 0, 0}) - cplx(1.0)) < 1e-14);
    for (int b = 1; b < 5; ++b) CHECK(psi.bond_dim(b) == 1);
  }

  TEST_CASE("two filled orbitals reproduce the explicit determinant") {
    std::mt19937_64 rng(114);
    OrbitalSet orbs = random_orthonormal_orbitals(6, 2, rng);
    Tensor dense = tnet::to_dense(tnet::slater_mps(orbs));
    for (int l1 = 0; l1 < 6; ++l1)
      for (int l2 = l1 + 1; l2 < 6; ++l2) {
        std::vector<int64_t> idx(6, 0);
        idx[static_cast<size_t>(l1)] = 1;
        idx[static_cast<size_t>(l2)] = 1;
        const cplx want =
            orbs.orbitals[0][static_cast<size_t>(l1)] * orbs.orbitals[1][static_cast<size_t>(l2)] -
            orbs.orbitals[0][static_cast<size_t>(l2)] * orbs.orbitals[1][static_cast<size_t>(l1)];
        CHECK(std::abs(dense.at({idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]}) - want) <
              1e-12);
      }
  }

  TEST_CASE("three filled orbitals match the dense determinant expansion") {
    std::mt19937_64 rng(115);
    OrbitalSet orbs = random_orthonormal_orbitals(8, 3, rng);
    Mps psi = tnet::slater_mps(orbs);
    for (int b = 1; b < 8; ++b) CHECK(psi.bond_dim(b) <= 8);

    Tensor dense = tnet::to_dense(psi);
    CHECK(dense.norm() == doctest::Approx(1.0).epsilon(1e-11));
    double worst = 0.0;
    for (int64_t n = 0; n < dense.size(); ++n) {
      std::vector<int> filled;
      for (int l = 0; l < 8; ++l)
        if ((n >> (7 - l)) & 1) filled.push_back(l);
      cplx want = 0.0;
      if (filled.size() == 3) {
        Eigen::Matrix3cd m;
        for (int a = 0; a < 3; ++a)
          for (int k = 0; k < 3; ++k)
            m(a, k) = orbs.orbitals[static_cast<size_t>(a)]
                                   [static_cast<size_t>(filled[static_cast<size_t>(k)])];
        want = m.determinant();
      }
      worst = std::max(worst, std::abs(dense[n] - want));
    }
    CHECK(worst < 1e-11);
  }

  TEST_CASE("filled-orbital states carry a sharp particle number") {
    std::mt19937_64 rng(116);
    OrbitalSet orbs = random_orthonormal_orbitals(8, 3, rng);
    Tensor dense = tnet::to_dense(tnet::slater_mps(orbs));
    double mean = 0.0, second = 0.0;
    for (int64_t n = 0; n < dense.size(); ++n) {
      const double p = std::norm(dense[n]);
      double count = 0.0;
      for (int l = 0; l < 8; ++l) count += static_cast<double>((n >> l) & 1);
      mean += p * count;
      second += p * count * count;
    }
    CHECK(mean == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(second - mean * mean <= 1e-10);
  }

  TEST_CASE("orthonormality is enforced for filled-orbital states") {
    std::mt19937_64 rng(117);
    OrbitalSet bad;
    bad.length = 6;
    bad.orbitals.push_back(random_orbital(6, rng));
    CHECK(tnet::orthonormality_residual(bad) > 1e-10);
    CHECK_THROWS_WITH_AS(tnet::slater_mps(bad), doctest::Contains("orthonormal"),
                         tnet::Error);
  }

  TEST_CASE("half-chain entropy: localized, plane-wave, single-orbital cases") {
    // Both particles pinned in the left half: no entanglement across the cut.
    OrbitalSet pinned;
    pinned.length = 6;
    std::vector<cplx> p1(6, 0.0), p2(6, 0.0);
    p1[0] = 1.0;
    p2[2] = 1.0;
    pinned.orbitals = {p1, p2};
    CHECK(tnet::slater_half_chain_entropy(pinned) <= 1e-9);

    // Doubly-periodic plane waves saturate the bound: exactly N bits.
    CHECK(tnet::orthonormality_residual(plane_waves(8, 2)) <= 1e-12);
    CHECK(tnet::slater_half_chain_entropy(plane_waves(8, 2)) ==
          doctest::Approx(2.0).epsilon(1e-9));

    // One delocalized orbital: binary entropy of the left weight.
    std::mt19937_64 rng(118);
    OrbitalSet one = random_orthonormal_orbitals(8, 1, rng);
    double p = 0.0;
    for (int l = 0; l < 4; ++l) p += std::norm(one.orbitals[0][static_cast<size_t>(l)]);
    const double binary = -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    CHECK(tnet::slater_half_chain_entropy(one) == doctest::Approx(binary).epsilon(1e-9));
    CHECK(tnet::slater_half_chain_entropy(one) ==
          doctest::Approx(oracle::entropy_bits(tnet::to_dense(tnet::slater_mps(one)),
                                               {0, 1, 2, 3}))
              .epsilon(1e-9));
  }

  TEST_CASE("pair operator with one term equals the stacked product") {
    std::mt19937_64 rng(119);
    OrbitalSet four;
    four.length = 7;
    for (int a = 0; a < 4; ++a) four.orbitals.push_back(random_orbital(7, rng));
    const cplx alpha(0.8, -0.6);

    for (CiVariant variant : {CiVariant::standard, CiVariant::cheap}) {
      Mpo ci = tnet::ci_two_plus_two(four, alpha, 0.0, variant);
      Mps vac = tnet::vacuum_mps(7);
      Tensor got = tnet::to_dense(tnet::apply(ci, vac).first);
      Tensor want = tnet::to_dense(
          tnet::apply(tnet::creation_mpo(four.orbitals[0]),
                      tnet::apply(tnet::creation_mpo(four.orbitals[1]), vac).first)
              .first);
      for (int64_t i = 0; i < want.size(); ++i) want[i] *= alpha;
      CHECK(tnet::distance(got, want) < 1e-12);
    }
  }

  TEST_CASE("standard and cheap pair operators agree on the vacuum") {
    std::mt19937_64 rng(120);
    OrbitalSet four;
    four.length = 8;
    for (int a = 0; a < 4; ++a) four.orbitals.push_back(random_orbital(8, rng));
    const cplx alpha(0.3, 1.1), beta(-0.7, 0.2);
    Mps vac = tnet::vacuum_mps(8);
    Tensor standard = tnet::to_dense(
        tnet::apply(tnet::ci_two_plus_two(four, alpha, beta, CiVariant::standard), vac)
            .first);
    Tensor cheap = tnet::to_dense(
        tnet::apply(tnet::ci_two_plus_two(four, alpha, beta, CiVariant::cheap), vac).first);
    CHECK(tnet::distance(standard, cheap) < 1e-11);

    CHECK(tnet::ci_two_plus_two(four, alpha, beta, CiVariant::standard).sites[3].dim(0) == 8);
    CHECK(tnet::ci_two_plus_two(four, alpha, beta, CiVariant::cheap).sites[3].dim(0) == 6);
  }

  TEST_CASE("pair operator amplitudes match the dense double sum") {
    std::mt19937_64 rng(121);
    OrbitalSet four;
    four.length = 8;
    for (int a = 0; a < 4; ++a) four.orbitals.push_back(random_orbital(8, rng));
    const cplx alpha(0.9, 0.1), beta(0.4, -0.5);

    Tensor vac({2, 2, 2, 2, 2, 2, 2, 2});
    vac.set({0, 0, 0, 0, 0, 0, 0, 0}, 1.0);
    Tensor first = apply_orbital_dense(apply_orbital_dense(vac, four.orbitals[1]),
                                       four.orbitals[0]);
    Tensor second = apply_orbital_dense(apply_orbital_dense(vac, four.orbitals[3]),
                                        four.orbitals[2]);
    Tensor want(vac.dims());
    for (int64_t n = 0; n < want.size(); ++n)
      want[n] = alpha * first[n] + beta * second[n];

    for (CiVariant variant : {CiVariant::standard, CiVariant::cheap}) {
      Tensor got = tnet::to_dense(
          tnet::apply(tnet::ci_two_plus_two(four, alpha, beta, variant),
                      tnet::vacuum_mps(8))
              .first);
      CHECK(tnet::distance(got, want) < 1e-11);
    }
  }

  TEST_CASE("pair operator rejects malformed orbital sets") {
    std::mt19937_64 rng(122);
    OrbitalSet three;
    three.length = 5;
    for (int a = 0; a < 3; ++a) three.orbitals.push_back(random_orbital(5, rng));
    CHECK_THROWS_AS(tnet::ci_two_plus_two(three, 1.0, 1.0, CiVariant::standard),
                    tnet::Error);

    OrbitalSet ragged;
    ragged.length = 5;
    for (int a = 0; a < 4; ++a) ragged.orbitals.push_back(random_orbital(5, rng));
    ragged.orbitals[2].pop_back();
    CHECK_THROWS_AS(tnet::ci_two_plus_two(ragged, 1.0, 1.0, CiVariant::cheap), tnet::Error);
  }

  TEST_CASE("orbital files round-trip through CSV") {
    std::mt19937_64 rng(123);
    OrbitalSet orbs = random_orthonormal_orbitals(6, 2, rng);
    const std::string path =
        (std::filesystem::temp_directory_path() / "tnet_orbitals_test.csv").string();
    tnet::save_orbitals(orbs, path);
    OrbitalSet back = tnet::load_orbitals(path);
    REQUIRE(back.length == orbs.length);
    REQUIRE(back.count() == orbs.count());
    for (int a = 0; a < 2; ++a)
      for (int l = 0; l < 6; ++l)
        CHECK(std::abs(back.orbitals[static_cast<size_t>(a)][static_cast<size_t>(l)] -
                       orbs.orbitals[static_cast<size_t>(a)][static_cast<size_t>(l)]) <
              1e-12);
    std::filesystem::remove(path);
  }
}
