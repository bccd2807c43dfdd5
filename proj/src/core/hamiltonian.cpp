#include "hamiltonian.hpp"

#include <cmath>
#include <random>

#include "error.hpp"

namespace tnet {

namespace {

int64_t pow_i64(int64_t base, int exp) {
  int64_t out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

void check_op(const Tensor& op, int64_t d, const char* what) {
  if (op.rank() != 2 || op.dim(0) != d || op.dim(1) != d)
    fail_invalid(std::string("hamiltonian: ") + what + " operator is not " +
                 std::to_string(d) + "x" + std::to_string(d));
}

// Applies a (d, d) operator to digit `site` of every basis index of v.
void apply_digit_op(const Tensor& op, double coeff, int site, int length, int64_t d,
                    const Vec& v, Vec& out) {
  const int64_t stride = pow_i64(d, length - 1 - site);
  const int64_t block = stride * d;
  for (int64_t base = 0; base < v.size(); base += block) {
    for (int64_t rest = 0; rest < stride; ++rest) {
      for (int64_t r = 0; r < d; ++r) {
        cplx acc = 0.0;
        for (int64_t s = 0; s < d; ++s)
          acc += op[r * d + s] * v(base + s * stride + rest);
        out(base + r * stride + rest) += coeff * acc;
      }
    }
  }
}

void apply_digit_pair(const Tensor& a, const Tensor& b, double coeff, int sa, int sb,
                      int length, int64_t d, const Vec& v, Vec& out) {
  const int64_t stra = pow_i64(d, length - 1 - sa);
  const int64_t strb = pow_i64(d, length - 1 - sb);
  for (int64_t n = 0; n < v.size(); ++n) {
    const int64_t da = (n / stra) % d;
    const int64_t db = (n / strb) % d;
    const cplx amp = v(n);
    if (amp == cplx(0.0)) continue;
    const int64_t stripped = n - da * stra - db * strb;
    for (int64_t ra = 0; ra < d; ++ra) {
      const cplx fa = a[ra * d + da];
      if (fa == cplx(0.0)) continue;
      for (int64_t rb = 0; rb < d; ++rb) {
        const cplx fb = b[rb * d + db];
        if (fb == cplx(0.0)) continue;
        out(stripped + ra * stra + rb * strb) += coeff * fa * fb * amp;
      }
    }
  }
}

}  // namespace

void validate(const NnHamiltonian& h) {
  require(h.length >= 2, "hamiltonian: length must be at least 2");
  require(h.phys_dim >= 2, "hamiltonian: physical dimension must be at least 2");
  require(static_cast<int>(h.one_site.size()) == h.length,
          "hamiltonian: one_site list length mismatch");
  require(static_cast<int>(h.two_site.size()) == h.bond_count(),
          "hamiltonian: two_site list length mismatch");
  for (const auto& terms : h.one_site)
    for (const auto& t : terms) check_op(t.op, h.phys_dim, "one-site");
  for (const auto& terms : h.two_site) {
    for (const auto& t : terms) {
      check_op(t.left, h.phys_dim, "bond left");
      check_op(t.right, h.phys_dim, "bond right");
    }
  }
  for (const auto& terms : h.one_site)
    for (const auto& t : terms)
      require(std::isfinite(t.g), "hamiltonian: non-finite coefficient");
  for (const auto& terms : h.two_site)
    for (const auto& t : terms)
      require(std::isfinite(t.h), "hamiltonian: non-finite coefficient");
}

Tensor pauli_x() {
  Tensor t({2, 2});
  t.set({0, 1}, 1.0);
  t.set({1, 0}, 1.0);
  return t;
}

Tensor pauli_y() {
  Tensor t({2, 2});
  t.set({0, 1}, cplx(0.0, -1.0));
  t.set({1, 0}, cplx(0.0, 1.0));
  return t;
}

Tensor pauli_z() {
  Tensor t({2, 2});
  t.set({0, 0}, 1.0);
  t.set({1, 1}, -1.0);
  return t;
}

NnHamiltonian build_hamiltonian(const ModelSpec& spec) {
  require(spec.length >= 2, "model: length must be at least 2");
  require(std::isfinite(spec.coupling) && std::isfinite(spec.field) &&
              std::isfinite(spec.delta),
          "model: couplings must be finite");
  NnHamiltonian h;
  h.length = spec.length;
  h.phys_dim = 2;
  h.boundary = spec.boundary;
  h.one_site.resize(static_cast<size_t>(spec.length));
  h.two_site.resize(static_cast<size_t>(h.bond_count()));
  switch (spec.name) {
    case ModelSpec::Name::tfim:
      for (auto& bond : h.two_site)
        bond.push_back({-spec.coupling, pauli_x(), pauli_x()});
      if (spec.field != 0.0)
        for (auto& site : h.one_site) site.push_back({-spec.field, pauli_z()});
      break;
    case ModelSpec::Name::heisenberg:
      for (auto& bond : h.two_site) {
        bond.push_back({spec.coupling, pauli_x(), pauli_x()});
        bond.push_back({spec.coupling, pauli_y(), pauli_y()});
        bond.push_back({spec.coupling, pauli_z(), pauli_z()});
      }
      break;
    case ModelSpec::Name::xxz:
      for (auto& bond : h.two_site) {
        bond.push_back({spec.coupling, pauli_x(), pauli_x()});
        bond.push_back({spec.coupling, pauli_y(), pauli_y()});
        bond.push_back({spec.coupling * spec.delta, pauli_z(), pauli_z()});
      }
      break;
    case ModelSpec::Name::custom:
      fail_invalid("model: custom models are assembled directly as term lists");
  }
  validate(h);
  return h;
}

Mat dense_hamiltonian(const NnHamiltonian& h) {
  validate(h);
  const int64_t dim = pow_i64(h.phys_dim, h.length);
  require(dim <= 4096, "dense_hamiltonian: dimension guard of 4096 states exceeded");
  Mat m = Mat::Zero(dim, dim);
  Vec unit = Vec::Zero(dim);
  for (int64_t c = 0; c < dim; ++c) {
    unit.setZero();
    unit(c) = 1.0;
    Vec col = apply_hamiltonian(h, unit);
    for (int64_t r = 0; r < dim; ++r) m(r, c) = col(r);
  }
  return m;
}

double hermiticity_residual(const NnHamiltonian& h) {
  Mat m = dense_hamiltonian(h);
  return matrix_inf_residual(m - m.adjoint());
}

Vec apply_hamiltonian(const NnHamiltonian& h, const Vec& v) {
  const int64_t dim = pow_i64(h.phys_dim, h.length);
  require(v.size() == dim, "apply_hamiltonian: state dimension mismatch");
  Vec out = Vec::Zero(dim);
  for (int l = 0; l < h.length; ++l)
    for (const auto& t : h.one_site[static_cast<size_t>(l)])
      apply_digit_op(t.op, t.g, l, h.length, h.phys_dim, v, out);
  for (int b = 0; b < h.bond_count(); ++b) {
    const int next = (b + 1) % h.length;
    for (const auto& t : h.two_site[static_cast<size_t>(b)])
      apply_digit_pair(t.left, t.right, t.h, b, next, h.length, h.phys_dim, v, out);
  }
  return out;
}

EdResult ed_ground(const NnHamiltonian& h) {
  validate(h);
  const int64_t dim = pow_i64(h.phys_dim, h.length);
  require(dim <= (int64_t{1} << 20), "ed_ground: state-space guard of 2^20 exceeded");
  EdResult out;
  if (dim <= 2048) {
    Mat m = Mat::Zero(dim, dim);
    Vec unit = Vec::Zero(dim);
    for (int64_t c = 0; c < dim; ++c) {
      unit.setZero();
      unit(c) = 1.0;
      Vec col = apply_hamiltonian(h, unit);
      for (int64_t r = 0; r < dim; ++r) m(r, c) = col(r);
    }
    EigH eig = eig_hermitian(m);
    out.energy = eig.values.front();
    out.state = eig.vectors.col(0);
    return out;
  }
  std::mt19937_64 rng(20260822);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec seed(dim);
  for (int64_t i = 0; i < dim; ++i) seed(i) = cplx(g(rng), g(rng));
  LowestPair pair = lowest_eigenpair(
      [&](const Vec& x) { return apply_hamiltonian(h, x); }, seed, 1e-12, 2000);
  if (!pair.converged) fail_numeric("ed_ground: iterative eigensolver did not converge");
  out.energy = pair.value;
  out.state = pair.vector;
  return out;
}

EdResult ed_ground_sector(const NnHamiltonian& h, const std::vector<int>& site_charges,
                          int total) {
  validate(h);
  require(static_cast<int64_t>(site_charges.size()) == h.phys_dim,
          "ed_ground_sector: one charge per local state required");
  const int64_t dim = pow_i64(h.phys_dim, h.length);
  require(dim <= (int64_t{1} << 20), "ed_ground_sector: state-space guard exceeded");

  std::vector<int64_t> basis;
  for (int64_t n = 0; n < dim; ++n) {
    int charge = 0;
    int64_t rest = n;
    for (int l = 0; l < h.length; ++l) {
      charge += site_charges[static_cast<size_t>(rest % h.phys_dim)];
      rest /= h.phys_dim;
    }
    if (charge == total) basis.push_back(n);
  }
  require(!basis.empty(), "ed_ground_sector: empty charge sector");
  const int64_t sdim = static_cast<int64_t>(basis.size());
  require(sdim <= 4096, "ed_ground_sector: sector guard of 4096 states exceeded");

  std::vector<int64_t> where(static_cast<size_t>(dim), -1);
  for (int64_t i = 0; i < sdim; ++i) where[static_cast<size_t>(basis[i])] = i;

  Mat m = Mat::Zero(sdim, sdim);
  Vec unit = Vec::Zero(dim);
  for (int64_t c = 0; c < sdim; ++c) {
    unit.setZero();
    unit(basis[static_cast<size_t>(c)]) = 1.0;
    Vec col = apply_hamiltonian(h, unit);
    for (int64_t n = 0; n < dim; ++n) {
      if (col(n) == cplx(0.0)) continue;
      const int64_t r = where[static_cast<size_t>(n)];
      if (r < 0)
        fail_invalid("ed_ground_sector: hamiltonian does not conserve the given charge");
      m(r, c) = col(n);
    }
  }
  EigH eig = eig_hermitian(m);
  EdResult out;
  out.energy = eig.values.front();
  out.state = Vec::Zero(dim);
  for (int64_t i = 0; i < sdim; ++i) out.state(basis[static_cast<size_t>(i)]) = eig.vectors(i, 0);
  return out;
}

}  // namespace tnet
