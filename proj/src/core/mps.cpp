#include "mps.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "error.hpp"
#include "io.hpp"

namespace tnet {

namespace {

// U Sigma as one tensor: left isometry with columns scaled by the values.
Tensor weighted_left(const SvdResult& svd) {
  Tensor t = svd.left_isometry;
  const int64_t k = t.dim(t.rank() - 1);
  const int64_t rows = t.size() / k;
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < k; ++j)
      t.data()[i * k + j] *= svd.singular_values[static_cast<size_t>(j)];
  return t;
}

// Sigma Vh as one tensor: right isometry with rows scaled by the values.
Tensor weighted_right(const SvdResult& svd) {
  Tensor t = svd.right_isometry;
  const int64_t k = t.dim(0);
  const int64_t block = t.size() / k;
  for (int64_t i = 0; i < k; ++i)
    for (int64_t c = 0; c < block; ++c)
      t.data()[i * block + c] *= svd.singular_values[static_cast<size_t>(i)];
  return t;
}

// SVD site l into a left isometry, pushing Sigma Vh into site l+1.
// At the right end the leftover 1x1 scalar is returned instead.
cplx left_step(std::vector<Tensor>& sites, int l, double cutoff) {
  SvdResult svd = factorize_svd(sites[static_cast<size_t>(l)], {0, 1}, -1, cutoff);
  sites[static_cast<size_t>(l)] = svd.left_isometry;
  Tensor rest = weighted_right(svd);
  if (l + 1 < static_cast<int>(sites.size())) {
    sites[static_cast<size_t>(l + 1)] =
        contract(rest, sites[static_cast<size_t>(l + 1)], {{1, 0}});
    return 0.0;
  }
  return rest[0];
}

// Mirror image: site l becomes a right isometry, U Sigma moves to site l-1.
cplx right_step(std::vector<Tensor>& sites, int l, double cutoff) {
  SvdResult svd = factorize_svd(sites[static_cast<size_t>(l)], {0}, -1, cutoff);
  sites[static_cast<size_t>(l)] = svd.right_isometry;
  Tensor rest = weighted_left(svd);
  if (l > 0) {
    sites[static_cast<size_t>(l - 1)] =
        contract(sites[static_cast<size_t>(l - 1)], rest, {{2, 0}});
    return 0.0;
  }
  return rest[0];
}

// One-site transfer application Y = E_op(X) moving right-to-left:
// Y[a, abar] = sum <r|op|s> A[a,s,b] X[b,bbar] conj(A)[abar,r,bbar].
// op may be null for the identity.
Tensor transfer_right_to_left(const Tensor& site, const Tensor* op, const Tensor& x) {
  Tensor t1 = contract(site, x, {{2, 0}});  // (a, s, bbar)
  if (op == nullptr) return contract(t1, conj(site), {{1, 1}, {2, 2}});
  Tensor t2 = contract(t1, *op, {{1, 1}});  // (a, bbar, r)
  return contract(t2, conj(site), {{1, 2}, {2, 1}});
}

constexpr double kExactCutoff = 1e-14;

}  // namespace

void validate(const Mps& mps) {
  require(!mps.sites.empty(), "mps: no sites");
  require(mps.gauge_marks.size() == mps.sites.size(), "mps: gauge mark list length mismatch");
  for (const auto& t : mps.sites)
    require(t.rank() == 3, "mps: site tensors must have three indices");
  require(mps.sites.front().dim(0) == 1 && mps.sites.back().dim(2) == 1,
          "mps: open boundary requires unit edge bonds");
  for (size_t l = 0; l + 1 < mps.sites.size(); ++l)
    require(mps.sites[l].dim(2) == mps.sites[l + 1].dim(0),
            "mps: adjacent bond dimensions do not match");
}

bool left_gauged(const Tensor& site, double tol) {
  Tensor g = contract(conj(site), site, {{0, 0}, {1, 1}});
  const int64_t k = g.dim(0);
  double err = 0.0;
  for (int64_t i = 0; i < k; ++i)
    for (int64_t j = 0; j < k; ++j)
      err = std::max(err, std::abs(g[i * k + j] - (i == j ? cplx(1.0) : cplx(0.0))));
  return err < tol;
}

bool right_gauged(const Tensor& site, double tol) {
  Tensor g = contract(site, conj(site), {{1, 1}, {2, 2}});
  const int64_t k = g.dim(0);
  double err = 0.0;
  for (int64_t i = 0; i < k; ++i)
    for (int64_t j = 0; j < k; ++j)
      err = std::max(err, std::abs(g[i * k + j] - (i == j ? cplx(1.0) : cplx(0.0))));
  return err < tol;
}

Mps random_mps(int length, int64_t d, int64_t max_bond, std::mt19937_64& rng) {
  require(length >= 1 && d >= 1 && max_bond >= 1, "random_mps: bad shape");
  std::vector<int64_t> bonds(static_cast<size_t>(length) + 1, 1);
  for (int l = 1; l < length; ++l)
    bonds[static_cast<size_t>(l)] =
        std::min(bonds[static_cast<size_t>(l - 1)] * d, max_bond);
  for (int l = length - 1; l >= 1; --l)
    bonds[static_cast<size_t>(l)] =
        std::min(bonds[static_cast<size_t>(l)], bonds[static_cast<size_t>(l + 1)] * d);
  std::normal_distribution<double> g(0.0, 1.0);
  Mps mps;
  for (int l = 0; l < length; ++l) {
    Tensor t({bonds[static_cast<size_t>(l)], d, bonds[static_cast<size_t>(l + 1)]});
    for (int64_t i = 0; i < t.size(); ++i) t[i] = cplx(g(rng), g(rng));
    mps.sites.push_back(t);
  }
  mps.gauge_marks.assign(static_cast<size_t>(length), GaugeMark::unknown);
  return canonicalize(mps, Direction::right);
}

Mps from_dense(const Tensor& state, double cutoff) {
  const int length = state.rank();
  require(length >= 1, "from_dense: empty state");
  double bits = 0.0;
  for (int l = 0; l < length; ++l) bits += std::log2(static_cast<double>(state.dim(l)));
  require(bits <= 24.0 + 1e-9, "from_dense: state-space guard of 2^24 exceeded");
  if (std::abs(state.norm() - 1.0) > 1e-8)
    fail_invalid("from_dense: input state is not normalized");
  const double eff = std::max(cutoff, kExactCutoff);

  Mps mps;
  Tensor cur = reshape(state, {int64_t{1}, state.dim(0), state.size() / state.dim(0)});
  for (int l = 0; l + 1 < length; ++l) {
    SvdResult svd = factorize_svd(cur, {0, 1}, -1, eff);
    mps.sites.push_back(svd.left_isometry);
    Tensor rest = weighted_right(svd);  // (k, remaining)
    const int64_t d_next = state.dim(l + 1);
    cur = reshape(rest, {rest.dim(0), d_next, rest.dim(1) / d_next});
  }
  mps.sites.push_back(reshape(cur, {cur.dim(0), cur.dim(1), int64_t{1}}));
  mps.gauge_marks.assign(static_cast<size_t>(length), GaugeMark::left);
  mps.gauge_marks.back() = GaugeMark::center;
  validate(mps);
  return mps;
}

Tensor to_dense(const Mps& mps) {
  validate(mps);
  int64_t total = 1;
  for (int l = 0; l < mps.length(); ++l) {
    total *= mps.phys_dim(l);
    require(total <= (int64_t{1} << 24), "to_dense: state-space guard of 2^24 exceeded");
  }
  // Running tensor (s_0..s_l fused, D_{l+1}).
  Tensor cur = reshape(mps.sites[0], {mps.phys_dim(0), mps.sites[0].dim(2)});
  for (int l = 1; l < mps.length(); ++l) {
    Tensor next = contract(cur, mps.sites[static_cast<size_t>(l)], {{1, 0}});
    cur = reshape(next, {next.dim(0) * next.dim(1), next.dim(2)});
  }
  std::vector<int64_t> dims;
  for (int l = 0; l < mps.length(); ++l) dims.push_back(mps.phys_dim(l));
  return reshape(cur, dims);
}

cplx amplitude(const Mps& mps, const std::vector<int64_t>& config) {
  require(static_cast<int>(config.size()) == mps.length(),
          "amplitude: one local state per site required");
  Vec v = Vec::Ones(1);
  for (int l = 0; l < mps.length(); ++l) {
    const Tensor& a = mps.sites[static_cast<size_t>(l)];
    const int64_t s = config[static_cast<size_t>(l)];
    require(s >= 0 && s < a.dim(1), "amplitude: local state out of range");
    const int64_t dl = a.dim(0), dr = a.dim(2);
    Vec next = Vec::Zero(dr);
    for (int64_t b = 0; b < dr; ++b) {
      cplx acc = 0.0;
      for (int64_t i = 0; i < dl; ++i) acc += v(i) * a[(i * a.dim(1) + s) * dr + b];
      next(b) = acc;
    }
    v = next;
  }
  return v(0);
}

cplx overlap(const Mps& bra, const Mps& ket) {
  require(bra.length() == ket.length(), "overlap: length mismatch");
  Tensor v({1, 1});
  v.set({0, 0}, 1.0);  // (bra bond, ket bond)
  for (int l = 0; l < bra.length(); ++l) {
    require(bra.phys_dim(l) == ket.phys_dim(l), "overlap: physical dimension mismatch");
    Tensor t1 = contract(v, ket.sites[static_cast<size_t>(l)], {{1, 0}});  // (abar, s, b)
    v = contract(conj(bra.sites[static_cast<size_t>(l)]), t1, {{0, 0}, {1, 1}});
  }
  return v[0];
}

double norm(const Mps& mps) {
  const cplx n2 = overlap(mps, mps);
  return std::sqrt(std::max(0.0, n2.real()));
}

Mps canonicalize(const Mps& mps, Direction direction) {
  validate(mps);
  if (norm(mps) < 1e-14) fail_invalid("canonicalize: zero-norm state");
  Mps out = mps;
  const int length = out.length();
  if (direction == Direction::left) {
    for (int l = length - 1; l >= 1; --l) right_step(out.sites, l, kExactCutoff);
    for (int l = 0; l < length - 1; ++l) left_step(out.sites, l, kExactCutoff);
    // The final leftover is the norm (times a phase) and is dropped.
    left_step(out.sites, length - 1, kExactCutoff);
    out.gauge_marks.assign(static_cast<size_t>(length), GaugeMark::left);
  } else {
    for (int l = 0; l < length - 1; ++l) left_step(out.sites, l, kExactCutoff);
    for (int l = length - 1; l >= 1; --l) right_step(out.sites, l, kExactCutoff);
    right_step(out.sites, 0, kExactCutoff);
    out.gauge_marks.assign(static_cast<size_t>(length), GaugeMark::right);
  }
  validate(out);
  return out;
}

Mps mix_gauge(const Mps& mps, int l1, int l2) {
  validate(mps);
  require(0 <= l1 && l1 <= l2 && l2 < mps.length(), "mix_gauge: window out of range");
  if (norm(mps) < 1e-14) fail_invalid("mix_gauge: zero-norm state");
  Mps out = mps;
  for (int l = out.length() - 1; l >= 1; --l) right_step(out.sites, l, kExactCutoff);
  for (int l = 0; l < l1; ++l) left_step(out.sites, l, kExactCutoff);
  for (int l = 0; l < out.length(); ++l) {
    out.gauge_marks[static_cast<size_t>(l)] =
        l < l1 ? GaugeMark::left : (l == l1 ? GaugeMark::center : GaugeMark::right);
  }
  validate(out);
  return out;
}

SchmidtData schmidt(const Mps& mps, int bond) {
  require(bond >= 1 && bond < mps.length(), "schmidt: bond index out of range");
  Mps centered = mix_gauge(mps, bond, bond);
  SvdResult svd = factorize_svd(centered.sites[static_cast<size_t>(bond)], {0}, -1, 0.0);
  double total = 0.0;
  for (double s : svd.singular_values) total += s * s;
  require(total > 0.0, "schmidt: zero-norm state");
  SchmidtData data;
  data.bond = bond;
  for (double s : svd.singular_values) {
    const double v = s / std::sqrt(total);
    data.values.push_back(v);
    if (v > 1e-14) data.entropy -= v * v * std::log2(v * v);
  }
  return data;
}

std::pair<Mps, double> truncate(const Mps& mps, int bond, int64_t max_keep) {
  require(bond >= 1 && bond < mps.length(), "truncate: bond index out of range");
  require(max_keep >= 1, "truncate: must keep at least one value");
  Mps out = mix_gauge(mps, bond, bond);
  SvdResult svd = factorize_svd(out.sites[static_cast<size_t>(bond)], {0}, max_keep, 0.0);
  double kept = 0.0;
  for (double s : svd.singular_values) kept += s * s;
  const double total = kept + svd.discarded_weight;
  require(total > 0.0, "truncate: zero-norm state");
  const double discarded = svd.discarded_weight / total;

  Tensor center = svd.right_isometry;  // (k, d, Dr)
  const int64_t k = center.dim(0);
  const int64_t block = center.size() / k;
  for (int64_t i = 0; i < k; ++i) {
    const double lam = svd.singular_values[static_cast<size_t>(i)] / std::sqrt(kept);
    for (int64_t c = 0; c < block; ++c) center.data()[i * block + c] *= lam;
  }
  out.sites[static_cast<size_t>(bond)] = center;
  out.sites[static_cast<size_t>(bond - 1)] =
      contract(out.sites[static_cast<size_t>(bond - 1)], svd.left_isometry, {{2, 0}});
  validate(out);
  return {out, discarded};
}

cplx expval_product(const Mps& mps, const std::vector<Tensor>& ops) {
  validate(mps);
  require(static_cast<int>(ops.size()) == mps.length(),
          "expval_product: one operator per site required");
  Tensor v({1, 1});
  v.set({0, 0}, 1.0);  // (ket bond, bra bond)
  for (int l = 0; l < mps.length(); ++l) {
    const Tensor& a = mps.sites[static_cast<size_t>(l)];
    const Tensor& op = ops[static_cast<size_t>(l)];
    require(op.rank() == 2 && op.dim(0) == a.dim(1) && op.dim(1) == a.dim(1),
            "expval_product: operator dimension mismatch at site " + std::to_string(l));
    Tensor x = contract(v, a, {{0, 0}});   // (abar, s, b)
    Tensor y = contract(x, op, {{1, 1}});  // (abar, b, r)
    v = contract(y, conj(a), {{0, 0}, {2, 1}});  // (b, bbar)
  }
  return v[0];
}

cplx expval_local(const Mps& mps, const Tensor& op, int l1, int l2) {
  validate(mps);
  require(0 <= l1 && l1 <= l2 && l2 < mps.length(), "expval_local: window out of range");
  int64_t wdim = 1;
  for (int l = l1; l <= l2; ++l) {
    wdim *= mps.phys_dim(l);
    require(wdim <= 4096, "expval_local: window guard of 4096 states exceeded");
  }
  require(op.rank() == 2 && op.dim(0) == wdim && op.dim(1) == wdim,
          "expval_local: operator does not match the window dimension");

  Mps mixed = mix_gauge(mps, l1, l2);
  Tensor w = mixed.sites[static_cast<size_t>(l1)];
  for (int l = l1 + 1; l <= l2; ++l)
    w = contract(w, mixed.sites[static_cast<size_t>(l)], {{w.rank() - 1, 0}});
  const int width = l2 - l1 + 1;

  std::vector<int64_t> split_dims;
  for (int j = 0; j < 2; ++j)
    for (int l = l1; l <= l2; ++l) split_dims.push_back(mps.phys_dim(l));
  Tensor opt = reshape(op, split_dims);

  std::vector<std::pair<int, int>> in_pairs;
  for (int j = 0; j < width; ++j) in_pairs.push_back({1 + j, width + j});
  Tensor x = contract(w, opt, in_pairs);  // (Dl, Dr, r_1..r_w)
  std::vector<std::pair<int, int>> out_pairs{{0, 0}, {1, width + 1}};
  for (int j = 0; j < width; ++j) out_pairs.push_back({2 + j, 1 + j});
  Tensor num = contract(x, conj(w), out_pairs);

  std::vector<std::pair<int, int>> all;
  for (int j = 0; j < w.rank(); ++j) all.push_back({j, j});
  Tensor den = contract(w, conj(w), all);
  require(std::abs(den[0]) > 0.0, "expval_local: zero-norm state");
  return num[0] / den[0];
}

double expval_nn_hamiltonian(const Mps& mps, const NnHamiltonian& h) {
  validate(mps);
  validate(h);
  require(h.length == mps.length(), "expval_nn_hamiltonian: length mismatch");
  for (int l = 0; l < mps.length(); ++l)
    require(mps.phys_dim(l) == h.phys_dim,
            "expval_nn_hamiltonian: physical dimension mismatch");
  Mps rc = canonicalize(mps, Direction::right);

  const int length = rc.length();
  Tensor xi({1, 1});  // zero: no energy strictly right of the last site
  std::vector<Tensor> chi;
  for (int l = length - 1; l >= 0; --l) {
    const Tensor& a = rc.sites[static_cast<size_t>(l)];
    Tensor phi = Tensor::identity(a.dim(2));
    Tensor xi_new = transfer_right_to_left(a, nullptr, xi);
    for (const auto& term : h.one_site[static_cast<size_t>(l)]) {
      Tensor contrib = transfer_right_to_left(a, &term.op, phi);
      xi_new = add(xi_new, scale(contrib, term.g));
    }
    if (l <= length - 2) {
      const auto& terms = h.two_site[static_cast<size_t>(l)];
      for (size_t p = 0; p < terms.size(); ++p) {
        Tensor contrib = transfer_right_to_left(a, &terms[p].left, chi[p]);
        xi_new = add(xi_new, scale(contrib, terms[p].h));
      }
    }
    chi.clear();
    if (l >= 1) {
      for (const auto& term : h.two_site[static_cast<size_t>(l - 1)])
        chi.push_back(transfer_right_to_left(a, &term.right, phi));
    }
    xi = xi_new;
  }
  cplx energy = xi[0];

  if (h.boundary == NnHamiltonian::Boundary::periodic) {
    for (const auto& term : h.two_site[static_cast<size_t>(length - 1)]) {
      std::vector<Tensor> ops(static_cast<size_t>(length), Tensor::identity(h.phys_dim));
      ops[static_cast<size_t>(length - 1)] = term.left;
      ops[0] = term.right;
      energy += term.h * expval_product(rc, ops);
    }
  }
  return energy.real();
}

void save_mps(const Mps& mps, const std::string& dir) {
  validate(mps);
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["version"] = 1;
  j["length"] = mps.length();
  std::vector<int64_t> phys, bonds;
  for (int l = 0; l < mps.length(); ++l) phys.push_back(mps.phys_dim(l));
  for (int b = 0; b <= mps.length(); ++b)
    bonds.push_back(b == mps.length() ? mps.sites.back().dim(2) : mps.bond_dim(b));
  j["phys_dims"] = phys;
  j["bond_dims"] = bonds;
  std::vector<std::string> marks, files;
  for (int l = 0; l < mps.length(); ++l) {
    switch (mps.gauge_marks[static_cast<size_t>(l)]) {
      case GaugeMark::left: marks.push_back("left"); break;
      case GaugeMark::right: marks.push_back("right"); break;
      case GaugeMark::center: marks.push_back("center"); break;
      case GaugeMark::unknown: marks.push_back("unknown"); break;
    }
    const std::string name = "site_" + std::to_string(l) + ".tnet";
    files.push_back(name);
    save_tensor(mps.sites[static_cast<size_t>(l)], dir + "/" + name);
  }
  j["gauge_marks"] = marks;
  j["sites"] = files;
  write_json_file(dir + "/mps.json", j);
}

Mps load_mps(const std::string& dir) {
  nlohmann::json j = read_json_file(dir + "/mps.json");
  require_keys(j, {"version", "length", "phys_dims", "bond_dims", "gauge_marks", "sites"},
               {}, "mps manifest");
  if (j["version"] != 1) fail_invalid("mps manifest: unsupported version");
  const int length = j["length"].get<int>();
  Mps mps;
  for (int l = 0; l < length; ++l) {
    mps.sites.push_back(load_tensor(dir + "/" + j["sites"].at(static_cast<size_t>(l))
                                              .get<std::string>()));
    const std::string mark = j["gauge_marks"].at(static_cast<size_t>(l)).get<std::string>();
    if (mark == "left") {
      mps.gauge_marks.push_back(GaugeMark::left);
    } else if (mark == "right") {
      mps.gauge_marks.push_back(GaugeMark::right);
    } else if (mark == "center") {
      mps.gauge_marks.push_back(GaugeMark::center);
    } else if (mark == "unknown") {
      mps.gauge_marks.push_back(GaugeMark::unknown);
    } else {
      fail_invalid("mps manifest: unknown gauge mark \"" + mark + "\"");
    }
  }
  validate(mps);
  for (int l = 0; l < length; ++l) {
    if (mps.phys_dim(l) != j["phys_dims"].at(static_cast<size_t>(l)).get<int64_t>() ||
        mps.bond_dim(l) != j["bond_dims"].at(static_cast<size_t>(l)).get<int64_t>())
      fail_invalid("mps manifest: dimensions do not match the tensor dumps");
    const GaugeMark mark = mps.gauge_marks[static_cast<size_t>(l)];
    const Tensor& site = mps.sites[static_cast<size_t>(l)];
    if (mark == GaugeMark::left && !left_gauged(site))
      fail_invalid("mps manifest: site " + std::to_string(l) +
                   " is marked left but is not left-gauged");
    if (mark == GaugeMark::right && !right_gauged(site))
      fail_invalid("mps manifest: site " + std::to_string(l) +
                   " is marked right but is not right-gauged");
  }
  return mps;
}

}  // namespace tnet
