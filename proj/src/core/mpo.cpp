#include "mpo.hpp"

#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "error.hpp"
#include "io.hpp"

namespace tnet {

namespace {

int64_t pow_i64(int64_t base, int exp) {
  int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

Tensor boundary_tensor(const Vec& v) {
  Tensor t({v.size()});
  for (int64_t i = 0; i < v.size(); ++i) t[i] = v(i);
  return t;
}

// Boundary vectors folded into the edge sites, so edge bonds become 1.
std::vector<Tensor> folded_sites(const Mpo& op) {
  std::vector<Tensor> sites = op.sites;
  if (op.left_boundary) {
    Tensor b = reshape(boundary_tensor(*op.left_boundary), {1, op.left_boundary->size()});
    sites.front() = contract(b, sites.front(), {{1, 0}});
  }
  if (op.right_boundary) {
    Tensor b = reshape(boundary_tensor(*op.right_boundary), {op.right_boundary->size(), 1});
    sites.back() = contract(sites.back(), b, {{3, 0}});
  }
  return sites;
}

// One truncating sweep pair over an unnormalized state whose norm sits at
// site 0 (right gauge elsewhere). Accumulates the relative weight dropped at
// each bond; the state keeps whatever norm survives.
double truncating_sweeps(std::vector<Tensor>& sites, int64_t max_bond, double cutoff) {
  const int length = static_cast<int>(sites.size());
  double total = 0.0;
  for (int l = 0; l + 1 < length; ++l) {
    Tensor& cur = sites[static_cast<size_t>(l)];
    SvdResult svd = factorize_svd(cur, {0, 1}, max_bond, cutoff);
    double kept = 0.0;
    for (double s : svd.singular_values) kept += s * s;
    if (kept + svd.discarded_weight > 0.0)
      total += svd.discarded_weight / (kept + svd.discarded_weight);
    cur = svd.left_isometry;
    Tensor rest = svd.right_isometry;
    for (size_t i = 0; i < svd.singular_values.size(); ++i) {
      const int64_t cols = rest.size() / static_cast<int64_t>(svd.singular_values.size());
      for (int64_t c = 0; c < cols; ++c)
        rest[static_cast<int64_t>(i) * cols + c] *= svd.singular_values[i];
    }
    sites[static_cast<size_t>(l + 1)] = contract(rest, sites[static_cast<size_t>(l + 1)], {{1, 0}});
  }
  for (int l = length - 1; l >= 1; --l) {
    Tensor& cur = sites[static_cast<size_t>(l)];
    SvdResult svd = factorize_svd(cur, {0}, max_bond, cutoff);
    double kept = 0.0;
    for (double s : svd.singular_values) kept += s * s;
    if (kept + svd.discarded_weight > 0.0)
      total += svd.discarded_weight / (kept + svd.discarded_weight);
    cur = svd.right_isometry;
    Tensor rest = svd.left_isometry;
    const int64_t rows = rest.dim(0);
    for (int64_t r = 0; r < rows; ++r)
      for (size_t i = 0; i < svd.singular_values.size(); ++i)
        rest[r * static_cast<int64_t>(svd.singular_values.size()) + static_cast<int64_t>(i)] *=
            svd.singular_values[i];
    sites[static_cast<size_t>(l - 1)] =
        contract(sites[static_cast<size_t>(l - 1)], rest, {{2, 0}});
  }
  return total;
}

}  // namespace

void validate(const Mpo& op) {
  if (op.sites.empty()) fail_invalid("mpo: no sites");
  for (int l = 0; l < op.length(); ++l) {
    const Tensor& t = op.sites[static_cast<size_t>(l)];
    if (t.rank() != 4) fail_invalid("mpo: site " + std::to_string(l) + " is not rank 4");
    if (l + 1 < op.length() && t.dim(3) != op.sites[static_cast<size_t>(l + 1)].dim(0))
      fail_invalid("mpo: bond mismatch between sites " + std::to_string(l) + " and " +
                   std::to_string(l + 1));
  }
  const int64_t d0 = op.sites.front().dim(0);
  const int64_t dl = op.sites.back().dim(3);
  if (op.left_boundary) {
    if (op.left_boundary->size() != d0)
      fail_invalid("mpo: left boundary vector has wrong length");
  } else if (d0 != 1) {
    fail_invalid("mpo: open left bond wider than 1 needs a boundary vector");
  }
  if (op.right_boundary) {
    if (op.right_boundary->size() != dl)
      fail_invalid("mpo: right boundary vector has wrong length");
  } else if (dl != 1) {
    fail_invalid("mpo: open right bond wider than 1 needs a boundary vector");
  }
}

Mpo identity_mpo(int length, int64_t d) {
  require(length >= 1, "identity mpo: length must be positive");
  require(d >= 1, "identity mpo: physical dimension must be positive");
  Mpo op;
  Tensor site({1, d, d, 1});
  for (int64_t s = 0; s < d; ++s) site.set({0, s, s, 0}, 1.0);
  op.sites.assign(static_cast<size_t>(length), site);
  return op;
}

std::pair<Mps, double> apply(const Mpo& op, const Mps& mps, int64_t max_bond,
                             double cutoff) {
  validate(op);
  validate(mps);
  if (op.length() != mps.length()) fail_invalid("apply: operator and state lengths differ");
  for (int l = 0; l < mps.length(); ++l)
    if (op.in_dim(l) != mps.phys_dim(l))
      fail_invalid("apply: physical dimension mismatch at site " + std::to_string(l));
  if (max_bond == 0 || max_bond < -1) fail_invalid("apply: max_bond must be positive or -1");

  std::vector<Tensor> osites = folded_sites(op);
  Mps out;
  for (int l = 0; l < mps.length(); ++l) {
    const Tensor& a = mps.sites[static_cast<size_t>(l)];
    // (Do_l, d_out, d_in, Do_r) x (Da_l, d_in, Da_r) over d_in, then group
    // the virtual pairs: exact bond D_A * D_O.
    Tensor t = contract(osites[static_cast<size_t>(l)], a, {{2, 1}});
    t = permute(t, {0, 3, 1, 2, 4});
    out.sites.push_back(fuse(t, {{0, 1}, {2}, {3, 4}}));
  }
  out.gauge_marks.assign(static_cast<size_t>(mps.length()), GaugeMark::unknown);

  // Gauge prep without truncation, then the two truncating sweeps.
  out = mix_gauge(out, 0, 0);
  const double discarded = truncating_sweeps(out.sites, max_bond, cutoff);
  out.gauge_marks.assign(static_cast<size_t>(mps.length()), GaugeMark::unknown);
  out.gauge_marks[0] = GaugeMark::center;
  for (int l = 1; l < mps.length(); ++l)
    out.gauge_marks[static_cast<size_t>(l)] = GaugeMark::right;
  return {out, discarded};
}

Mpo from_jastrow(const std::vector<std::vector<Tensor>>& tables, int length, int64_t d) {
  require(length >= 2, "jastrow: need at least two sites");
  require(d >= 2, "jastrow: physical dimension must be at least 2");
  const int range = static_cast<int>(tables.size());
  if (range >= length)
    fail_invalid("jastrow: correlator range " + std::to_string(range) +
                 " does not fit an open chain of length " + std::to_string(length));
  for (int r = 1; r <= range; ++r) {
    const auto& row = tables[static_cast<size_t>(r - 1)];
    if (static_cast<int>(row.size()) != length - r)
      fail_invalid("jastrow: range " + std::to_string(r) + " needs exactly " +
                   std::to_string(length - r) + " tables");
    for (const Tensor& c : row) {
      if (c.rank() != 2 || c.dim(0) != d || c.dim(1) != d)
        fail_invalid("jastrow: factor tables must be (d, d)");
      for (int64_t i = 0; i < c.size(); ++i)
        if (!std::isfinite(c[i].real()) || !std::isfinite(c[i].imag()))
          fail_invalid("jastrow: factor tables must be finite");
    }
  }

  if (range == 0) return identity_mpo(length, d);

  // Bond state m = history of the last `range` symbols, most recent in the
  // lowest digit; interior bonds are exactly d^range wide.
  const int64_t hist = pow_i64(d, range);
  const int64_t keep = pow_i64(d, range - 1);
  Mpo op;
  for (int j = 0; j < length; ++j) {
    const int64_t dl = j == 0 ? 1 : hist;
    const int64_t dr = j == length - 1 ? 1 : hist;
    Tensor site({dl, d, d, dr});
    for (int64_t m = 0; m < dl; ++m) {
      for (int64_t s = 0; s < d; ++s) {
        cplx w = 1.0;
        for (int r = 1; r <= range && r <= j; ++r) {
          const int64_t left_sym = (m / pow_i64(d, r - 1)) % d;
          w *= tables[static_cast<size_t>(r - 1)][static_cast<size_t>(j - r)]
                   .at({left_sym, s});
        }
        const int64_t next = j == length - 1 ? 0 : s + d * (m % keep);
        site.set({m, s, s, next}, site.at({m, s, s, next}) + w);
      }
    }
    op.sites.push_back(site);
  }
  return op;
}

Mpo from_jastrow_uniform(const std::vector<Tensor>& per_range, int length, int64_t d) {
  std::vector<std::vector<Tensor>> tables;
  for (size_t r = 1; r <= per_range.size(); ++r)
    tables.emplace_back(static_cast<size_t>(length) - r, per_range[r - 1]);
  return from_jastrow(tables, length, d);
}

double entanglement_bound_jastrow(int range, int64_t d) {
  require(range >= 0, "jastrow bound: range must be nonnegative");
  require(d >= 2, "jastrow bound: physical dimension must be at least 2");
  return range * std::log2(static_cast<double>(d));
}

Mat to_dense_matrix(const Mpo& op) {
  validate(op);
  int64_t rows = 1, cols = 1;
  for (int l = 0; l < op.length(); ++l) {
    rows *= op.out_dim(l);
    cols *= op.in_dim(l);
    require(rows * cols <= (int64_t{1} << 20), "to_dense_matrix: operator too large");
  }
  std::vector<Tensor> sites = folded_sites(op);
  Tensor run = sites[0];  // (1, out, in, D) with leading 1 fused away below
  run = fuse(run, {{0, 1}, {2}, {3}});
  for (int l = 1; l < op.length(); ++l) {
    Tensor t = contract(run, sites[static_cast<size_t>(l)], {{2, 0}});
    t = permute(t, {0, 2, 1, 3, 4});
    run = fuse(t, {{0, 1}, {2, 3}, {4}});
  }
  Tensor flat = reshape(run, {rows, cols});
  Mat m(rows, cols);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) m(i, j) = flat.at({i, j});
  return m;
}

void save_mpo(const Mpo& op, const std::string& dir) {
  validate(op);
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["version"] = 1;
  j["length"] = op.length();
  std::vector<int64_t> outs, ins, bonds;
  for (int l = 0; l < op.length(); ++l) {
    outs.push_back(op.out_dim(l));
    ins.push_back(op.in_dim(l));
    bonds.push_back(op.sites[static_cast<size_t>(l)].dim(0));
  }
  bonds.push_back(op.sites.back().dim(3));
  j["out_dims"] = outs;
  j["in_dims"] = ins;
  j["bond_dims"] = bonds;
  std::vector<std::string> files;
  for (int l = 0; l < op.length(); ++l) {
    const std::string name = "site_" + std::to_string(l) + ".tnet";
    files.push_back(name);
    save_tensor(op.sites[static_cast<size_t>(l)], dir + "/" + name);
  }
  j["sites"] = files;
  if (op.left_boundary) {
    save_tensor(boundary_tensor(*op.left_boundary), dir + "/left_boundary.tnet");
    j["left_boundary"] = "left_boundary.tnet";
  }
  if (op.right_boundary) {
    save_tensor(boundary_tensor(*op.right_boundary), dir + "/right_boundary.tnet");
    j["right_boundary"] = "right_boundary.tnet";
  }
  write_json_file(dir + "/mpo.json", j);
}

Mpo load_mpo(const std::string& dir) {
  nlohmann::json j = read_json_file(dir + "/mpo.json");
  require_keys(j, {"version", "length", "out_dims", "in_dims", "bond_dims", "sites"},
               {"left_boundary", "right_boundary"}, "mpo manifest");
  if (j["version"] != 1) fail_invalid("mpo manifest: unsupported version");
  const int length = j["length"].get<int>();
  Mpo op;
  for (int l = 0; l < length; ++l)
    op.sites.push_back(load_tensor(dir + "/" + j["sites"].at(static_cast<size_t>(l))
                                             .get<std::string>()));
  auto load_boundary = [&](const char* key) -> std::optional<Vec> {
    if (!j.contains(key)) return std::nullopt;
    Tensor t = load_tensor(dir + "/" + j[key].get<std::string>());
    if (t.rank() != 1) fail_invalid("mpo manifest: boundary vectors must be rank 1");
    Vec v(t.size());
    for (int64_t i = 0; i < t.size(); ++i) v(i) = t[i];
    return v;
  };
  op.left_boundary = load_boundary("left_boundary");
  op.right_boundary = load_boundary("right_boundary");
  validate(op);
  for (int l = 0; l < length; ++l) {
    if (op.out_dim(l) != j["out_dims"].at(static_cast<size_t>(l)).get<int64_t>() ||
        op.in_dim(l) != j["in_dims"].at(static_cast<size_t>(l)).get<int64_t>() ||
        op.sites[static_cast<size_t>(l)].dim(0) !=
            j["bond_dims"].at(static_cast<size_t>(l)).get<int64_t>())
      fail_invalid("mpo manifest: dimensions do not match the tensor dumps");
  }
  return op;
}

}  // namespace tnet
