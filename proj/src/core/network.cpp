#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "error.hpp"

namespace tnet {

namespace {

// One tensor index slot is either an end of edge `id` or open link `id`.
struct LinkRef {
  bool is_edge;
  int id;
};

struct WorkNode {
  Tensor t;
  std::vector<LinkRef> refs;
};

std::map<int, WorkNode> build_working(const TensorNetwork& net) {
  std::map<int, WorkNode> wn;
  for (const auto& [id, t] : net.nodes) {
    wn.emplace(id, WorkNode{t, std::vector<LinkRef>(static_cast<size_t>(t.rank()),
                                                    LinkRef{false, -1})});
  }
  for (size_t e = 0; e < net.edges.size(); ++e) {
    const auto& ed = net.edges[e];
    wn.at(ed.node_a).refs[static_cast<size_t>(ed.slot_a)] = {true, static_cast<int>(e)};
    wn.at(ed.node_b).refs[static_cast<size_t>(ed.slot_b)] = {true, static_cast<int>(e)};
  }
  for (size_t o = 0; o < net.open_links.size(); ++o) {
    const auto& ol = net.open_links[o];
    wn.at(ol.node).refs[static_cast<size_t>(ol.slot)] = {false, static_cast<int>(o)};
  }
  return wn;
}

// Distinct other endpoints of v's edges; a self-loop reports v itself.
std::set<int> edge_neighbours(const std::map<int, WorkNode>& wn, int v) {
  std::set<int> out;
  for (const auto& r : wn.at(v).refs) {
    if (!r.is_edge) continue;
    int other = -1;
    int hits_on_v = 0;
    for (const auto& [id, node] : wn) {
      for (const auto& r2 : node.refs) {
        if (r2.is_edge && r2.id == r.id) {
          if (id == v) {
            ++hits_on_v;
          } else {
            other = id;
          }
        }
      }
    }
    out.insert(hits_on_v == 2 ? v : other);
  }
  return out;
}

// new_t[.., l, ..] = sum_k t[.., k, ..] m[k, l] with the index kept in place.
Tensor absorb_matrix(const Tensor& t, int slot, const Mat& m) {
  require(m.rows() == t.dim(slot), "absorb_matrix: dimension mismatch");
  Tensor mt = from_matrix(m, {m.rows()}, {m.cols()});
  Tensor raw = contract(t, mt, {{slot, 0}});
  std::vector<int> perm(static_cast<size_t>(t.rank()));
  for (int i = 0; i < t.rank(); ++i) {
    if (i < slot) {
      perm[static_cast<size_t>(i)] = i;
    } else if (i == slot) {
      perm[static_cast<size_t>(i)] = t.rank() - 1;
    } else {
      perm[static_cast<size_t>(i)] = i - 1;
    }
  }
  return permute(raw, perm);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Edmonds-Karp max-flow on a small dense capacity matrix.
double max_flow(std::vector<std::vector<double>>& cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  double flow = 0.0;
  for (;;) {
    std::vector<int> parent(static_cast<size_t>(n), -1);
    parent[static_cast<size_t>(s)] = s;
    std::deque<int> queue{s};
    while (!queue.empty() && parent[static_cast<size_t>(t)] < 0) {
      int v = queue.front();
      queue.pop_front();
      for (int w = 0; w < n; ++w) {
        if (parent[static_cast<size_t>(w)] < 0 &&
            cap[static_cast<size_t>(v)][static_cast<size_t>(w)] > 1e-15) {
          parent[static_cast<size_t>(w)] = v;
          queue.push_back(w);
        }
      }
    }
    if (parent[static_cast<size_t>(t)] < 0) return flow;
    double push = kInf;
    for (int v = t; v != s; v = parent[static_cast<size_t>(v)])
      push = std::min(push, cap[static_cast<size_t>(parent[static_cast<size_t>(v)])]
                                [static_cast<size_t>(v)]);
    if (std::isinf(push)) return kInf;
    for (int v = t; v != s; v = parent[static_cast<size_t>(v)]) {
      int u = parent[static_cast<size_t>(v)];
      cap[static_cast<size_t>(u)][static_cast<size_t>(v)] -= push;
      cap[static_cast<size_t>(v)][static_cast<size_t>(u)] += push;
    }
    flow += push;
  }
}

}  // namespace

void validate(const TensorNetwork& net) {
  std::map<int, std::vector<int>> cover;
  for (const auto& [id, t] : net.nodes) {
    require(t.rank() >= 1, "network: node " + std::to_string(id) + " has no indices");
    cover.emplace(id, std::vector<int>(static_cast<size_t>(t.rank()), 0));
  }
  auto touch = [&](int node, int slot, const char* what) {
    auto it = cover.find(node);
    if (it == cover.end())
      fail_invalid(std::string("network: ") + what + " references missing node " +
                   std::to_string(node));
    if (slot < 0 || slot >= static_cast<int>(it->second.size()))
      fail_invalid(std::string("network: ") + what + " references slot " +
                   std::to_string(slot) + " out of range on node " + std::to_string(node));
    ++it->second[static_cast<size_t>(slot)];
  };
  for (const auto& e : net.edges) {
    touch(e.node_a, e.slot_a, "edge");
    touch(e.node_b, e.slot_b, "edge");
    if (net.nodes.at(e.node_a).dim(e.slot_a) != net.nodes.at(e.node_b).dim(e.slot_b))
      fail_invalid("network: edge joins indices of different dimension");
  }
  for (const auto& o : net.open_links) touch(o.node, o.slot, "open link");
  for (const auto& [id, counts] : cover) {
    for (size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] != 1)
        fail_invalid("network: node " + std::to_string(id) + " slot " + std::to_string(s) +
                     (counts[s] == 0 ? " is dangling" : " is used more than once"));
    }
  }
}

TensorNetwork gauge_insert(const TensorNetwork& net, int edge_id, const Mat& x) {
  validate(net);
  require(edge_id >= 0 && edge_id < static_cast<int>(net.edges.size()),
          "gauge_insert: edge id out of range");
  const auto& e = net.edges[static_cast<size_t>(edge_id)];
  const int64_t d = net.nodes.at(e.node_a).dim(e.slot_a);
  require(x.rows() == d && x.cols() == d, "gauge_insert: matrix does not match edge dimension");

  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12)
    fail_invalid("gauge_insert: matrix is singular or too ill-conditioned");
  Mat inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();

  TensorNetwork out = net;
  out.nodes.at(e.node_a) = absorb_matrix(out.nodes.at(e.node_a), e.slot_a, x);
  out.nodes.at(e.node_b) = absorb_matrix(out.nodes.at(e.node_b), e.slot_b, inv.transpose());
  return out;
}

double mincut_entropy_bound(const TensorNetwork& net, const std::set<int>& region) {
  validate(net);
  for (int r : region)
    require(r >= 0 && r < static_cast<int>(net.open_links.size()),
            "mincut_entropy_bound: open link id out of range");
  if (region.empty() || region.size() == net.open_links.size()) return 0.0;

  std::map<int, int> index;
  for (const auto& [id, t] : net.nodes) {
    (void)t;
    index.emplace(id, static_cast<int>(index.size()));
  }
  const int n = static_cast<int>(index.size());
  const int source = n;
  const int sink = n + 1;
  std::vector<std::vector<double>> cap(static_cast<size_t>(n + 2),
                                       std::vector<double>(static_cast<size_t>(n + 2), 0.0));
  for (const auto& e : net.edges) {
    const double c = std::log2(static_cast<double>(net.nodes.at(e.node_a).dim(e.slot_a)));
    cap[static_cast<size_t>(index.at(e.node_a))][static_cast<size_t>(index.at(e.node_b))] += c;
    cap[static_cast<size_t>(index.at(e.node_b))][static_cast<size_t>(index.at(e.node_a))] += c;
  }
  for (size_t o = 0; o < net.open_links.size(); ++o) {
    const int v = index.at(net.open_links[o].node);
    if (region.count(static_cast<int>(o))) {
      cap[static_cast<size_t>(source)][static_cast<size_t>(v)] = kInf;
    } else {
      cap[static_cast<size_t>(v)][static_cast<size_t>(sink)] = kInf;
    }
  }
  const double flow = max_flow(cap, source, sink);
  if (std::isinf(flow))
    fail_invalid("mincut_entropy_bound: region and complement meet at a single node");
  return flow;
}

Tensor contract_loop_free(const TensorNetwork& net) {
  validate(net);
  require(!net.nodes.empty(), "contract_loop_free: empty network");
  for (const auto& e : net.edges) {
    if (e.node_a == e.node_b)
      fail_invalid("contract_loop_free: network has a cycle (self-loop on node " +
                   std::to_string(e.node_a) + ")");
  }
  auto wn = build_working(net);

  while (wn.size() > 1) {
    int leaf = -1;
    int partner = -1;
    bool any_edge = false;
    for (const auto& [id, node] : wn) {
      (void)node;
      auto nb = edge_neighbours(wn, id);
      if (nb.count(id))
        fail_invalid("contract_loop_free: network has a cycle (self-loop on node " +
                     std::to_string(id) + ")");
      if (!nb.empty()) any_edge = true;
      if (nb.size() == 1) {
        leaf = id;
        partner = *nb.begin();
        break;
      }
    }
    if (leaf < 0) {
      if (any_edge) {
        for (const auto& e : net.edges) {
          if (wn.count(e.node_a) && wn.count(e.node_b))
            fail_invalid("contract_loop_free: network has a cycle through the edge between "
                         "nodes " +
                         std::to_string(e.node_a) + " and " + std::to_string(e.node_b));
        }
        fail_invalid("contract_loop_free: network has a cycle");
      }
      // Only disconnected edge-free factors remain: outer-multiply them.
      auto first = wn.begin();
      auto second = std::next(first);
      WorkNode merged;
      if (second->second.refs.empty()) {
        merged.t = scale(first->second.t, second->second.t[0]);
        merged.refs = first->second.refs;
      } else if (first->second.refs.empty()) {
        merged.t = scale(second->second.t, first->second.t[0]);
        merged.refs = second->second.refs;
      } else {
        merged.t = outer(first->second.t, second->second.t);
        merged.refs = first->second.refs;
        merged.refs.insert(merged.refs.end(), second->second.refs.begin(),
                           second->second.refs.end());
      }
      int keep = first->first;
      wn.erase(second);
      wn.at(keep) = merged;
      continue;
    }

    const WorkNode& lv = wn.at(leaf);
    const WorkNode& pu = wn.at(partner);
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < lv.refs.size(); ++i) {
      if (!lv.refs[i].is_edge) continue;
      for (size_t j = 0; j < pu.refs.size(); ++j) {
        if (pu.refs[j].is_edge && pu.refs[j].id == lv.refs[i].id)
          pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
      }
    }
    WorkNode merged;
    merged.t = contract(lv.t, pu.t, pairs);
    for (size_t i = 0; i < lv.refs.size(); ++i) {
      bool used = false;
      for (const auto& p : pairs) used = used || p.first == static_cast<int>(i);
      if (!used) merged.refs.push_back(lv.refs[i]);
    }
    for (size_t j = 0; j < pu.refs.size(); ++j) {
      bool used = false;
      for (const auto& p : pairs) used = used || p.second == static_cast<int>(j);
      if (!used) merged.refs.push_back(pu.refs[j]);
    }
    wn.erase(leaf);
    wn.at(partner) = merged;
  }

  const WorkNode& last = wn.begin()->second;
  if (last.refs.empty()) return last.t;
  std::vector<int> perm(last.refs.size());
  for (size_t o = 0; o < net.open_links.size(); ++o) {
    int pos = -1;
    for (size_t i = 0; i < last.refs.size(); ++i) {
      if (!last.refs[i].is_edge && last.refs[i].id == static_cast<int>(o))
        pos = static_cast<int>(i);
    }
    require(pos >= 0, "contract_loop_free: lost track of an open link");
    perm[o] = pos;
  }
  return permute(last.t, perm);
}

TensorNetwork peripheral_gauge(const TensorNetwork& net, const std::set<int>& nucleus) {
  validate(net);
  require(!nucleus.empty(), "peripheral_gauge: empty nucleus");
  for (int v : nucleus)
    require(net.nodes.count(v), "peripheral_gauge: nucleus node " + std::to_string(v) +
                                    " is not in the network");

  auto wn = build_working(net);
  int next_edge = static_cast<int>(net.edges.size());

  // Multi-source BFS distance to the nucleus.
  std::map<int, int> dist;
  std::deque<int> queue;
  for (int v : nucleus) {
    dist[v] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : edge_neighbours(wn, v)) {
      if (!dist.count(w)) {
        dist[w] = dist.at(v) + 1;
        queue.push_back(w);
      }
    }
  }
  for (const auto& [id, node] : wn) {
    (void)node;
    if (!dist.count(id))
      fail_invalid("peripheral_gauge: node " + std::to_string(id) +
                   " is unreachable from the nucleus");
  }

  std::vector<int> order;
  for (const auto& [id, d] : dist) {
    if (d > 0) order.push_back(id);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist.at(a) > dist.at(b); });

  for (int v : order) {
    int parent = -1;
    for (int w : edge_neighbours(wn, v)) {
      if (w == v || dist.at(w) >= dist.at(v)) {
        if (w == v || dist.at(w) == dist.at(v))
          fail_invalid("peripheral_gauge: cycle outside the nucleus at node " +
                       std::to_string(v));
        continue;  // a farther neighbour holds an already-gauged bond
      }
      if (parent >= 0 && parent != w)
        fail_invalid("peripheral_gauge: cycle outside the nucleus at node " +
                     std::to_string(v));
      parent = w;
    }
    require(parent >= 0, "peripheral_gauge: node without a parent");

    WorkNode& nv = wn.at(v);
    WorkNode& nu = wn.at(parent);
    std::vector<int> toward;  // slots of v on edges shared with the parent
    for (size_t i = 0; i < nv.refs.size(); ++i) {
      if (!nv.refs[i].is_edge) continue;
      for (const auto& r : nu.refs) {
        if (r.is_edge && r.id == nv.refs[i].id) toward.push_back(static_cast<int>(i));
      }
    }
    std::vector<int> away;
    for (int i = 0; i < nv.t.rank(); ++i) {
      if (std::find(toward.begin(), toward.end(), i) == toward.end()) away.push_back(i);
    }

    Tensor new_v;
    Tensor factor;  // (new bond, toward dims...)
    if (away.empty()) {
      std::vector<int64_t> fdims{1};
      for (int i : toward) fdims.push_back(nv.t.dim(i));
      factor = reshape(nv.t, fdims);
      new_v = Tensor({1});
      new_v.set({0}, 1.0);
    } else {
      SvdResult svd = factorize_svd(nv.t, away);
      new_v = svd.left_isometry;
      factor = svd.right_isometry;
      const int64_t k = factor.dim(0);
      const int64_t block = factor.size() / k;
      for (int64_t r = 0; r < k; ++r) {
        for (int64_t c = 0; c < block; ++c)
          factor.data()[r * block + c] *= svd.singular_values[static_cast<size_t>(r)];
      }
    }

    // Absorb the factor into the parent across every shared edge at once.
    std::vector<std::pair<int, int>> pairs;
    for (size_t k = 0; k < toward.size(); ++k) {
      const int eid = nv.refs[static_cast<size_t>(toward[k])].id;
      for (size_t j = 0; j < nu.refs.size(); ++j) {
        if (nu.refs[j].is_edge && nu.refs[j].id == eid)
          pairs.push_back({static_cast<int>(j), static_cast<int>(k) + 1});
      }
    }
    Tensor new_u = contract(nu.t, factor, pairs);
    std::vector<LinkRef> new_u_refs;
    for (size_t j = 0; j < nu.refs.size(); ++j) {
      bool used = false;
      for (const auto& p : pairs) used = used || p.first == static_cast<int>(j);
      if (!used) new_u_refs.push_back(nu.refs[j]);
    }
    const int bond = next_edge++;
    new_u_refs.push_back({true, bond});

    std::vector<LinkRef> new_v_refs;
    for (int i : away) new_v_refs.push_back(nv.refs[static_cast<size_t>(i)]);
    new_v_refs.push_back({true, bond});

    nv.t = new_v;
    nv.refs = new_v_refs;
    nu.t = new_u;
    nu.refs = new_u_refs;
  }

  TensorNetwork out;
  out.statistics = net.statistics;
  out.anyon_phase = net.anyon_phase;
  std::map<int, std::pair<int, int>> half_edge;  // edge id -> first (node, slot) seen
  for (const auto& [id, node] : wn) {
    out.nodes.emplace(id, node.t);
    for (size_t i = 0; i < node.refs.size(); ++i) {
      if (!node.refs[i].is_edge) continue;
      auto it = half_edge.find(node.refs[i].id);
      if (it == half_edge.end()) {
        half_edge.emplace(node.refs[i].id, std::make_pair(id, static_cast<int>(i)));
      } else {
        out.edges.push_back({it->second.first, it->second.second, id, static_cast<int>(i)});
      }
    }
  }
  for (size_t o = 0; o < net.open_links.size(); ++o) {
    for (const auto& [id, node] : wn) {
      for (size_t i = 0; i < node.refs.size(); ++i) {
        if (!node.refs[i].is_edge && node.refs[i].id == static_cast<int>(o))
          out.open_links.push_back({id, static_cast<int>(i), net.open_links[o].label});
      }
    }
  }
  validate(out);
  return out;
}

Tensor exchange_gate(Statistics statistics, int64_t d, double phase) {
  require(d >= 1, "exchange_gate: dimension must be positive");
  if (statistics != Statistics::spin)
    require(d == 2, "exchange_gate: fermionic and anyonic links require dimension 2");
  Tensor g({d * d, d * d});
  for (int64_t s1 = 0; s1 < d; ++s1) {
    for (int64_t s2 = 0; s2 < d; ++s2) {
      cplx amp = 1.0;
      if (s1 == 1 && s2 == 1) {
        if (statistics == Statistics::fermion) amp = -1.0;
        if (statistics == Statistics::anyon) amp = std::exp(cplx(0.0, phase));
      }
      g.set({s2 * d + s1, s1 * d + s2}, amp);
    }
  }
  return g;
}

}  // namespace tnet
