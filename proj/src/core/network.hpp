#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "tensor.hpp"

namespace tnet {

// Link statistics carried by a network: determines the exchange gate used
// when two link indices cross.
enum class Statistics { spin, fermion, anyon };

// Undirected graph of dense tensors.  Every tensor index is either one end
// of an internal edge or a named open link; validate() enforces exactly one
// role per index slot and matching dimensions across each edge.
struct TensorNetwork {
  struct Edge {
    int node_a;
    int slot_a;
    int node_b;
    int slot_b;
  };
  struct OpenLink {
    int node;
    int slot;
    std::string label;
  };

  std::map<int, Tensor> nodes;
  std::vector<Edge> edges;
  std::vector<OpenLink> open_links;
  Statistics statistics = Statistics::spin;
  double anyon_phase = 0.0;
};

void validate(const TensorNetwork& net);

// Absorbs X into one endpoint of an edge and X^{-1} into the other; the
// contracted state is unchanged.  Rejects X with condition number > 1e12.
TensorNetwork gauge_insert(const TensorNetwork& net, int edge_id, const Mat& x);

// Upper bound on the bipartite entanglement entropy (in bits) between the
// open links listed in `region` and the remaining open links: the minimum
// over network cuts of the summed log2 dimensions of the severed edges,
// computed as a max-flow.  Disconnected regions give 0 across components.
double mincut_entropy_bound(const TensorNetwork& net, const std::set<int>& region);

// Full contraction by repeated elimination of terminal (single-neighbour)
// nodes.  Networks containing a cycle are rejected with a message naming an
// edge on the cycle.  Result indices follow net.open_links order; a closed
// network yields a rank-1 tensor holding the scalar.
Tensor contract_loop_free(const TensorNetwork& net);

// Gauges every node outside `nucleus` into an isometry pointing toward the
// nucleus: nodes are processed from the outermost BFS shell inward, each is
// SVD-split across its away-facing indices and the non-isometric factor is
// pushed along its unique parent edge.  Parallel parent edges are merged
// into one.  The contracted state is unchanged.
TensorNetwork peripheral_gauge(const TensorNetwork& net, const std::set<int>& nucleus);

// d^2 x d^2 operator swapping two links.  Fermionic links (d = 2 required)
// pick up a -1 on the doubly occupied pair; anyonic links pick up exp(i*phase).
Tensor exchange_gate(Statistics statistics, int64_t d, double phase = 0.0);

}  // namespace tnet
