#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "treenc/graph.hpp"
#include "treenc/problem.hpp"
#include "treenc/tree_solvers.hpp"

namespace treenc {

enum class NeighborhoodKind { kNET, kSCH };

inline std::string_view to_string(NeighborhoodKind k) { return k == NeighborhoodKind::kNET ? "NET" : "SCH"; }

// Instance plus its shortest-path pre-processing. Everything that searches
// over one instance shares a context.
class SearchContext {
 public:
  explicit SearchContext(const ProblemInstance& inst)
      : inst_(&inst), oracle_(all_pairs_shortest_paths(inst.net)) {}

  const ProblemInstance& instance() const { return *inst_; }
  const Network& net() const { return inst_->net; }
  const DistanceOracle& oracle() const { return oracle_; }

 private:
  const ProblemInstance* inst_;
  DistanceOracle oracle_;
};

struct EdgeExchange {
  EdgeId add = kNoEdge;
  EdgeId remove = kNoEdge;
  friend bool operator==(const EdgeExchange&, const EdgeExchange&) = default;
};

// Moves the vertex at position `from` to position `to` < from; the vertices
// in between slide one position later.
struct VertexShift {
  Vertex vertex = kNoVertex;
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const VertexShift&, const VertexShift&) = default;
};

// Moves the pair at position `from` to the first position `to` of an earlier
// p-group.
struct PairShift {
  VertexPair pair;
  std::size_t from = 0;
  std::size_t to = 0;
  friend bool operator==(const PairShift&, const PairShift&) = default;
};

using Move = std::variant<EdgeExchange, VertexShift, PairShift>;

// Visitors return false to stop an enumeration early. Enumerators return
// false if they were stopped.

// Non-tree edges ascending by id; for each, removal candidates in cycle order.
template <typename Visitor>
bool enumerate_edge_exchange(const Network& net, const SpanningTree& tree, Visitor&& visit) {
  for (EdgeId add = 0; add < net.num_edges(); ++add) {
    if (tree.contains(add)) continue;
    for (EdgeId remove : spanning_tree_cycle(net, tree, add)) {
      if (!visit(EdgeExchange{add, remove})) return false;
    }
  }
  return true;
}

inline std::vector<EdgeExchange> edge_exchange_moves(const Network& net, const SpanningTree& tree) {
  std::vector<EdgeExchange> out;
  enumerate_edge_exchange(net, tree, [&](const EdgeExchange& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

inline SpanningTree apply_edge_exchange(const Network& net, const SpanningTree& tree, const EdgeExchange& m) {
  std::vector<EdgeId> edges;
  edges.reserve(tree.edges().size());
  for (EdgeId e : tree.edges()) {
    if (e != m.remove) edges.push_back(e);
  }
  edges.push_back(m.add);
  return SpanningTree(net, std::move(edges));
}

// Every earlier target for every position: from ascending, then to ascending.
template <typename Visitor>
bool enumerate_vertex_shifts(const VSequence& seq, Visitor&& visit) {
  for (std::size_t from = 1; from < seq.order.size(); ++from) {
    for (std::size_t to = 0; to < from; ++to) {
      if (!visit(VertexShift{seq.order[from], from, to})) return false;
    }
  }
  return true;
}

template <typename T>
void shift_earlier(std::vector<T>& items, std::size_t from, std::size_t to) {
  std::rotate(items.begin() + static_cast<std::ptrdiff_t>(to), items.begin() + static_cast<std::ptrdiff_t>(from),
              items.begin() + static_cast<std::ptrdiff_t>(from) + 1);
}

inline VSequence apply_vertex_shift(VSequence seq, const VertexShift& m) {
  shift_earlier(seq.order, m.from, m.to);
  return seq;
}

// Index of the p-group holding position pos.
inline std::size_t group_of(const PSequence& seq, std::size_t pos) {
  auto it = std::upper_bound(seq.group_starts.begin(), seq.group_starts.end(), pos);
  return static_cast<std::size_t>(it - seq.group_starts.begin()) - 1;
}

// For each pair (by position), the distinct first positions of p-groups
// preceding its own, ascending.
template <typename Visitor>
bool enumerate_pair_shifts(const PSequence& seq, Visitor&& visit) {
  for (std::size_t from = 0; from < seq.order.size(); ++from) {
    const std::size_t g = group_of(seq, from);
    std::size_t last_target = seq.order.size();
    for (std::size_t h = 0; h < g; ++h) {
      const std::size_t to = seq.group_starts[h];
      if (to >= from || to == last_target) continue;
      last_target = to;
      if (!visit(PairShift{seq.order[from], from, to})) return false;
    }
  }
  return true;
}

inline std::vector<PairShift> pair_shift_moves(const PSequence& seq) {
  std::vector<PairShift> out;
  enumerate_pair_shifts(seq, [&](const PairShift& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

inline std::vector<VertexPair> apply_pair_shift(std::vector<VertexPair> order, const PairShift& m) {
  shift_earlier(order, m.from, m.to);
  return order;
}

// Builds a tree from a v-sequence: repeatedly take the first vertex not yet
// spanned and attach it by a shortest path to the nearest tree vertex. Among
// equally near tree vertices the path arriving from the smallest vertex wins,
// and it enters the tree by the shortest edge from there (smallest id on
// ties). a_et breaks ties the same way, so the two agree on IT instances.
// O(n^2) given the oracle.
inline SpanningTree a_it(const Network& net, const DistanceOracle& oracle, const VSequence& seq) {
  const int n = net.num_vertices();
  std::vector<char> in_tree(n, 0);
  std::vector<Vertex> nearest(n, kNoVertex);
  std::vector<Length> nearest_dist(n, kUnreachable);
  auto absorb = [&](Vertex w) {
    in_tree[w] = 1;
    for (Vertex v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const Length d = oracle.dist(v, w);
      if (d > nearest_dist[v]) continue;
      if (d == nearest_dist[v] && oracle.tip(v, w) >= oracle.tip(v, nearest[v])) continue;
      nearest_dist[v] = d;
      nearest[v] = w;
    }
  };
  absorb(net.depot());
  std::vector<EdgeId> edges;
  edges.reserve(n - 1);
  for (Vertex v : seq.order) {
    if (in_tree[v]) continue;
    // Walk to the last vertex before the tree, then enter the tree by its
    // shortest edge into it.
    const Vertex last = oracle.tip(v, nearest[v]);
    const std::vector<Vertex> path = path_vertices(oracle, v, last);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      edges.push_back(*net.find_edge(path[i], path[i + 1]));
    }
    EdgeId entry = kNoEdge;
    for (const Incidence& inc : net.incident(last)) {
      if (!in_tree[inc.neighbor]) continue;
      if (entry == kNoEdge || net.edge(inc.edge).length < net.edge(entry).length ||
          (net.edge(inc.edge).length == net.edge(entry).length && inc.edge < entry)) {
        entry = inc.edge;
      }
    }
    edges.push_back(entry);
    for (Vertex u : path) absorb(u);
  }
  if (static_cast<int>(edges.size()) != n - 1) {
    throw PreconditionError("a_it: v-sequence does not list every non-depot vertex");
  }
  return SpanningTree(net, std::move(edges));
}

// Builds a tree from a pair sequence: repeatedly take the first pair whose
// endpoints are still in different components, join them by a shortest path
// of the contracted network, then contract that path. The path is traced
// from the side without the depot, or from the pair's first vertex when
// neither side holds it. If the pairs run out
// before the forest spans, components are joined by shortest remaining edges
// in (length, id) order.
inline SpanningTree a_et(const Network& net, const DistanceOracle& oracle, std::span<const VertexPair> pairs) {
  const int n = net.num_vertices();
  ContractedGraph g(net, oracle);
  std::vector<EdgeId> edges;
  edges.reserve(n - 1);
  for (const VertexPair& p : pairs) {
    if (static_cast<int>(edges.size()) == n - 1) break;
    Vertex a = g.representative(p.first);
    Vertex b = g.representative(p.second);
    if (a == b) continue;
    if (a == g.representative(net.depot())) std::swap(a, b);
    const std::vector<Vertex> path = g.shortest_path_vertices(a, b);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) edges.push_back(g.edge_between(path[i], path[i + 1]));
    Vertex merged = path.front();
    for (std::size_t i = 1; i < path.size(); ++i) merged = g.contract(merged, path[i]);
  }
  if (static_cast<int>(edges.size()) < n - 1) {
    DisjointSet dsu(n);
    for (EdgeId id : edges) dsu.unite(net.edge(id).a, net.edge(id).b);
    std::vector<EdgeId> rest(net.num_edges());
    std::iota(rest.begin(), rest.end(), 0);
    std::sort(rest.begin(), rest.end(), [&](EdgeId l, EdgeId r) {
      const Length ll = net.edge(l).length, lr = net.edge(r).length;
      return ll != lr ? ll < lr : l < r;
    });
    for (EdgeId id : rest) {
      if (dsu.unite(net.edge(id).a, net.edge(id).b)) edges.push_back(id);
    }
  }
  return SpanningTree(net, std::move(edges));
}

inline SpanningTree a_et(const Network& net, std::span<const VertexPair> pairs) {
  return a_et(net, all_pairs_shortest_paths(net), pairs);
}

// Calls visit(move, neighbor) for each neighbor of `current` in enumeration
// order. Every neighbor is ES of its tree.
//  NET: edge exchange on the tree.
//  SCH, IT variants: vertex shift on the recovery sequence, then A-IT.
//  SCH, L-ETPC: pair shift on the reduced pair sequence, then A-ET.
template <typename Visitor>
bool for_each_neighbor(const SearchContext& ctx, const Solution& current, NeighborhoodKind kind, Visitor&& visit) {
  const ProblemInstance& inst = ctx.instance();
  const Network& net = ctx.net();
  if (kind == NeighborhoodKind::kNET) {
    return enumerate_edge_exchange(net, current.tree, [&](const EdgeExchange& m) {
      Solution nb = make_solution(inst, apply_edge_exchange(net, current.tree, m));
      return visit(Move{m}, nb);
    });
  }
  if (is_internal_transport(inst.variant)) {
    const VSequence seq = vertex_recovery_sequence(inst, current.schedule);
    return enumerate_vertex_shifts(seq, [&](const VertexShift& m) {
      Solution nb = make_solution(inst, a_it(net, ctx.oracle(), apply_vertex_shift(seq, m)));
      return visit(Move{m}, nb);
    });
  }
  const PSequence seq = pairs_connection_sequence(inst, current.schedule, /*reduced=*/true);
  return enumerate_pair_shifts(seq, [&](const PairShift& m) {
    const auto order = apply_pair_shift(seq.order, m);
    Solution nb = make_solution(inst, a_et(net, ctx.oracle(), order));
    return visit(Move{m}, nb);
  });
}

inline std::vector<std::pair<Move, Solution>> neighbors(const SearchContext& ctx, const Solution& current,
                                                        NeighborhoodKind kind) {
  std::vector<std::pair<Move, Solution>> out;
  for_each_neighbor(ctx, current, kind, [&](const Move& m, Solution& nb) {
    out.emplace_back(m, std::move(nb));
    return true;
  });
  return out;
}

}  // namespace treenc
