#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treenc/error.hpp"

namespace treenc {

using Vertex = int;
using EdgeId = int;
using Length = std::int64_t;

inline constexpr Vertex kNoVertex = -1;
inline constexpr EdgeId kNoEdge = -1;
// Large enough to never be reached by a path, small enough that adding two of
// them does not overflow.
inline constexpr Length kUnreachable = std::numeric_limits<Length>::max() / 4;

struct Edge {
  Vertex a = 0;
  Vertex b = 0;
  Length length = 0;

  Vertex other(Vertex v) const { return v == a ? b : a; }
  bool touches(Vertex v) const { return v == a || v == b; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbor;
  EdgeId edge;
};

// Connected undirected network with positive integer lengths and a depot.
class Network {
 public:
  Network() = default;

  Network(int n, std::vector<Edge> edges, Vertex depot)
      : n_(n), edges_(std::move(edges)), depot_(depot), adjacency_(n > 0 ? n : 0) {
    if (n_ < 1) throw PreconditionError("network needs at least one vertex");
    if (depot_ < 0 || depot_ >= n_) {
      throw PreconditionError("depot " + std::to_string(depot_) + " out of range");
    }
    for (EdgeId id = 0; id < num_edges(); ++id) {
      const Edge& e = edges_[id];
      if (e.a < 0 || e.a >= n_ || e.b < 0 || e.b >= n_) {
        throw PreconditionError("edge " + std::to_string(id) + " has an endpoint out of range");
      }
      if (e.a == e.b) throw PreconditionError("edge " + std::to_string(id) + " is a self-loop");
      if (e.length <= 0) {
        throw PreconditionError("edge " + std::to_string(id) + " must have positive length");
      }
      adjacency_[e.a].push_back({e.b, id});
      adjacency_[e.b].push_back({e.a, id});
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(),
                [](const Incidence& l, const Incidence& r) { return l.neighbor < r.neighbor; });
      for (std::size_t i = 1; i < list.size(); ++i) {
        if (list[i].neighbor == list[i - 1].neighbor) {
          throw PreconditionError("parallel edges " + std::to_string(list[i - 1].edge) + " and " +
                                  std::to_string(list[i].edge));
        }
      }
    }
    if (!connected()) throw PreconditionError("network is not connected");
  }

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  Vertex depot() const { return depot_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> incident(Vertex v) const { return adjacency_[v]; }

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const {
    const auto& list = adjacency_[u];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Incidence& inc, Vertex x) { return inc.neighbor < x; });
    if (it == list.end() || it->neighbor != v) return std::nullopt;
    return it->edge;
  }

  Length total_length() const {
    Length sum = 0;
    for (const Edge& e : edges_) sum += e.length;
    return sum;
  }

 private:
  bool connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : adjacency_[v]) {
        if (!seen[inc.neighbor]) {
          seen[inc.neighbor] = 1;
          ++count;
          stack.push_back(inc.neighbor);
        }
      }
    }
    return count == n_;
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  Vertex depot_ = 0;
  std::vector<std::vector<Incidence>> adjacency_;
};

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if a and b were already in the same set.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool same(int a, int b) { return find(a) == find(b); }
  int size_of(int x) { return size_[find(x)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// All-pairs shortest path lengths plus backtracking tips: tip(u, v) is the
// last vertex before v on the recorded shortest path from u to v.
class DistanceOracle {
 public:
  DistanceOracle() = default;
  explicit DistanceOracle(int n)
      : n_(n),
        dist_(static_cast<std::size_t>(n) * n, kUnreachable),
        tip_(static_cast<std::size_t>(n) * n, kNoVertex) {}

  int size() const { return n_; }
  Length dist(Vertex u, Vertex v) const { return dist_[index(u, v)]; }
  Vertex tip(Vertex u, Vertex v) const { return tip_[index(u, v)]; }
  Length& dist_ref(Vertex u, Vertex v) { return dist_[index(u, v)]; }
  Vertex& tip_ref(Vertex u, Vertex v) { return tip_[index(u, v)]; }

  friend bool operator==(const DistanceOracle&, const DistanceOracle&) = default;

 private:
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  std::vector<Length> dist_;
  std::vector<Vertex> tip_;
};

// Floyd-Warshall. Only strict improvements replace a recorded path, so the
// first shortest path discovered in pivot order is the one kept.
inline DistanceOracle all_pairs_shortest_paths(const Network& net) {
  const int n = net.num_vertices();
  DistanceOracle oracle(n);
  for (Vertex v = 0; v < n; ++v) {
    oracle.dist_ref(v, v) = 0;
    oracle.tip_ref(v, v) = v;
  }
  for (const Edge& e : net.edges()) {
    oracle.dist_ref(e.a, e.b) = e.length;
    oracle.dist_ref(e.b, e.a) = e.length;
    oracle.tip_ref(e.a, e.b) = e.a;
    oracle.tip_ref(e.b, e.a) = e.b;
  }
  for (Vertex k = 0; k < n; ++k) {
    for (Vertex i = 0; i < n; ++i) {
      const Length dik = oracle.dist(i, k);
      if (dik >= kUnreachable) continue;
      for (Vertex j = 0; j < n; ++j) {
        const Length candidate = dik + oracle.dist(k, j);
        if (candidate < oracle.dist(i, j)) {
          oracle.dist_ref(i, j) = candidate;
          oracle.tip_ref(i, j) = oracle.tip(k, j);
        }
      }
    }
  }
  return oracle;
}

// Vertices of the recorded shortest path, u first.
inline std::vector<Vertex> path_vertices(const DistanceOracle& oracle, Vertex u, Vertex v) {
  std::vector<Vertex> out{v};
  for (Vertex w = v; w != u;) {
    w = oracle.tip(u, w);
    out.push_back(w);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Edge ids of the recorded shortest path from u to v, in walking order.
inline std::vector<EdgeId> reconstruct_path(const Network& net, const DistanceOracle& oracle,
                                            Vertex u, Vertex v) {
  if (u == v) throw PreconditionError("empty path: endpoints coincide");
  std::vector<Vertex> vertices = path_vertices(oracle, u, v);
  std::vector<EdgeId> out;
  out.reserve(vertices.size() - 1);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    out.push_back(*net.find_edge(vertices[i], vertices[i + 1]));
  }
  return out;
}

// Spanning tree of a network, rooted at the depot.
class SpanningTree {
 public:
  SpanningTree() = default;

  SpanningTree(const Network& net, std::vector<EdgeId> edge_ids)
      : edges_(std::move(edge_ids)),
        in_tree_(net.num_edges(), 0),
        parent_(net.num_vertices(), kNoVertex),
        parent_edge_(net.num_vertices(), kNoEdge),
        depth_(net.num_vertices(), -1),
        children_(net.num_vertices()) {
    const int n = net.num_vertices();
    if (static_cast<int>(edges_.size()) != n - 1) {
      throw PreconditionError("spanning tree needs exactly n-1 edges");
    }
    std::sort(edges_.begin(), edges_.end());
    std::vector<std::vector<Incidence>> adj(n);
    for (EdgeId id : edges_) {
      if (id < 0 || id >= net.num_edges()) throw PreconditionError("edge id out of range");
      if (in_tree_[id]) throw PreconditionError("duplicate tree edge " + std::to_string(id));
      in_tree_[id] = 1;
      const Edge& e = net.edge(id);
      adj[e.a].push_back({e.b, id});
      adj[e.b].push_back({e.a, id});
    }
    const Vertex root = net.depot();
    depth_[root] = 0;
    bfs_order_.push_back(root);
    for (std::size_t head = 0; head < bfs_order_.size(); ++head) {
      Vertex v = bfs_order_[head];
      for (const Incidence& inc : adj[v]) {
        if (inc.edge == parent_edge_[v]) continue;
        if (depth_[inc.neighbor] >= 0) throw PreconditionError("tree edges contain a cycle");
        depth_[inc.neighbor] = depth_[v] + 1;
        parent_[inc.neighbor] = v;
        parent_edge_[inc.neighbor] = inc.edge;
        children_[v].push_back(inc.neighbor);
        bfs_order_.push_back(inc.neighbor);
      }
    }
    if (static_cast<int>(bfs_order_.size()) != n) {
      throw PreconditionError("tree edges do not span the network");
    }
    for (auto& c : children_) std::sort(c.begin(), c.end());
  }

  int num_vertices() const { return static_cast<int>(parent_.size()); }
  Vertex root() const { return bfs_order_.empty() ? kNoVertex : bfs_order_.front(); }
  // Sorted ascending.
  std::span<const EdgeId> edges() const { return edges_; }
  bool contains(EdgeId id) const { return id >= 0 && id < static_cast<int>(in_tree_.size()) && in_tree_[id]; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  EdgeId parent_edge(Vertex v) const { return parent_edge_[v]; }
  int depth(Vertex v) const { return depth_[v]; }
  std::span<const Vertex> children(Vertex v) const { return children_[v]; }
  std::span<const Vertex> bfs_order() const { return bfs_order_; }

  // The endpoint of a tree edge farther from the depot.
  Vertex far_endpoint(const Network& net, EdgeId id) const {
    const Edge& e = net.edge(id);
    return parent_edge_[e.a] == id ? e.a : e.b;
  }

  Length total_length(const Network& net) const {
    Length sum = 0;
    for (EdgeId id : edges_) sum += net.edge(id).length;
    return sum;
  }

  friend bool operator==(const SpanningTree& l, const SpanningTree& r) { return l.edges_ == r.edges_; }

 private:
  std::vector<EdgeId> edges_;
  std::vector<char> in_tree_;
  std::vector<Vertex> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<int> depth_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<Vertex> bfs_order_;
};

// Kruskal over edges in ascending (length, id) order.
inline SpanningTree minimum_spanning_tree(const Network& net) {
  std::vector<EdgeId> order(net.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](EdgeId l, EdgeId r) {
    const Length ll = net.edge(l).length, lr = net.edge(r).length;
    return ll != lr ? ll < lr : l < r;
  });
  DisjointSet dsu(net.num_vertices());
  std::vector<EdgeId> chosen;
  chosen.reserve(net.num_vertices() - 1);
  for (EdgeId id : order) {
    const Edge& e = net.edge(id);
    if (dsu.unite(e.a, e.b)) chosen.push_back(id);
  }
  return SpanningTree(net, std::move(chosen));
}

// Tree path between the endpoints of a non-tree edge, walking from its
// first endpoint to its second.
inline std::vector<EdgeId> spanning_tree_cycle(const Network& net, const SpanningTree& tree,
                                               EdgeId non_tree_edge) {
  if (tree.contains(non_tree_edge)) {
    throw PreconditionError("edge " + std::to_string(non_tree_edge) + " is already in the tree");
  }
  Vertex a = net.edge(non_tree_edge).a;
  Vertex b = net.edge(non_tree_edge).b;
  std::vector<EdgeId> from_a, from_b;
  while (tree.depth(a) > tree.depth(b)) {
    from_a.push_back(tree.parent_edge(a));
    a = tree.parent(a);
  }
  while (tree.depth(b) > tree.depth(a)) {
    from_b.push_back(tree.parent_edge(b));
    b = tree.parent(b);
  }
  while (a != b) {
    from_a.push_back(tree.parent_edge(a));
    a = tree.parent(a);
    from_b.push_back(tree.parent_edge(b));
    b = tree.parent(b);
  }
  from_a.insert(from_a.end(), from_b.rbegin(), from_b.rend());
  return from_a;
}

// A network whose vertices are being merged, together with shortest-path
// data kept current under each merge. Super-vertices are named by their
// smallest original vertex id.
class ContractedGraph {
 public:
  ContractedGraph(const Network& net, DistanceOracle oracle)
      : n_(net.num_vertices()),
        rep_(n_),
        members_(n_),
        alive_(),
        oracle_(std::move(oracle)),
        adj_(static_cast<std::size_t>(n_) * n_, kNoEdge),
        lengths_(net.num_edges()) {
    for (Vertex v = 0; v < n_; ++v) {
      rep_[v] = v;
      members_[v] = {v};
      alive_.push_back(v);
    }
    for (EdgeId id = 0; id < net.num_edges(); ++id) {
      const Edge& e = net.edge(id);
      lengths_[id] = e.length;
      adj(e.a, e.b) = id;
      adj(e.b, e.a) = id;
    }
  }

  explicit ContractedGraph(const Network& net) : ContractedGraph(net, all_pairs_shortest_paths(net)) {}

  int num_super_vertices() const { return static_cast<int>(alive_.size()); }
  // Live representatives, ascending.
  std::span<const Vertex> super_vertices() const { return alive_; }
  Vertex representative(Vertex v) const { return rep_[v]; }
  std::span<const Vertex> members(Vertex rep) const { return members_[rep]; }

  Length dist(Vertex x, Vertex y) const { return oracle_.dist(rep_[x], rep_[y]); }
  Vertex tip(Vertex x, Vertex y) const { return oracle_.tip(rep_[x], rep_[y]); }

  // Surviving original edge joining two super-vertices, if any.
  EdgeId edge_between(Vertex x, Vertex y) const { return adj_[index(rep_[x], rep_[y])]; }
  Length edge_length(EdgeId id) const { return lengths_[id]; }

  // Original edge ids of the recorded shortest path between the super-vertices
  // of x and y, walking from x.
  std::vector<EdgeId> shortest_path(Vertex x, Vertex y) const {
    x = rep_[x];
    y = rep_[y];
    std::vector<EdgeId> out;
    for (Vertex w = y; w != x;) {
      Vertex prev = oracle_.tip(x, w);
      out.push_back(adj_[index(prev, w)]);
      w = prev;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Super-vertex sequence of the recorded shortest path, x first.
  std::vector<Vertex> shortest_path_vertices(Vertex x, Vertex y) const {
    x = rep_[x];
    y = rep_[y];
    std::vector<Vertex> out{y};
    for (Vertex w = y; w != x;) {
      w = oracle_.tip(x, w);
      out.push_back(w);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Merges the adjacent super-vertices of x and y; returns the new
  // representative. Distances and tips of every other pair are updated in
  // O(k^2) for k live super-vertices. Ties keep the existing path first, then
  // the route through the surviving representative.
  Vertex contract(Vertex x, Vertex y) {
    x = rep_[x];
    y = rep_[y];
    if (x == y || adj_[index(x, y)] == kNoEdge) {
      throw PreconditionError("contract: super-vertices are not joined by an edge");
    }
    const Vertex z = std::min(x, y);
    const Vertex gone = std::max(x, y);
    auto phi = [&](Vertex w) { return w == gone ? z : w; };

    for (Vertex u : alive_) {
      if (u == x || u == y) continue;
      for (Vertex v : alive_) {
        if (v == x || v == y) continue;
        Length best = oracle_.dist(u, v);
        Vertex best_tip = oracle_.tip(u, v);
        const Length via_z = add(oracle_.dist(u, z), oracle_.dist(gone, v));
        if (via_z < best) {
          best = via_z;
          best_tip = oracle_.tip(gone, v);
        }
        const Length via_gone = add(oracle_.dist(u, gone), oracle_.dist(z, v));
        if (via_gone < best) {
          best = via_gone;
          best_tip = oracle_.tip(z, v);
        }
        oracle_.dist_ref(u, v) = best;
        oracle_.tip_ref(u, v) = phi(best_tip);
      }
    }
    for (Vertex u : alive_) {
      if (u == x || u == y) continue;
      // Column z: paths from u into the merged vertex.
      // Ties go to the side entered from the smaller vertex, so the tip of
      // a merged column does not depend on the merge order.
      Length to = oracle_.dist(u, z);
      Vertex to_tip = oracle_.tip(u, z);
      if (oracle_.dist(u, gone) < to || (oracle_.dist(u, gone) == to && oracle_.tip(u, gone) < to_tip)) {
        to = oracle_.dist(u, gone);
        to_tip = oracle_.tip(u, gone);
      }
      // Row z: paths out of the merged vertex.
      Length from = oracle_.dist(z, u);
      Vertex from_tip = oracle_.tip(z, u);
      if (oracle_.dist(gone, u) < from) {
        from = oracle_.dist(gone, u);
        from_tip = oracle_.tip(gone, u);
      }
      oracle_.dist_ref(u, z) = to;
      oracle_.tip_ref(u, z) = phi(to_tip);
      oracle_.dist_ref(z, u) = from;
      oracle_.tip_ref(z, u) = phi(from_tip);
    }
    oracle_.dist_ref(z, z) = 0;
    oracle_.tip_ref(z, z) = z;

    // Adjacency: drop the loop, keep the shortest of any parallel pair.
    adj(z, gone) = kNoEdge;
    adj(gone, z) = kNoEdge;
    for (Vertex w : alive_) {
      if (w == z || w == gone) continue;
      EdgeId keep = adj(z, w);
      EdgeId other = adj(gone, w);
      if (other != kNoEdge &&
          (keep == kNoEdge || lengths_[other] < lengths_[keep] ||
           (lengths_[other] == lengths_[keep] && other < keep))) {
        keep = other;
      }
      adj(z, w) = keep;
      adj(w, z) = keep;
      adj(gone, w) = kNoEdge;
      adj(w, gone) = kNoEdge;
    }

    for (Vertex v : members_[gone]) rep_[v] = z;
    members_[z].insert(members_[z].end(), members_[gone].begin(), members_[gone].end());
    std::sort(members_[z].begin(), members_[z].end());
    members_[gone].clear();
    alive_.erase(std::find(alive_.begin(), alive_.end(), gone));
    return z;
  }

 private:
  static Length add(Length a, Length b) { return (a >= kUnreachable || b >= kUnreachable) ? kUnreachable : a + b; }
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
  }
  EdgeId& adj(Vertex u, Vertex v) { return adj_[index(u, v)]; }

  int n_;
  std::vector<Vertex> rep_;
  std::vector<std::vector<Vertex>> members_;
  std::vector<Vertex> alive_;
  DistanceOracle oracle_;
  std::vector<EdgeId> adj_;
  std::vector<Length> lengths_;
};

}  // namespace treenc
