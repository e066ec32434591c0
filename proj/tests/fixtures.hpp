#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "treenc/graph.hpp"
#include "treenc/problem.hpp"
#include "treenc/random.hpp"

namespace fixtures {

using namespace treenc;

// Triangle used throughout: e0 = (0,1,1), e1 = (0,2,3), e2 = (1,2,1), depot 0.
inline Network tri(Length e1 = 3, Length e2 = 1) { return Network(3, {{0, 1, 1}, {0, 2, e1}, {1, 2, e2}}, 0); }

// Random connected network: a random tree plus `extra` further distinct edges.
inline Network random_network(Rng& rng, int n, int extra, Length max_len) {
  std::set<std::pair<int, int>> used;
  std::vector<Edge> edges;
  std::vector<Vertex> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  for (int i = 1; i < n; ++i) {
    const Vertex a = perm[i], b = perm[rng.below(i)];
    used.insert(std::minmax(a, b));
    edges.push_back({a, b, rng.between(1, max_len)});
  }
  const int max_extra = n * (n - 1) / 2 - (n - 1);
  extra = std::min(extra, max_extra);
  while (extra > 0) {
    const auto a = static_cast<Vertex>(rng.below(n)), b = static_cast<Vertex>(rng.below(n));
    if (a == b || !used.insert(std::minmax(a, b)).second) continue;
    edges.push_back({a, b, rng.between(1, max_len)});
    --extra;
  }
  rng.shuffle(edges);
  return Network(n, std::move(edges), static_cast<Vertex>(rng.below(n)));
}

// Same as random_network but every length is a distinct power of two, so
// every pair has a unique shortest path.
inline Network generic_network(Rng& rng, int n, int extra) {
  const Network base = random_network(rng, n, extra, 1);
  std::vector<Length> lengths(base.num_edges());
  for (int i = 0; i < base.num_edges(); ++i) lengths[i] = Length{1} << i;
  rng.shuffle(lengths);
  std::vector<Edge> edges(base.edges().begin(), base.edges().end());
  for (int i = 0; i < base.num_edges(); ++i) edges[i].length = lengths[i];
  return Network(n, std::move(edges), base.depot());
}

inline Network random_tree(Rng& rng, int n, Length max_len) { return random_network(rng, n, 0, max_len); }

inline ProblemInstance with_variant(Rng& rng, Network net, Variant v, Objective max_weight = 10, int max_pairs = 0) {
  const int n = net.num_vertices();
  switch (v) {
    case Variant::kUSRT: return make_unweighted_instance(std::move(net));
    case Variant::kSWRT: {
      std::vector<Objective> w(n);
      for (auto& x : w) x = rng.between(1, max_weight);
      return make_sum_instance(std::move(net), std::move(w));
    }
    case Variant::kL: {
      const Length total = net.total_length();
      std::vector<Objective> d(n);
      for (auto& x : d) x = rng.between(0, total);
      return make_lateness_instance(std::move(net), std::move(d));
    }
    case Variant::kLETPC: {
      const Length total = net.total_length();
      std::vector<VertexPair> all;
      for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) all.push_back({a, b});
      }
      rng.shuffle(all);
      const int q = max_pairs > 0 ? static_cast<int>(rng.between(1, std::min<int>(max_pairs, all.size())))
                                  : static_cast<int>(rng.between(1, all.size()));
      std::vector<PairDueDate> pairs;
      for (int i = 0; i < q; ++i) pairs.push_back({all[i], rng.between(0, total)});
      return make_pair_lateness_instance(std::move(net), std::move(pairs));
    }
  }
  return make_unweighted_instance(std::move(net));
}

inline constexpr Variant kAllVariants[] = {Variant::kUSRT, Variant::kSWRT, Variant::kL, Variant::kLETPC};

// Random spanning tree of `net`: Kruskal over a random edge order.
inline std::vector<EdgeId> random_spanning_tree(Rng& rng, const Network& net) {
  std::vector<EdgeId> ids(net.num_edges());
  for (int i = 0; i < net.num_edges(); ++i) ids[i] = i;
  rng.shuffle(ids);
  DisjointSet dsu(net.num_vertices());
  std::vector<EdgeId> out;
  for (EdgeId e : ids) {
    if (dsu.unite(net.edge(e).a, net.edge(e).b)) out.push_back(e);
  }
  return out;
}

// Uniformly random order of the tree's edges that is feasible for the variant:
// IT orders grow from the depot, ET orders are arbitrary.
inline std::vector<EdgeId> random_feasible_order(Rng& rng, const ProblemInstance& inst,
                                                 const std::vector<EdgeId>& tree) {
  std::vector<EdgeId> order = tree;
  if (!is_internal_transport(inst.variant)) {
    rng.shuffle(order);
    return order;
  }
  const Network& net = inst.net;
  std::vector<char> reached(net.num_vertices(), 0);
  reached[net.depot()] = 1;
  std::vector<EdgeId> remaining = tree, out;
  while (!remaining.empty()) {
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const Edge& e = net.edge(remaining[i]);
      if (reached[e.a] != reached[e.b]) frontier.push_back(i);
    }
    const std::size_t pick = frontier[rng.below(frontier.size())];
    const Edge& e = net.edge(remaining[pick]);
    reached[e.a] = reached[e.b] = 1;
    out.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace fixtures
