#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "treenc/error.hpp"
#include "treenc/graph.hpp"
#include "treenc/problem.hpp"

// Exact solvers for a fixed tree of essential edges, plus exhaustive oracles.
//
// Each solver treats the tree edges as jobs: the job of edge e is identified
// with its far endpoint (relative to the depot), its processing time is the
// edge length, and for IT variants a parent edge must precede its children.
namespace treenc {

// Due date assigned to tree edges no relevant pair depends on.
inline constexpr Objective kNoDueDate = std::numeric_limits<Objective>::max();

namespace detail {

inline std::vector<EdgeId> edges_of_vertices(const SpanningTree& tree, std::span<const Vertex> vertices) {
  std::vector<EdgeId> out;
  out.reserve(vertices.size());
  for (Vertex v : vertices) out.push_back(tree.parent_edge(v));
  return out;
}

}  // namespace detail

// Out-tree sequencing for total weighted completion time by ratio merging:
// the non-root block with the largest weight/length ratio is appended to the
// block holding its parent job, until only the root block remains. Ratio ties
// go to the smallest head vertex.
inline EdgeSchedule es_swrt(const ProblemInstance& inst, const SpanningTree& tree) {
  if (inst.variant != Variant::kUSRT && inst.variant != Variant::kSWRT) {
    throw UnsupportedVariantError("es_swrt expects USRT or SWRT");
  }
  const Network& net = inst.net;
  const int n = inst.n();
  const Vertex root = tree.root();

  struct Block {
    std::vector<Vertex> jobs;
    Objective weight = 0;
    Length length = 0;
    bool active = false;
  };
  std::vector<Block> blocks(n);
  std::vector<Vertex> owner(n);
  for (Vertex v = 0; v < n; ++v) {
    owner[v] = v;
    if (v == root) continue;
    blocks[v] = Block{{v}, inst.weights[v], net.edge(tree.parent_edge(v)).length, true};
  }

  for (int step = 0; step < n - 1; ++step) {
    Vertex pick = kNoVertex;
    for (Vertex h = 0; h < n; ++h) {
      if (!blocks[h].active) continue;
      if (pick == kNoVertex) {
        pick = h;
        continue;
      }
      // w_h / p_h > w_pick / p_pick, all lengths positive.
      const __int128 lhs = static_cast<__int128>(blocks[h].weight) * blocks[pick].length;
      const __int128 rhs = static_cast<__int128>(blocks[pick].weight) * blocks[h].length;
      if (lhs > rhs) pick = h;
    }
    const Vertex into = owner[tree.parent(pick)];
    Block& dst = blocks[into];
    Block& src = blocks[pick];
    for (Vertex v : src.jobs) owner[v] = into;
    dst.jobs.insert(dst.jobs.end(), src.jobs.begin(), src.jobs.end());
    dst.weight += src.weight;
    dst.length += src.length;
    src = Block{};
  }
  return EdgeSchedule{detail::edges_of_vertices(tree, blocks[root].jobs)};
}

// Least-cost-last for maximum lateness under out-tree precedence: with P the
// total length still unplaced, the job placed last among those whose
// successors are already placed is the one minimizing P - d (largest due
// date; ties to the smallest vertex).
inline EdgeSchedule es_lmax(const ProblemInstance& inst, const SpanningTree& tree) {
  if (inst.variant != Variant::kL) throw UnsupportedVariantError("es_lmax expects L");
  const int n = inst.n();
  const Vertex root = tree.root();
  std::vector<int> open_children(n);
  for (Vertex v = 0; v < n; ++v) open_children[v] = static_cast<int>(tree.children(v).size());
  std::vector<char> placed(n, 0);
  placed[root] = 1;
  std::vector<Vertex> reversed;
  reversed.reserve(n - 1);
  for (int step = 0; step < n - 1; ++step) {
    Vertex pick = kNoVertex;
    for (Vertex v = 0; v < n; ++v) {
      if (placed[v] || open_children[v] != 0) continue;
      if (pick == kNoVertex || inst.vertex_due_dates[v] > inst.vertex_due_dates[pick]) pick = v;
    }
    placed[pick] = 1;
    --open_children[tree.parent(pick)];
    reversed.push_back(pick);
  }
  std::reverse(reversed.begin(), reversed.end());
  return EdgeSchedule{detail::edges_of_vertices(tree, reversed)};
}

// Effective due date of each tree edge: the smallest due date over relevant
// pairs whose tree path uses it, kNoDueDate if none does. Indexed by edge id.
inline std::vector<Objective> effective_edge_due_dates(const ProblemInstance& inst, const SpanningTree& tree) {
  std::vector<Objective> due(inst.net.num_edges(), kNoDueDate);
  for (const auto& p : inst.pair_due_dates) {
    Vertex a = p.pair.first, b = p.pair.second;
    auto tighten = [&](Vertex& v) {
      EdgeId e = tree.parent_edge(v);
      due[e] = std::min(due[e], p.due);
      v = tree.parent(v);
    };
    while (tree.depth(a) > tree.depth(b)) tighten(a);
    while (tree.depth(b) > tree.depth(a)) tighten(b);
    while (a != b) {
      tighten(a);
      tighten(b);
    }
  }
  return due;
}

// Without precedence, pair lateness reduces to edge lateness against the
// effective due dates, which earliest-due-date order minimizes.
inline EdgeSchedule es_letpc(const ProblemInstance& inst, const SpanningTree& tree) {
  if (inst.variant != Variant::kLETPC) throw UnsupportedVariantError("es_letpc expects L-ETPC");
  const auto due = effective_edge_due_dates(inst, tree);
  std::vector<EdgeId> order(tree.edges().begin(), tree.edges().end());
  std::stable_sort(order.begin(), order.end(), [&](EdgeId l, EdgeId r) { return due[l] < due[r]; });
  return EdgeSchedule{std::move(order)};
}

// ES(T): the optimal construction order of a tree for the instance's variant.
inline EdgeSchedule solve_tree(const ProblemInstance& inst, const SpanningTree& tree) {
  switch (inst.variant) {
    case Variant::kUSRT:
    case Variant::kSWRT: return es_swrt(inst, tree);
    case Variant::kL: return es_lmax(inst, tree);
    case Variant::kLETPC: return es_letpc(inst, tree);
  }
  throw UnsupportedVariantError("unknown variant");
}

// A tree of essential edges with its optimal order and objective value.
struct Solution {
  SpanningTree tree;
  EdgeSchedule schedule;
  Objective objective = 0;

  friend bool operator==(const Solution& l, const Solution& r) {
    return l.tree == r.tree && l.schedule == r.schedule && l.objective == r.objective;
  }
};

inline Solution make_solution(const ProblemInstance& inst, SpanningTree tree) {
  EdgeSchedule sched = solve_tree(inst, tree);
  const Objective value = evaluate(inst, sched).objective;
  return Solution{std::move(tree), std::move(sched), value};
}

struct ScheduleResult {
  Objective objective = 0;
  EdgeSchedule schedule;
};

inline constexpr int kBruteForceTreeMaxVertices = 10;

// Exhaustive minimum over every feasible order of the tree's edges: linear
// extensions of the out-tree for IT variants, all permutations for L-ETPC.
// The first optimal order in enumeration order is returned.
inline ScheduleResult brute_force_tree(const ProblemInstance& inst, const SpanningTree& tree) {
  if (inst.n() > kBruteForceTreeMaxVertices) {
    throw BudgetExceededError("brute_force_tree: more than " + std::to_string(kBruteForceTreeMaxVertices) +
                              " vertices");
  }
  ScheduleResult best;
  bool found = false;
  auto consider = [&](const std::vector<EdgeId>& order) {
    EdgeSchedule sched{order};
    const Objective value = evaluate(inst, sched).objective;
    if (!found || value < best.objective) {
      best = {value, std::move(sched)};
      found = true;
    }
  };

  if (!is_internal_transport(inst.variant)) {
    std::vector<EdgeId> order(tree.edges().begin(), tree.edges().end());
    do {
      consider(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
  }

  const int n = inst.n();
  std::vector<char> built(n, 0);
  built[tree.root()] = 1;
  std::vector<EdgeId> order;
  std::function<void()> extend = [&]() {
    if (static_cast<int>(order.size()) == n - 1) {
      consider(order);
      return;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (built[v] || !built[tree.parent(v)]) continue;
      built[v] = 1;
      order.push_back(tree.parent_edge(v));
      extend();
      order.pop_back();
      built[v] = 0;
    }
  };
  extend();
  return best;
}

// Limits for brute_force_instance. The enumeration stops with an error once
// more than max_spanning_trees trees have been generated.
struct BruteForceBudget {
  long long max_spanning_trees = 200000;
};

struct InstanceOptimum {
  Objective objective = 0;
  Solution solution;
  long long trees_enumerated = 0;
};

// Calls visit(edge ids) for every spanning tree, edges ascending. Trees are
// produced in lexicographic order of their edge id sets.
inline long long for_each_spanning_tree(const Network& net, long long limit,
                                        const std::function<void(const std::vector<EdgeId>&)>& visit) {
  const int n = net.num_vertices();
  const int m = net.num_edges();
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::vector<EdgeId> chosen;
  long long count = 0;
  std::function<void(int)> recurse = [&](int next) {
    if (static_cast<int>(chosen.size()) == n - 1) {
      if (++count > limit) throw BudgetExceededError("spanning tree budget exceeded");
      visit(chosen);
      return;
    }
    if (m - next < n - 1 - static_cast<int>(chosen.size())) return;
    const Edge& e = net.edge(next);
    const int ca = comp[e.a], cb = comp[e.b];
    if (ca != cb) {
      std::vector<int> saved = comp;
      for (int& c : comp) {
        if (c == cb) c = ca;
      }
      chosen.push_back(next);
      recurse(next + 1);
      chosen.pop_back();
      comp = std::move(saved);
    }
    recurse(next + 1);
  };
  recurse(0);
  return count;
}

// Global optimum: minimum over all spanning trees T of F(ES(T)).
inline InstanceOptimum brute_force_instance(const ProblemInstance& inst, BruteForceBudget budget = {}) {
  InstanceOptimum best;
  bool found = false;
  best.trees_enumerated =
      for_each_spanning_tree(inst.net, budget.max_spanning_trees, [&](const std::vector<EdgeId>& edges) {
        Solution s = make_solution(inst, SpanningTree(inst.net, edges));
        if (!found || s.objective < best.objective) {
          best.objective = s.objective;
          best.solution = std::move(s);
          found = true;
        }
      });
  return best;
}

}  // namespace treenc
