#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treenc/error.hpp"
#include "treenc/graph.hpp"

namespace treenc {

using Objective = std::int64_t;

enum class Variant { kUSRT, kSWRT, kL, kLETPC };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kUSRT: return "USRT";
    case Variant::kSWRT: return "SWRT";
    case Variant::kL: return "L";
    case Variant::kLETPC: return "L-ETPC";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "USRT") return Variant::kUSRT;
  if (s == "SWRT") return Variant::kSWRT;
  if (s == "L") return Variant::kL;
  if (s == "L-ETPC" || s == "L_ETPC") return Variant::kLETPC;
  return std::nullopt;
}

// Internal transportation: the built part must stay a depot-rooted subtree.
inline bool is_internal_transport(Variant v) { return v != Variant::kLETPC; }
inline bool is_lateness(Variant v) { return v == Variant::kL || v == Variant::kLETPC; }

// Unordered vertex pair, stored with first < second.
struct VertexPair {
  Vertex first = 0;
  Vertex second = 0;

  static VertexPair of(Vertex u, Vertex v) { return u < v ? VertexPair{u, v} : VertexPair{v, u}; }
  bool contains(Vertex v) const { return v == first || v == second; }
  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

struct PairDueDate {
  VertexPair pair;
  Objective due = 0;
  friend bool operator==(const PairDueDate&, const PairDueDate&) = default;
};

// A network plus the objective data its variant needs. USRT keeps a weight
// vector of ones so that both sum variants share one evaluation path.
struct ProblemInstance {
  Network net;
  Variant variant = Variant::kUSRT;
  std::vector<Objective> weights;           // USRT, SWRT; indexed by vertex
  std::vector<Objective> vertex_due_dates;  // L; indexed by vertex
  std::vector<PairDueDate> pair_due_dates;  // L-ETPC; sorted by pair

  int n() const { return net.num_vertices(); }
  int q() const { return static_cast<int>(pair_due_dates.size()); }

  // Smallest due date in the instance; empty for sum variants.
  std::optional<Objective> min_due_date() const {
    std::optional<Objective> best;
    if (variant == Variant::kL) {
      for (Vertex v = 0; v < n(); ++v) {
        if (v == net.depot()) continue;
        if (!best || vertex_due_dates[v] < *best) best = vertex_due_dates[v];
      }
    } else if (variant == Variant::kLETPC) {
      for (const auto& p : pair_due_dates) {
        if (!best || p.due < *best) best = p.due;
      }
    }
    return best;
  }

  void validate() const {
    const auto n_sz = static_cast<std::size_t>(n());
    if (n() < 2) throw PreconditionError("instance needs at least two vertices");
    switch (variant) {
      case Variant::kUSRT:
      case Variant::kSWRT:
        if (weights.size() != n_sz) throw PreconditionError("weights: expected one per vertex");
        for (Objective w : weights) {
          if (w < 0) throw PreconditionError("weights: must be nonnegative");
          if (variant == Variant::kUSRT && w != 1) throw PreconditionError("weights: USRT weights are 1");
        }
        if (!vertex_due_dates.empty() || !pair_due_dates.empty()) {
          throw PreconditionError("sum variants carry no due dates");
        }
        break;
      case Variant::kL:
        if (vertex_due_dates.size() != n_sz) {
          throw PreconditionError("vertex_due_dates: expected one per vertex");
        }
        if (!weights.empty() || !pair_due_dates.empty()) {
          throw PreconditionError("L carries vertex due dates only");
        }
        break;
      case Variant::kLETPC: {
        if (pair_due_dates.empty()) throw PreconditionError("pair_due_dates: at least one pair required");
        if (!weights.empty() || !vertex_due_dates.empty()) {
          throw PreconditionError("L-ETPC carries pair due dates only");
        }
        for (std::size_t i = 0; i < pair_due_dates.size(); ++i) {
          const auto& p = pair_due_dates[i].pair;
          if (p.first == p.second) throw PreconditionError("pair_due_dates: pair with equal vertices");
          if (p.first < 0 || p.second >= n() || p.first > p.second) {
            throw PreconditionError("pair_due_dates: vertex out of range");
          }
          if (i > 0 && !(pair_due_dates[i - 1].pair < p)) {
            throw PreconditionError("pair_due_dates: duplicate or unsorted pair");
          }
        }
        break;
      }
    }
  }
};

inline ProblemInstance make_sum_instance(Network net, std::vector<Objective> weights) {
  ProblemInstance inst{std::move(net), Variant::kSWRT, std::move(weights), {}, {}};
  inst.validate();
  return inst;
}

inline ProblemInstance make_unweighted_instance(Network net) {
  std::vector<Objective> ones(net.num_vertices(), 1);
  ProblemInstance inst{std::move(net), Variant::kUSRT, std::move(ones), {}, {}};
  inst.validate();
  return inst;
}

inline ProblemInstance make_lateness_instance(Network net, std::vector<Objective> due_dates) {
  ProblemInstance inst{std::move(net), Variant::kL, {}, std::move(due_dates), {}};
  inst.validate();
  return inst;
}

inline ProblemInstance make_pair_lateness_instance(Network net, std::vector<PairDueDate> pairs) {
  for (auto& p : pairs) p.pair = VertexPair::of(p.pair.first, p.pair.second);
  std::sort(pairs.begin(), pairs.end(),
            [](const PairDueDate& l, const PairDueDate& r) { return l.pair < r.pair; });
  ProblemInstance inst{std::move(net), Variant::kLETPC, {}, {}, std::move(pairs)};
  inst.validate();
  return inst;
}

// An ordered e-sequence: the n-1 edges of a spanning tree in construction order.
struct EdgeSchedule {
  std::vector<EdgeId> order;
  friend bool operator==(const EdgeSchedule&, const EdgeSchedule&) = default;
};

// Non-depot vertices in recovery order.
struct VSequence {
  std::vector<Vertex> order;
  friend bool operator==(const VSequence&, const VSequence&) = default;
};

// Pairs in connection order, partitioned into one group per constructed edge.
// group_starts[g] is the index of the first pair of group g; empty groups
// share the start index of the next group.
struct PSequence {
  std::vector<VertexPair> order;
  std::vector<std::size_t> group_starts;

  std::size_t num_groups() const { return group_starts.size(); }
  std::size_t group_end(std::size_t g) const {
    return g + 1 < group_starts.size() ? group_starts[g + 1] : order.size();
  }
  std::vector<VertexPair> group(std::size_t g) const {
    return {order.begin() + static_cast<std::ptrdiff_t>(group_starts[g]),
            order.begin() + static_cast<std::ptrdiff_t>(group_end(g))};
  }
  friend bool operator==(const PSequence&, const PSequence&) = default;
};

// Returns the index of the first infeasible prefix length, or nullopt if every
// prefix is a depot-rooted connected subtree. Also rejects schedules whose
// edges do not form a spanning tree.
inline std::optional<std::size_t> first_it_violation(const Network& net, std::span<const EdgeId> order) {
  std::vector<char> built(net.num_vertices(), 0);
  built[net.depot()] = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Edge& e = net.edge(order[k]);
    if (built[e.a] == built[e.b]) return k + 1;
    built[e.a] = built[e.b] = 1;
  }
  if (static_cast<int>(order.size()) != net.num_vertices() - 1) return order.size();
  return std::nullopt;
}

inline bool check_it_feasible(const Network& net, const EdgeSchedule& sched) {
  return !first_it_violation(net, sched.order).has_value();
}

struct Evaluation {
  Objective objective = 0;
  // IT variants: recovery time per vertex (0 for the depot).
  // L-ETPC: connection time per relevant pair, aligned with pair_due_dates.
  std::vector<Objective> times;
};

namespace detail {

inline void require_permutation_of_tree(const Network& net, std::span<const EdgeId> order) {
  if (static_cast<int>(order.size()) != net.num_vertices() - 1) {
    throw PreconditionError("schedule must contain n-1 edges");
  }
  DisjointSet dsu(net.num_vertices());
  for (EdgeId id : order) {
    if (id < 0 || id >= net.num_edges()) throw PreconditionError("schedule edge id out of range");
    const Edge& e = net.edge(id);
    if (!dsu.unite(e.a, e.b)) throw PreconditionError("schedule edges contain a cycle");
  }
}

}  // namespace detail

// Completion of the k-th edge is the total length of the first k edges.
inline Evaluation evaluate(const ProblemInstance& inst, const EdgeSchedule& sched) {
  const Network& net = inst.net;
  Evaluation out;
  if (is_internal_transport(inst.variant)) {
    if (auto bad = first_it_violation(net, sched.order)) {
      throw FeasibilityError("schedule prefix of length " + std::to_string(*bad) +
                                 " is not a connected subtree containing the depot",
                             *bad);
    }
    out.times.assign(inst.n(), 0);
    std::vector<char> built(inst.n(), 0);
    built[net.depot()] = 1;
    Objective clock = 0;
    bool first = true;
    for (EdgeId id : sched.order) {
      const Edge& e = net.edge(id);
      clock += e.length;
      const Vertex v = built[e.a] ? e.b : e.a;
      built[v] = 1;
      out.times[v] = clock;
      if (inst.variant == Variant::kL) {
        const Objective late = clock - inst.vertex_due_dates[v];
        if (first || late > out.objective) out.objective = late;
      } else {
        out.objective += inst.weights[v] * clock;
      }
      first = false;
    }
    return out;
  }

  detail::require_permutation_of_tree(net, sched.order);
  // Connection time of a pair is the completion time of the last edge on its
  // tree path; replaying the order through a disjoint set finds it.
  const auto& pairs = inst.pair_due_dates;
  out.times.assign(pairs.size(), 0);
  std::vector<std::size_t> pending(pairs.size());
  std::iota(pending.begin(), pending.end(), 0);
  DisjointSet dsu(inst.n());
  Objective clock = 0;
  for (EdgeId id : sched.order) {
    const Edge& e = net.edge(id);
    clock += e.length;
    dsu.unite(e.a, e.b);
    std::size_t keep = 0;
    for (std::size_t idx : pending) {
      if (dsu.same(pairs[idx].pair.first, pairs[idx].pair.second)) {
        out.times[idx] = clock;
      } else {
        pending[keep++] = idx;
      }
    }
    pending.resize(keep);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Objective late = out.times[i] - pairs[i].due;
    if (i == 0 || late > out.objective) out.objective = late;
  }
  return out;
}

inline VSequence vertex_recovery_sequence(const ProblemInstance& inst, const EdgeSchedule& sched) {
  if (!is_internal_transport(inst.variant)) {
    throw UnsupportedVariantError("vertex recovery sequence is defined for IT variants only");
  }
  if (auto bad = first_it_violation(inst.net, sched.order)) {
    throw FeasibilityError("schedule is not IT-feasible", *bad);
  }
  VSequence out;
  out.order.reserve(sched.order.size());
  std::vector<char> built(inst.n(), 0);
  built[inst.net.depot()] = 1;
  for (EdgeId id : sched.order) {
    const Edge& e = inst.net.edge(id);
    const Vertex v = built[e.a] ? e.b : e.a;
    built[v] = 1;
    out.order.push_back(v);
  }
  return out;
}

// Pairs grouped by the edge whose construction connects them; lexicographic
// inside a group. The reduced form keeps only the instance's relevant pairs
// but still has one (possibly empty) group per edge.
inline PSequence pairs_connection_sequence(const ProblemInstance& inst, const EdgeSchedule& sched,
                                           bool reduced) {
  const Network& net = inst.net;
  detail::require_permutation_of_tree(net, sched.order);
  const int n = inst.n();
  std::vector<char> relevant;
  if (reduced) {
    relevant.assign(static_cast<std::size_t>(n) * n, 0);
    for (const auto& p : inst.pair_due_dates) {
      relevant[static_cast<std::size_t>(p.pair.first) * n + p.pair.second] = 1;
    }
  }
  // Components kept as explicit member lists so each group can be listed.
  std::vector<int> comp(n);
  std::vector<std::vector<Vertex>> members(n);
  for (Vertex v = 0; v < n; ++v) {
    comp[v] = v;
    members[v] = {v};
  }
  PSequence out;
  out.group_starts.reserve(sched.order.size());
  for (EdgeId id : sched.order) {
    const Edge& e = net.edge(id);
    int ca = comp[e.a], cb = comp[e.b];
    out.group_starts.push_back(out.order.size());
    const std::size_t begin = out.order.size();
    for (Vertex u : members[ca]) {
      for (Vertex v : members[cb]) {
        VertexPair p = VertexPair::of(u, v);
        if (reduced && !relevant[static_cast<std::size_t>(p.first) * n + p.second]) continue;
        out.order.push_back(p);
      }
    }
    std::sort(out.order.begin() + static_cast<std::ptrdiff_t>(begin), out.order.end());
    if (members[ca].size() < members[cb].size()) std::swap(ca, cb);
    for (Vertex v : members[cb]) comp[v] = ca;
    members[ca].insert(members[ca].end(), members[cb].begin(), members[cb].end());
    members[cb].clear();
  }
  return out;
}

// Relative gap as an exact fraction, percent units.
struct Gap {
  __int128 numerator = 0;
  __int128 denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }

  // Rounded half away from zero to two decimals.
  std::string to_string() const {
    __int128 scaled = numerator * 100;
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    __int128 hundredths = (2 * scaled + denominator) / (2 * denominator);
    const auto whole = static_cast<long long>(hundredths / 100);
    const auto frac = static_cast<int>(hundredths % 100);
    std::string out = (negative && hundredths != 0) ? "-" : "";
    out += std::to_string(whole) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
    return out;
  }
};

// Sum variants: 100 (UB - best) / UB. Lateness variants: 100 (UB - best) /
// (UB + d_min), where d_min is the smallest due date of the instance.
inline Gap gap(Objective ub, Objective best, std::optional<Objective> d_min, Variant variant) {
  if (ub < best) throw PreconditionError("gap: UB is below the best value");
  __int128 den = ub;
  if (is_lateness(variant)) {
    if (!d_min) throw PreconditionError("gap: lateness variants need the smallest due date");
    den += *d_min;
  }
  if (den <= 0) throw GapUndefinedError("gap: non-positive denominator");
  return Gap{static_cast<__int128>(ub - best) * 100, den};
}

}  // namespace treenc
