#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treenc/local_search.hpp"
#include "treenc/neighborhoods.hpp"
#include "treenc/random.hpp"

namespace treenc {

enum class Algorithm { kILS, kTS };

inline std::string_view to_string(Algorithm a) { return a == Algorithm::kILS ? "ILS" : "TS"; }

enum class IlsAcceptance {
  kAlways,         // the new local optimum always becomes the incumbent
  kImprovingOnly,  // only if it is strictly better than the incumbent
};

struct TenureRange {
  int min = 1;
  int max = 1;
  friend bool operator==(const TenureRange&, const TenureRange&) = default;
};

// Tuned parameters shipped as defaults, per problem variant.
struct DefaultParameters {
  Fraction ils_net_shake;
  Fraction ils_sch_shake;
  TenureRange ts_net_tenure;
  TenureRange ts_sch_tenure;
};

inline DefaultParameters default_parameters(Variant v) {
  switch (v) {
    case Variant::kUSRT: return {{11, 100}, {36, 100}, {5, 17}, {4, 12}};
    case Variant::kSWRT: return {{24, 100}, {35, 100}, {6, 16}, {5, 11}};
    case Variant::kL: return {{23, 100}, {46, 100}, {7, 14}, {7, 17}};
    case Variant::kLETPC: return {{3, 100}, {14, 100}, {7, 14}, {5, 17}};
  }
  return {};
}

struct SearchConfig {
  Algorithm algorithm = Algorithm::kILS;
  NeighborhoodKind kind = NeighborhoodKind::kNET;
  double time_limit_seconds = 600.0;
  std::uint64_t seed = 1;
  Fraction shake_p{11, 100};
  int tenure_min = 5;
  int tenure_max = 17;
  IlsAcceptance acceptance = IlsAcceptance::kAlways;
  // Optional extra stopping rules: metaheuristic iteration count, and an
  // objective value at or below which the search may stop.
  std::optional<long long> max_iterations;
  std::optional<Objective> target_objective;

  void validate() const {
    if (tenure_min < 1 || tenure_min > tenure_max) throw PreconditionError("tenure: need 1 <= min <= max");
    if (shake_p.den <= 0 || shake_p.num < 0 || shake_p.num > shake_p.den) {
      throw PreconditionError("shake probability must lie in [0, 1]");
    }
    if (time_limit_seconds < 0) throw PreconditionError("time limit must be nonnegative");
  }
};

inline SearchConfig default_config(Variant v, Algorithm a, NeighborhoodKind k) {
  const DefaultParameters d = default_parameters(v);
  SearchConfig cfg;
  cfg.algorithm = a;
  cfg.kind = k;
  cfg.shake_p = k == NeighborhoodKind::kNET ? d.ils_net_shake : d.ils_sch_shake;
  const TenureRange t = k == NeighborhoodKind::kNET ? d.ts_net_tenure : d.ts_sch_tenure;
  cfg.tenure_min = t.min;
  cfg.tenure_max = t.max;
  return cfg;
}

// Items are edge ids (NET) or vertex ids (SCH). An item added at iteration t
// with tenure k stays tabu through iteration t + k.
class TabuList {
 public:
  void add(int item, long long expiry) {
    if (item >= static_cast<int>(expiry_.size())) expiry_.resize(item + 1, kNone);
    expiry_[item] = std::max(expiry_[item], expiry);
  }
  bool is_tabu(int item, long long iteration) const {
    return item < static_cast<int>(expiry_.size()) && expiry_[item] != kNone && iteration <= expiry_[item];
  }
  void clear() { std::fill(expiry_.begin(), expiry_.end(), kNone); }
  std::size_t active(long long iteration) const {
    std::size_t count = 0;
    for (long long e : expiry_) count += (e != kNone && iteration <= e);
    return count;
  }

 private:
  static constexpr long long kNone = -1;
  std::vector<long long> expiry_;
};

// Items that characterize a move for tabu purposes.
inline std::vector<int> tabu_items(const Move& move) {
  if (const auto* m = std::get_if<EdgeExchange>(&move)) return {m->add, m->remove};
  if (const auto* m = std::get_if<VertexShift>(&move)) return {m->vertex};
  const auto& m = std::get<PairShift>(move);
  return {m.pair.first, m.pair.second};
}

inline bool is_tabu(const TabuList& list, const Move& move, long long iteration) {
  for (int item : tabu_items(move)) {
    if (list.is_tabu(item, iteration)) return true;
  }
  return false;
}

struct SearchTrace {
  long long iterations = 0;
  Objective start_objective = 0;
  // Best-so-far objective after each metaheuristic iteration.
  std::vector<Objective> best_history;
  // Incumbent objective after each metaheuristic iteration.
  std::vector<Objective> incumbent_history;
};

// Random perturbation of a solution for ILS.
//  NET: drop each tree edge with probability p, then complete the forest by
//       scanning the network's edges in random order, skipping cycle edges.
//  SCH, IT variants: ceil(p (n-1)) random vertex shifts, then A-IT.
//  SCH, L-ETPC: ceil(p q) random pair shifts, rebuilding with A-ET after each.
inline Solution shake(const SearchContext& ctx, const Solution& s, NeighborhoodKind kind, Fraction p, Rng& rng) {
  const ProblemInstance& inst = ctx.instance();
  const Network& net = ctx.net();
  if (kind == NeighborhoodKind::kNET) {
    DisjointSet dsu(inst.n());
    std::vector<EdgeId> kept;
    for (EdgeId e : s.tree.edges()) {
      if (!p.draw(rng)) {
        kept.push_back(e);
        dsu.unite(net.edge(e).a, net.edge(e).b);
      }
    }
    std::vector<EdgeId> candidates(net.num_edges());
    std::iota(candidates.begin(), candidates.end(), 0);
    rng.shuffle(candidates);
    for (EdgeId e : candidates) {
      if (static_cast<int>(kept.size()) == inst.n() - 1) break;
      if (dsu.unite(net.edge(e).a, net.edge(e).b)) kept.push_back(e);
    }
    return make_solution(inst, SpanningTree(net, std::move(kept)));
  }

  if (is_internal_transport(inst.variant)) {
    VSequence seq = vertex_recovery_sequence(inst, s.schedule);
    const std::int64_t moves = p.ceil_times(inst.n() - 1);
    const std::uint64_t len = seq.order.size();
    for (std::int64_t i = 0; i < moves && len >= 2; ++i) {
      // Uniform over the len (len - 1) / 2 (from, to) pairs.
      std::uint64_t k = rng.below(len * (len - 1) / 2);
      std::size_t from = 1;
      while (k >= from) {
        k -= from;
        ++from;
      }
      const VertexShift m{seq.order[from], from, static_cast<std::size_t>(k)};
      seq = apply_vertex_shift(std::move(seq), m);
    }
    return make_solution(inst, a_it(net, ctx.oracle(), seq));
  }

  Solution current = s;
  const std::int64_t moves = p.ceil_times(inst.q());
  for (std::int64_t i = 0; i < moves; ++i) {
    const PSequence seq = pairs_connection_sequence(inst, current.schedule, /*reduced=*/true);
    const std::vector<PairShift> options = pair_shift_moves(seq);
    if (options.empty()) break;
    const PairShift& m = options[rng.below(options.size())];
    current = make_solution(inst, a_et(net, ctx.oracle(), apply_pair_shift(seq.order, m)));
  }
  return current;
}

namespace detail {

struct StopRule {
  Deadline deadline;
  const SearchConfig* cfg;

  bool done(long long iterations, Objective best) const {
    if (cfg->max_iterations && iterations >= *cfg->max_iterations) return true;
    if (cfg->target_objective && best <= *cfg->target_objective) return true;
    return deadline.expired();
  }
};

// A network that is itself a tree has exactly one solution.
inline bool single_solution(const SearchContext& ctx) { return ctx.net().num_edges() == ctx.instance().n() - 1; }

}  // namespace detail

// Tabu search from the MST-LOC local optimum. Each iteration scans the whole
// neighborhood. A neighbor better than the best-so-far goes through IMPR,
// becomes incumbent and best-so-far, and empties the tabu list; otherwise the
// best non-tabu neighbor (first in enumeration order on ties) becomes the
// incumbent and its move's items turn tabu with independently drawn tenures.
// When every neighbor is tabu the best of them is taken.
inline Solution tabu_search(const SearchContext& ctx, const SearchConfig& cfg, SearchTrace* trace = nullptr) {
  cfg.validate();
  const Deadline deadline = Deadline::after(cfg.time_limit_seconds);
  Solution best = mst_loc(ctx, cfg.kind);
  if (trace) *trace = SearchTrace{0, best.objective, {}, {}};
  if (detail::single_solution(ctx)) return best;

  Rng rng(cfg.seed);
  Solution incumbent = best;
  TabuList tabu;
  const detail::StopRule stop{deadline, &cfg};
  long long iteration = 0;
  while (!stop.done(iteration, best.objective)) {
    ++iteration;
    std::optional<std::pair<Move, Solution>> best_any, best_free;
    const bool complete = for_each_neighbor(ctx, incumbent, cfg.kind, [&](const Move& m, Solution& nb) {
      if (deadline.expired()) return false;
      const bool free = !is_tabu(tabu, m, iteration);
      if (free && (!best_free || nb.objective < best_free->second.objective)) best_free.emplace(m, nb);
      if (!best_any || nb.objective < best_any->second.objective) best_any.emplace(m, std::move(nb));
      return true;
    });
    if (!complete || !best_any) break;

    if (best_any->second.objective < best.objective) {
      best = impr(ctx, std::move(best_any->second));
      incumbent = best;
      tabu.clear();
    } else {
      auto& chosen = best_free ? *best_free : *best_any;
      for (int item : tabu_items(chosen.first)) {
        tabu.add(item, iteration + rng.between(cfg.tenure_min, cfg.tenure_max));
      }
      incumbent = std::move(chosen.second);
    }
    if (trace) {
      trace->iterations = iteration;
      trace->best_history.push_back(best.objective);
      trace->incumbent_history.push_back(incumbent.objective);
    }
  }
  return best;
}

// Iterated local search from the MST-LOC local optimum: shake the incumbent,
// descend with LOC, keep the best.
inline Solution iterated_local_search(const SearchContext& ctx, const SearchConfig& cfg,
                                      SearchTrace* trace = nullptr) {
  cfg.validate();
  const Deadline deadline = Deadline::after(cfg.time_limit_seconds);
  Solution best = mst_loc(ctx, cfg.kind);
  if (trace) *trace = SearchTrace{0, best.objective, {}, {}};
  if (detail::single_solution(ctx)) return best;

  Rng rng(cfg.seed);
  Solution incumbent = best;
  const detail::StopRule stop{deadline, &cfg};
  long long iteration = 0;
  while (!stop.done(iteration, best.objective)) {
    ++iteration;
    Solution local = loc(ctx, shake(ctx, incumbent, cfg.kind, cfg.shake_p, rng), cfg.kind, deadline);
    if (local.objective < best.objective) best = local;
    if (cfg.acceptance == IlsAcceptance::kAlways || local.objective < incumbent.objective) {
      incumbent = std::move(local);
    }
    if (trace) {
      trace->iterations = iteration;
      trace->best_history.push_back(best.objective);
      trace->incumbent_history.push_back(incumbent.objective);
    }
  }
  return best;
}

inline Solution run_metaheuristic(const SearchContext& ctx, const SearchConfig& cfg, SearchTrace* trace = nullptr) {
  return cfg.algorithm == Algorithm::kTS ? tabu_search(ctx, cfg, trace) : iterated_local_search(ctx, cfg, trace);
}

}  // namespace treenc
