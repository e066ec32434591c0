#pragma once

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "treenc/neighborhoods.hpp"
#include "treenc/problem.hpp"
#include "treenc/tree_solvers.hpp"

namespace treenc {

// Wall-clock cut-off. A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  static Deadline after(double seconds) {
    Deadline d;
    d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
    return d;
  }

  bool expired() const { return at_ && Clock::now() >= *at_; }

 private:
  std::optional<Clock::time_point> at_;
};

struct ImprStats {
  int iterations = 0;
};

// Rebuild the tree from the solution's own recovery sequence (IT) or full
// pair connection sequence (ET) and keep the result while it strictly
// improves.
inline Solution impr(const SearchContext& ctx, Solution current, ImprStats* stats = nullptr) {
  const ProblemInstance& inst = ctx.instance();
  int iterations = 0;
  while (true) {
    ++iterations;
    SpanningTree rebuilt;
    if (is_internal_transport(inst.variant)) {
      rebuilt = a_it(ctx.net(), ctx.oracle(), vertex_recovery_sequence(inst, current.schedule));
    } else {
      const PSequence seq = pairs_connection_sequence(inst, current.schedule, /*reduced=*/false);
      rebuilt = a_et(ctx.net(), ctx.oracle(), seq.order);
    }
    Solution candidate = make_solution(inst, std::move(rebuilt));
    if (candidate.objective < current.objective) {
      current = std::move(candidate);
      continue;
    }
    break;
  }
  if (stats) stats->iterations = iterations;
  return current;
}

struct LocStats {
  // Objective after each accepted move, starting with the input's.
  std::vector<Objective> trajectory;
  bool interrupted = false;
};

// First-improvement descent; every improving neighbor is passed through IMPR
// before it becomes the current solution.
inline Solution loc(const SearchContext& ctx, Solution current, NeighborhoodKind kind,
                    const Deadline& deadline = {}, LocStats* stats = nullptr) {
  if (stats) stats->trajectory = {current.objective};
  while (true) {
    std::optional<Solution> improving;
    bool interrupted = false;
    for_each_neighbor(ctx, current, kind, [&](const Move&, Solution& nb) {
      if (deadline.expired()) {
        interrupted = true;
        return false;
      }
      if (nb.objective < current.objective) {
        improving = std::move(nb);
        return false;
      }
      return true;
    });
    if (interrupted) {
      if (stats) stats->interrupted = true;
      break;
    }
    if (!improving) break;
    current = impr(ctx, std::move(*improving));
    if (stats) stats->trajectory.push_back(current.objective);
  }
  return current;
}

inline Solution mst_heuristic(const ProblemInstance& inst) {
  return make_solution(inst, minimum_spanning_tree(inst.net));
}

inline Solution mst_loc(const SearchContext& ctx, NeighborhoodKind kind, const Deadline& deadline = {}) {
  return loc(ctx, mst_heuristic(ctx.instance()), kind, deadline);
}

}  // namespace treenc
