#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "treenc/graph.hpp"
#include "treenc/problem.hpp"
#include "treenc/random.hpp"

namespace treenc {

enum class Family { kEuclideanComplete, kRandomMetric, kPlanarRoad };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::kEuclideanComplete: return "euclidean_complete";
    case Family::kRandomMetric: return "random_metric";
    case Family::kPlanarRoad: return "planar_road";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "euclidean_complete") return Family::kEuclideanComplete;
  if (s == "random_metric") return Family::kRandomMetric;
  if (s == "planar_road") return Family::kPlanarRoad;
  return std::nullopt;
}

struct GeneratorSpec {
  Family family = Family::kEuclideanComplete;
  int n = 10;
  std::uint64_t seed = 1;
  Variant variant = Variant::kUSRT;
  // Coordinates are integers in [0, coord_max].
  std::int64_t coord_max = 1000;
  // random_metric draws lengths in [1, max_random_length] before closure.
  Length max_random_length = 1000;
  Objective weight_min = 1;
  Objective weight_max = 10;
  // L-ETPC relevant pairs: pair_multiplier * n, capped by the number of pairs.
  int pair_multiplier = 6;
  // Due dates are drawn uniformly from [0, due_date_span * L(MST)].
  Fraction due_date_span{1, 1};
  // planar_road edge target: ceil(edge_factor * n).
  Fraction edge_factor{175, 100};
};

struct GeneratedInstance {
  ProblemInstance instance;
  // planar_road only: false when no further non-crossing edge existed.
  bool edge_target_reached = true;
};

namespace geometry {

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline std::int64_t squared_distance(Point p, Point q) {
  return (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
}

inline Length rounded_distance(Point p, Point q) {
  return std::max<Length>(1, std::llround(std::sqrt(static_cast<double>(squared_distance(p, q)))));
}

inline int orientation(Point p, Point q, Point r) {
  const std::int64_t v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  return (v > 0) - (v < 0);
}

// r lies on the closed segment pq (assumes collinearity is checked here too).
inline bool on_segment(Point p, Point q, Point r) {
  return orientation(p, q, r) == 0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
         std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
}

// True if segments ab and cd share any point other than a common endpoint.
inline bool segments_conflict(Point a, Point b, Point c, Point d) {
  const bool shared = a == c || a == d || b == c || b == d;
  if (shared) {
    if (a == d || b == c) std::swap(c, d);
    // Now a == c or b == d.
    if (a == c) return orientation(a, b, d) == 0 && (on_segment(a, b, d) || on_segment(c, d, b));
    return orientation(a, b, c) == 0 && (on_segment(a, b, c) || on_segment(c, d, a));
  }
  const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

}  // namespace geometry

namespace detail {

inline std::vector<geometry::Point> random_points(int n, std::int64_t coord_max, bool distinct, Rng& rng) {
  std::vector<geometry::Point> pts;
  std::set<geometry::Point> seen;
  while (static_cast<int>(pts.size()) < n) {
    geometry::Point p{rng.between(0, coord_max), rng.between(0, coord_max)};
    if (distinct && !seen.insert(p).second) continue;
    pts.push_back(p);
  }
  return pts;
}

// Planar road-like network: Euclidean MST plus the shortest non-crossing
// candidate edges until the target edge count is met.
inline std::pair<std::vector<Edge>, bool> planar_edges(const std::vector<geometry::Point>& pts, int target) {
  const int n = static_cast<int>(pts.size());
  struct Candidate {
    std::int64_t d2;
    int i, j;
  };
  std::vector<Candidate> cand;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) cand.push_back({geometry::squared_distance(pts[i], pts[j]), i, j});
  }
  std::sort(cand.begin(), cand.end(), [](const Candidate& l, const Candidate& r) {
    return std::tie(l.d2, l.i, l.j) < std::tie(r.d2, r.i, r.j);
  });
  std::vector<std::pair<int, int>> chosen;
  std::vector<char> used(cand.size(), 0);
  DisjointSet dsu(n);
  for (std::size_t k = 0; k < cand.size(); ++k) {
    if (dsu.unite(cand[k].i, cand[k].j)) {
      chosen.emplace_back(cand[k].i, cand[k].j);
      used[k] = 1;
    }
  }
  for (std::size_t k = 0; k < cand.size() && static_cast<int>(chosen.size()) < target; ++k) {
    if (used[k]) continue;
    const auto a = pts[cand[k].i], b = pts[cand[k].j];
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (v != cand[k].i && v != cand[k].j && geometry::on_segment(a, b, pts[v])) ok = false;
    }
    for (const auto& [u, v] : chosen) {
      if (!ok) break;
      if (geometry::segments_conflict(a, b, pts[u], pts[v])) ok = false;
    }
    if (ok) chosen.emplace_back(cand[k].i, cand[k].j);
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<Edge> edges;
  for (const auto& [u, v] : chosen) edges.push_back({u, v, geometry::rounded_distance(pts[u], pts[v])});
  return {std::move(edges), static_cast<int>(chosen.size()) >= target};
}

}  // namespace detail

inline GeneratedInstance generate(const GeneratorSpec& spec) {
  if (spec.n < 2) throw PreconditionError("generate: n must be at least 2");
  if (spec.weight_min < 0 || spec.weight_min > spec.weight_max) throw PreconditionError("generate: bad weight range");
  Rng rng(spec.seed);
  const int n = spec.n;
  std::vector<Edge> edges;
  bool reached = true;
  switch (spec.family) {
    case Family::kEuclideanComplete: {
      const auto pts = detail::random_points(n, spec.coord_max, /*distinct=*/false, rng);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, geometry::rounded_distance(pts[i], pts[j])});
      }
      break;
    }
    case Family::kRandomMetric: {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, rng.between(1, spec.max_random_length)});
      }
      const DistanceOracle closure = all_pairs_shortest_paths(Network(n, edges, 0));
      for (Edge& e : edges) e.length = closure.dist(e.a, e.b);
      break;
    }
    case Family::kPlanarRoad: {
      const auto pts = detail::random_points(n, spec.coord_max, /*distinct=*/true, rng);
      const int target = static_cast<int>(spec.edge_factor.ceil_times(n));
      std::tie(edges, reached) = detail::planar_edges(pts, target);
      break;
    }
  }
  const Vertex depot = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
  Network net(n, std::move(edges), depot);
  const Length mst_length = minimum_spanning_tree(net).total_length(net);
  const Objective due_max = spec.due_date_span.ceil_times(mst_length);

  ProblemInstance inst;
  inst.net = std::move(net);
  inst.variant = spec.variant;
  switch (spec.variant) {
    case Variant::kUSRT: inst.weights.assign(n, 1); break;
    case Variant::kSWRT:
      inst.weights.resize(n);
      for (auto& w : inst.weights) w = rng.between(spec.weight_min, spec.weight_max);
      break;
    case Variant::kL:
      inst.vertex_due_dates.resize(n);
      for (auto& d : inst.vertex_due_dates) d = rng.between(0, due_max);
      break;
    case Variant::kLETPC: {
      std::vector<VertexPair> all;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) all.push_back({i, j});
      }
      rng.shuffle(all);
      const std::size_t q = std::min(all.size(), static_cast<std::size_t>(spec.pair_multiplier) * n);
      all.resize(q);
      std::sort(all.begin(), all.end());
      for (const auto& p : all) inst.pair_due_dates.push_back({p, rng.between(0, due_max)});
      break;
    }
  }
  inst.validate();
  return {std::move(inst), reached};
}

}  // namespace treenc
