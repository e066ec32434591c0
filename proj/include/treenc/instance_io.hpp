#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "treenc/error.hpp"
#include "treenc/problem.hpp"

// Instance files are JSON objects:
//   {format_version, variant, n, depot, edges: [[a, b, len], ...],
//    weights?, vertex_due_dates?, pair_due_dates?: [[u, v, d], ...]}
namespace treenc {

inline constexpr int kInstanceFormatVersion = 1;

inline nlohmann::json instance_to_json(const ProblemInstance& inst) {
  nlohmann::json j;
  j["format_version"] = kInstanceFormatVersion;
  j["variant"] = std::string(to_string(inst.variant));
  j["n"] = inst.n();
  j["depot"] = inst.net.depot();
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Edge& e : inst.net.edges()) edges.push_back({e.a, e.b, e.length});
  if (inst.variant == Variant::kSWRT) j["weights"] = inst.weights;
  if (inst.variant == Variant::kL) j["vertex_due_dates"] = inst.vertex_due_dates;
  if (inst.variant == Variant::kLETPC) {
    auto& pairs = j["pair_due_dates"] = nlohmann::json::array();
    for (const auto& p : inst.pair_due_dates) pairs.push_back({p.pair.first, p.pair.second, p.due});
  }
  return j;
}

namespace detail {

inline std::int64_t json_int(const nlohmann::json& node, const std::string& path) {
  if (!node.is_number_integer()) throw SchemaError(path, "expected an integer");
  return node.get<std::int64_t>();
}

inline const nlohmann::json& json_field(const nlohmann::json& obj, const std::string& name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw SchemaError(name, "missing field");
  return *it;
}

inline std::vector<std::int64_t> json_int_array(const nlohmann::json& obj, const std::string& name,
                                                std::size_t expected) {
  const auto& arr = json_field(obj, name);
  if (!arr.is_array()) throw SchemaError(name, "expected an array");
  if (arr.size() != expected) {
    throw SchemaError(name, "expected " + std::to_string(expected) + " entries, found " + std::to_string(arr.size()));
  }
  std::vector<std::int64_t> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(json_int(arr[i], name + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::array<std::int64_t, 3>> json_triples(const nlohmann::json& obj, const std::string& name) {
  const auto& arr = json_field(obj, name);
  if (!arr.is_array()) throw SchemaError(name, "expected an array");
  std::vector<std::array<std::int64_t, 3>> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = name + "[" + std::to_string(i) + "]";
    if (!arr[i].is_array() || arr[i].size() != 3) throw SchemaError(path, "expected [int, int, int]");
    out.push_back({json_int(arr[i][0], path + "[0]"), json_int(arr[i][1], path + "[1]"),
                   json_int(arr[i][2], path + "[2]")});
  }
  return out;
}

}  // namespace detail

inline ProblemInstance instance_from_json(const nlohmann::json& j) {
  using detail::json_field;
  using detail::json_int;
  if (!j.is_object()) throw SchemaError("$", "expected a JSON object");
  const auto version = json_int(json_field(j, "format_version"), "format_version");
  if (version != kInstanceFormatVersion) throw SchemaError("format_version", "unsupported version");
  const auto& tag = json_field(j, "variant");
  if (!tag.is_string()) throw SchemaError("variant", "expected a string");
  const auto variant = parse_variant(tag.get<std::string>());
  if (!variant) throw SchemaError("variant", "unknown variant '" + tag.get<std::string>() + "'");
  const auto n = json_int(json_field(j, "n"), "n");
  if (n < 2 || n > 1'000'000) throw SchemaError("n", "out of range");
  const auto depot = json_int(json_field(j, "depot"), "depot");

  std::vector<Edge> edges;
  for (const auto& t : detail::json_triples(j, "edges")) {
    edges.push_back({static_cast<Vertex>(t[0]), static_cast<Vertex>(t[1]), t[2]});
  }
  Network net;
  try {
    net = Network(static_cast<int>(n), std::move(edges), static_cast<Vertex>(depot));
  } catch (const PreconditionError& e) {
    throw SchemaError("edges", e.what());
  }

  auto forbid = [&](const char* name) {
    if (j.contains(name)) throw SchemaError(name, "not allowed for variant " + std::string(to_string(*variant)));
  };
  ProblemInstance inst;
  inst.net = std::move(net);
  inst.variant = *variant;
  const auto count = static_cast<std::size_t>(n);
  switch (*variant) {
    case Variant::kUSRT:
      if (j.contains("weights")) {
        inst.weights = detail::json_int_array(j, "weights", count);
      } else {
        inst.weights.assign(count, 1);
      }
      forbid("vertex_due_dates");
      forbid("pair_due_dates");
      break;
    case Variant::kSWRT:
      inst.weights = detail::json_int_array(j, "weights", count);
      forbid("vertex_due_dates");
      forbid("pair_due_dates");
      break;
    case Variant::kL:
      inst.vertex_due_dates = detail::json_int_array(j, "vertex_due_dates", count);
      forbid("weights");
      forbid("pair_due_dates");
      break;
    case Variant::kLETPC:
      for (const auto& t : detail::json_triples(j, "pair_due_dates")) {
        if (t[0] < 0 || t[0] >= n || t[1] < 0 || t[1] >= n) throw SchemaError("pair_due_dates", "vertex out of range");
        inst.pair_due_dates.push_back(
            {VertexPair::of(static_cast<Vertex>(t[0]), static_cast<Vertex>(t[1])), t[2]});
      }
      std::sort(inst.pair_due_dates.begin(), inst.pair_due_dates.end(),
                [](const PairDueDate& l, const PairDueDate& r) { return l.pair < r.pair; });
      forbid("weights");
      forbid("vertex_due_dates");
      break;
  }
  try {
    inst.validate();
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    throw SchemaError(msg.substr(0, msg.find(':')), msg);
  }
  return inst;
}

inline void write_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << instance_to_json(inst).dump() << '\n';
  if (!out) throw Error("failed writing " + path);
}

inline ProblemInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  return instance_from_json(j);
}

}  // namespace treenc
