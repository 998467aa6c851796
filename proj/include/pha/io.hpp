#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <unistd.h>

#include "json.hpp"
#include "pha/error.hpp"
#include "pha/generate.hpp"
#include "pha/graph.hpp"

namespace pha {

using json = nlohmann::json;

/// Writes `contents` to a sibling temp file and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline json spec_to_json(const GraphSpec& spec) {
  return json{{"node_count", spec.node_count},
              {"variant", to_string(spec.variant)},
              {"delete_fraction", spec.delete_fraction},
              {"extra_edges", spec.extra_edges},
              {"seed", spec.seed}};
}

inline GraphSpec spec_from_json(const json& j) {
  GraphSpec spec;
  spec.node_count = j.at("node_count").get<std::size_t>();
  spec.variant = parse_variant(j.at("variant").get<std::string>());
  spec.delete_fraction = j.value("delete_fraction", 0.6);
  spec.extra_edges = j.value("extra_edges", std::size_t{400});
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

/// Graph file text: one node or edge per line so errors can name a line.
///   {"nodes": [[x,y],...], "edges": [[i,j],...], "meta": {...}[, "start": i, "goal": j]}
/// Coordinates carry 17 significant digits; weights are never stored.
inline std::string graph_to_text(const PhysicalGraph& graph, const json& meta,
                                 const std::optional<std::pair<NodeId, NodeId>>& endpoints = {}) {
  std::string out = "{\n  \"nodes\": [";
  const auto& pts = graph.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out += i ? ",\n    [" : "\n    [";
    out += format_double(pts[i].x) + ", " + format_double(pts[i].y) + "]";
  }
  out += "\n  ],\n  \"edges\": [";
  const auto& edges = graph.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out += i ? ",\n    [" : "\n    [";
    out += std::to_string(edges[i].u) + ", " + std::to_string(edges[i].v) + "]";
  }
  out += "\n  ],\n  \"meta\": " + (meta.is_null() ? json::object() : meta).dump();
  if (endpoints) {
    out += ",\n  \"start\": " + std::to_string(endpoints->first);
    out += ",\n  \"goal\": " + std::to_string(endpoints->second);
  }
  out += "\n}\n";
  return out;
}

namespace detail {

inline std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the index-th element of the top-level array stored under `key`.
inline std::size_t line_of_element(const std::string& text, const std::string& key, std::size_t index) {
  std::size_t pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 1;
  pos = text.find('[', pos);
  if (pos == std::string::npos) return line_at(text, text.size());
  int depth = 0;
  std::size_t seen = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') {
      ++depth;
      if (depth == 2) {
        if (seen == index) return line_at(text, i);
        ++seen;
      }
    } else if (c == ']') {
      if (--depth == 0) break;
    }
  }
  return line_at(text, pos);
}

inline std::pair<PhysicalGraph, json> parse_graph(const std::string& text, json& doc) {
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_at(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError(1, "top level must be an object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw ParseError(1, "missing \"nodes\" array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw ParseError(1, "missing \"edges\" array");

  std::vector<Point2> points;
  points.reserve(doc["nodes"].size());
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const json& p = doc["nodes"][i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError(line_of_element(text, "nodes", i), "node " + std::to_string(i) + " must be [x, y]");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  const auto n = static_cast<std::int64_t>(points.size());
  std::vector<Edge> edges;
  edges.reserve(doc["edges"].size());
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const json& e = doc["edges"][i];
    const std::size_t line = line_of_element(text, "edges", i);
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ParseError(line, "edge " + std::to_string(i) + " must be [i, j]");
    }
    const auto u = e[0].get<std::int64_t>();
    const auto v = e[1].get<std::int64_t>();
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParseError(line, "edge [" + std::to_string(u) + ", " + std::to_string(v) +
                                 "] references a node outside [0, " + std::to_string(n) + ")");
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  try {
    return {PhysicalGraph(std::move(points), std::move(edges)), doc.value("meta", json::object())};
  } catch (const ArgumentError& e) {
    throw ParseError(line_at(text, text.find("\"edges\"")), e.what());
  }
}

}  // namespace detail

inline void write_graph(const std::filesystem::path& path, const PhysicalGraph& graph,
                        const json& meta = json::object()) {
  atomic_write(path, graph_to_text(graph, meta));
}

inline PhysicalGraph read_graph(const std::filesystem::path& path, json* meta = nullptr) {
  json doc;
  auto [graph, m] = detail::parse_graph(read_text(path), doc);
  if (meta) *meta = std::move(m);
  return std::move(graph);
}

inline void write_instance(const std::filesystem::path& path, const ProblemInstance& instance,
                           const json& meta = json::object()) {
  json m = meta;
  if (!m.contains("seed")) m["seed"] = instance.seed;
  atomic_write(path, graph_to_text(instance.graph, m, std::pair{instance.start, instance.goal}));
}

inline ProblemInstance read_instance(const std::filesystem::path& path, json* meta = nullptr) {
  const std::string text = read_text(path);
  json doc;
  auto [graph, m] = detail::parse_graph(text, doc);
  const std::size_t line = detail::line_at(text, text.find("\"start\""));
  if (!doc.contains("start") || !doc.contains("goal") || !doc["start"].is_number_integer() ||
      !doc["goal"].is_number_integer()) {
    throw ParseError(line, "instance file needs integer \"start\" and \"goal\"");
  }
  ProblemInstance inst;
  inst.start = doc["start"].get<NodeId>();
  inst.goal = doc["goal"].get<NodeId>();
  if (!graph.contains(inst.start) || !graph.contains(inst.goal) || inst.start == inst.goal) {
    throw ParseError(line, "start/goal must be distinct valid node ids");
  }
  inst.seed = m.value("seed", std::uint64_t{0});
  inst.graph = std::move(graph);
  if (meta) *meta = std::move(m);
  return inst;
}

}  // namespace pha
