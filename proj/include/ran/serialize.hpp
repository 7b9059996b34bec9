#pragma once

// On-disk forms:
//   trace text   header "RAN-TRACE v1 n=<n> seed=<seed>", then one face id
//                per line (n-3 lines, the face split at each step)
//   edge text    "<u> <v>" per line, 0-based ids, outer triangle is 0 1 2,
//                sorted by (u,v); export only
//   json         full instance: trace plus embedded edges, faces and tree.
//                The trace is authoritative on read; embedded structures are
//                verified against its replay, so a loaded instance is always
//                internally consistent.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ran/core.hpp"

namespace ran {

struct ParseError : std::runtime_error {
  std::size_t line;    // 1-based
  std::size_t offset;  // byte offset of the line start
  ParseError(std::size_t ln, std::size_t off, const std::string& what)
      : std::runtime_error("line " + std::to_string(ln) + " (offset " +
                           std::to_string(off) + "): " + what),
        line(ln),
        offset(off) {}
};

inline void write_trace(std::ostream& os, const Trace& t) {
  os << "RAN-TRACE v1 n=" << t.n << " seed=" << t.seed << "\n";
  for (u32 f : t.entries) os << f << "\n";
}

namespace detail {

inline bool parse_u64(const std::string& s, u64& out) {
  if (s.empty()) return false;
  u64 v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
    if (v > (~0ull - (ch - '0')) / 10) return false;
    v = v * 10 + static_cast<u64>(ch - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

inline Trace read_trace(std::istream& is) {
  std::string line;
  std::size_t lineno = 0, offset = 0, line_start = 0;
  auto next_line = [&]() {
    line_start = offset;
    if (!std::getline(is, line)) return false;
    ++lineno;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw ParseError(1, 0, "empty input, expected trace header");
  std::istringstream hdr(line);
  std::string magic, version, nfield, seedfield;
  hdr >> magic >> version >> nfield >> seedfield;
  u64 n = 0, seed = 0;
  if (magic != "RAN-TRACE" || version != "v1" ||
      nfield.rfind("n=", 0) != 0 || seedfield.rfind("seed=", 0) != 0 ||
      !detail::parse_u64(nfield.substr(2), n) ||
      !detail::parse_u64(seedfield.substr(5), seed) || n < 3 || n > 0xfffffff0ull)
    throw ParseError(1, 0, "bad header, expected \"RAN-TRACE v1 n=<n> seed=<seed>\"");

  Trace t;
  t.n = static_cast<u32>(n);
  t.seed = seed;
  t.entries.reserve(t.n - 3);
  while (next_line()) {
    if (line.empty()) continue;  // tolerated anywhere, like trailing whitespace
    if (t.entries.size() == t.n - 3u)
      throw ParseError(lineno, line_start,
                       "expected " + std::to_string(t.n - 3u) +
                           " entries, extra data \"" + line + "\"");
    u64 f = 0;
    if (!detail::parse_u64(line, f) || f >= 3ull * t.n)
      throw ParseError(lineno, line_start, "expected a face id, got \"" + line + "\"");
    t.entries.push_back(static_cast<u32>(f));
  }
  if (t.entries.size() != t.n - 3u)
    throw ParseError(lineno + 1, offset,
                     "expected " + std::to_string(t.n - 3u) + " entries, got " +
                         std::to_string(t.entries.size()));
  return t;
}

inline void write_edges(std::ostream& os, const RanGraph& g) {
  for (u32 u = 0; u < g.n; ++u)
    for (u32 v : g.neighbors(u))
      if (v > u) os << u << " " << v << "\n";
}

inline nlohmann::json to_json(const RanInstance& inst) {
  const RanGraph& g = inst.graph;
  nlohmann::json j;
  j["format"] = "ran-json";
  j["version"] = 1;
  j["n"] = g.n;
  j["seed"] = g.seed;
  j["boundary"] = {0, 1, 2};
  j["trace"] = g.entries;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (u32 u = 0; u < g.n; ++u)
    for (u32 v : g.neighbors(u))
      if (v > u) edges.push_back({u, v});
  auto& faces = j["faces"] = nlohmann::json::array();
  for (const auto& f : bounded_faces(inst.tree)) faces.push_back({f[0], f[1], f[2]});
  auto& nodes = j["tree"] = nlohmann::json::array();
  for (const TriNode& nd : inst.tree.nodes) {
    nlohmann::json e;
    e["tri"] = {nd.tri[0], nd.tri[1], nd.tri[2]};
    e["parent"] = nd.parent == kNoNode ? -1 : static_cast<std::int64_t>(nd.parent);
    e["first_child"] =
        nd.first_child == kNoNode ? -1 : static_cast<std::int64_t>(nd.first_child);
    e["type"] = nd.type;
    e["aux"] = nd.aux;
    e["depth"] = nd.depth;
    nodes.push_back(std::move(e));
  }
  return j;
}

inline void write_json(std::ostream& os, const RanInstance& inst) {
  os << to_json(inst).dump() << "\n";
}

// Rebuilds the instance by replaying the stored trace, then checks the
// embedded edges, faces and tree against the rebuild.
inline RanInstance from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& what) { return ParseError(0, 0, what); };
  try {
    if (j.at("format") != "ran-json" || j.at("version") != 1)
      throw bad("not a ran-json v1 document");
    Trace t;
    t.n = j.at("n").get<u32>();
    t.seed = j.at("seed").get<u64>();
    t.entries = j.at("trace").get<std::vector<u32>>();
    RanInstance inst = replay(t);

    const auto& edges = j.at("edges");
    if (edges.size() != inst.graph.num_edges())
      throw bad("embedded edge count disagrees with trace replay");
    std::size_t idx = 0;
    for (u32 u = 0; u < inst.graph.n; ++u)
      for (u32 v : inst.graph.neighbors(u))
        if (v > u) {
          const auto& e = edges.at(idx++);
          if (e.at(0).get<u32>() != u || e.at(1).get<u32>() != v)
            throw bad("embedded edge list disagrees with trace replay");
        }
    const auto& nodes = j.at("tree");
    if (nodes.size() != inst.tree.size())
      throw bad("embedded tree size disagrees with trace replay");
    for (u32 id = 0; id < inst.tree.size(); ++id) {
      const TriNode& nd = inst.tree[id];
      const auto& e = nodes.at(id);
      const auto& tri = e.at("tri");
      const std::int64_t parent = e.at("parent").get<std::int64_t>();
      const std::int64_t fc = e.at("first_child").get<std::int64_t>();
      if (tri.at(0).get<u32>() != nd.tri[0] || tri.at(1).get<u32>() != nd.tri[1] ||
          tri.at(2).get<u32>() != nd.tri[2] ||
          parent != (nd.parent == kNoNode ? -1 : static_cast<std::int64_t>(nd.parent)) ||
          fc != (nd.first_child == kNoNode ? -1 : static_cast<std::int64_t>(nd.first_child)) ||
          e.at("type").get<u32>() != nd.type || e.at("aux").get<u32>() != nd.aux ||
          e.at("depth").get<u32>() != nd.depth)
        throw bad("embedded tree node " + std::to_string(id) +
                  " disagrees with trace replay");
    }
    const auto& faces = j.at("faces");
    const auto rebuilt = bounded_faces(inst.tree);
    if (faces.size() != rebuilt.size())
      throw bad("embedded face count disagrees with trace replay");
    for (std::size_t i = 0; i < rebuilt.size(); ++i) {
      const auto& f = faces.at(i);
      if (f.at(0).get<u32>() != rebuilt[i][0] || f.at(1).get<u32>() != rebuilt[i][1] ||
          f.at(2).get<u32>() != rebuilt[i][2])
        throw bad("embedded face list disagrees with trace replay");
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, 0, std::string("malformed document: ") + e.what());
  }
}

inline RanInstance read_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, 0, std::string("invalid json: ") + e.what());
  }
  return from_json(j);
}

}  // namespace ran
