#pragma once

// Random plane triangulation grown by repeated face subdivision: start from
// triangle {0,1,2}, pick a bounded face uniformly at random, place a new
// vertex inside it and join it to the three corners. Every triangle ever
// created is kept as a node of a ternary tree whose leaves are the current
// bounded faces; graph and tree share one id space (faces are numbered by
// creation order, the initial face is 0).
//
// Counts for n >= 3 vertices: 2n-5 bounded faces, 3n-6 edges, 3n-8 tree
// nodes. Seeded runs are reproducible: the generator consumes exactly one
// 64-bit draw per insertion step, reduced to the live-face range by
// multiply-shift.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ran/rng.hpp"

namespace ran {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

inline constexpr u32 kNoNode = 0xffffffffu;

// Triangle types follow corner distances to the outer face: distance multiset
// {t,t,t} is type 1, {t,t,t+1} type 2, {t,t+1,t+1} type 3. near_mask marks
// the corners at the minimum, which is enough to propagate types without ever
// running a graph search:
//   type 1 -> three type-2 children
//   type 2 -> type 2 where the far corner was replaced, two type 3
//   type 3 -> type 1 where the near corner was replaced, two type 3
struct TriNode {
  std::array<u32, 3> tri;     // corners; child j replaces corner j with the new vertex
  u32 parent = kNoNode;
  u32 first_child = kNoNode;  // children occupy ids first_child .. first_child+2
  u32 depth = 0;
  u32 aux = 0;                // type-1 nodes on the root path, minus one
  std::uint8_t type = 1;
  std::uint8_t near_mask = 7;

  bool leaf() const { return first_child == kNoNode; }
};

struct TriTree {
  std::vector<TriNode> nodes;

  u32 size() const { return static_cast<u32>(nodes.size()); }
  const TriNode& operator[](u32 id) const { return nodes[id]; }
  TriNode& operator[](u32 id) { return nodes[id]; }

  u32 leaf_count() const {
    u32 c = 0;
    for (const TriNode& nd : nodes) c += nd.leaf();
    return c;
  }
};

struct Trace {
  u32 n = 3;
  u64 seed = 0;
  std::vector<u32> entries;  // face id split at each step
};

struct RanGraph {
  u32 n = 0;
  u64 seed = 0;
  std::vector<u32> entries;  // construction trace, length n-3
  std::vector<u32> adj_off;  // CSR offsets, size n+1; rows sorted ascending
  std::vector<u32> adj;

  u32 num_edges() const { return 3 * n - 6; }
  u32 degree(u32 v) const { return adj_off[v + 1] - adj_off[v]; }
  std::span<const u32> neighbors(u32 v) const {
    return {adj.data() + adj_off[v], adj.data() + adj_off[v + 1]};
  }
  bool has_edge(u32 u, u32 v) const {
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }
  Trace trace() const { return Trace{n, seed, entries}; }
};

struct RanInstance {
  RanGraph graph;
  TriTree tree;
};

struct TraceError : std::runtime_error {
  std::size_t step;
  TraceError(std::size_t s, const std::string& what)
      : std::runtime_error("trace step " + std::to_string(s) + ": " + what),
        step(s) {}
};

namespace detail {

// Shared growth engine. Faces are split either by an RNG-chosen live index
// (generation) or by explicit face id (replay, deterministic subdivision).
class Builder {
 public:
  explicit Builder(u32 n) {
    if (n < 3) throw std::invalid_argument("need at least 3 vertices");
    tree_.nodes.reserve(n >= 3 ? 3u * n - 8u : 1u);
    tree_.nodes.push_back(TriNode{{0, 1, 2}, kNoNode, kNoNode, 0, 0, 1, 7});
    pos_.assign(1, 0);
    live_.assign(1, 0);
    eu_.reserve(3u * n - 6u);
    ev_.reserve(3u * n - 6u);
    push_edge(0, 1);
    push_edge(1, 2);
    push_edge(0, 2);
    nverts_ = 3;
  }

  u32 live_count() const { return static_cast<u32>(live_.size()); }
  u32 live_at(u32 idx) const { return live_[idx]; }
  const TriTree& tree() const { return tree_; }

  bool is_live(u32 face) const {
    return face < pos_.size() && pos_[face] != kNoNode;
  }

  // Splits face `f`, returns the new vertex id.
  u32 split(u32 f) {
    TriNode& p = tree_.nodes[f];
    const u32 v = nverts_++;
    const u32 base = tree_.size();
    p.first_child = base;
    const std::array<u32, 3> t = p.tri;
    push_edge(v, t[0]);
    push_edge(v, t[1]);
    push_edge(v, t[2]);
    for (u32 j = 0; j < 3; ++j) {
      TriNode c;
      c.tri = t;
      c.tri[j] = v;
      c.parent = f;
      c.depth = p.depth + 1;
      c.near_mask = static_cast<std::uint8_t>(p.near_mask & ~(1u << j));
      if (c.near_mask == 0) c.near_mask = 7;  // all corners one level deeper
      c.type = static_cast<std::uint8_t>(4 - std::popcount(c.near_mask));
      c.aux = p.aux + (c.type == 1 ? 1 : 0);
      tree_.nodes.push_back(c);
    }
    // swap-remove f from the live array, append the three children; when f
    // already sits at the back there is nothing to move
    const u32 at = pos_[f];
    pos_[f] = kNoNode;
    const u32 last = live_.back();
    live_.pop_back();
    if (at < live_.size()) {
      live_[at] = last;
      pos_[last] = at;
    }
    pos_.resize(tree_.size(), kNoNode);
    for (u32 j = 0; j < 3; ++j) {
      pos_[base + j] = static_cast<u32>(live_.size());
      live_.push_back(base + j);
    }
    return v;
  }

  RanInstance finish(u64 seed, std::vector<u32> entries) && {
    RanGraph g;
    g.n = nverts_;
    g.seed = seed;
    g.entries = std::move(entries);
    g.adj_off.assign(g.n + 1, 0);
    for (std::size_t i = 0; i < eu_.size(); ++i) {
      ++g.adj_off[eu_[i] + 1];
      ++g.adj_off[ev_[i] + 1];
    }
    for (u32 v = 0; v < g.n; ++v) g.adj_off[v + 1] += g.adj_off[v];
    g.adj.resize(2 * eu_.size());
    std::vector<u32> fill(g.adj_off.begin(), g.adj_off.end() - 1);
    for (std::size_t i = 0; i < eu_.size(); ++i) {
      g.adj[fill[eu_[i]]++] = ev_[i];
      g.adj[fill[ev_[i]]++] = eu_[i];
    }
    for (u32 v = 0; v < g.n; ++v)
      std::sort(g.adj.begin() + g.adj_off[v], g.adj.begin() + g.adj_off[v + 1]);
    return RanInstance{std::move(g), std::move(tree_)};
  }

 private:
  void push_edge(u32 a, u32 b) {
    eu_.push_back(a);
    ev_.push_back(b);
  }

  TriTree tree_;
  std::vector<u32> live_;  // ids of current leaves
  std::vector<u32> pos_;   // face id -> index in live_, kNoNode if split/dead
  std::vector<u32> eu_, ev_;
  u32 nverts_ = 3;
};

}  // namespace detail

inline RanInstance generate_ran(u32 n, u64 seed) {
  detail::Builder b(n);
  std::mt19937_64 rng(seed);
  std::vector<u32> entries;
  entries.reserve(n - 3);
  for (u32 step = 0; step + 3 < n; ++step) {
    const u32 f = b.live_at(bounded(rng(), b.live_count()));
    entries.push_back(f);
    b.split(f);
  }
  return std::move(b).finish(seed, std::move(entries));
}

// Deterministic rebuild from a recorded trace. Every entry must name a face
// that is still a leaf at its step.
inline RanInstance replay(const Trace& t) {
  if (t.n < 3) throw std::invalid_argument("need at least 3 vertices");
  if (t.entries.size() != t.n - 3u)
    throw TraceError(t.entries.size(),
                     "expected " + std::to_string(t.n - 3u) + " entries, got " +
                         std::to_string(t.entries.size()));
  detail::Builder b(t.n);
  for (std::size_t step = 0; step < t.entries.size(); ++step) {
    const u32 f = t.entries[step];
    if (f >= b.tree().size())
      throw TraceError(step, "face " + std::to_string(f) + " does not exist yet");
    if (!b.is_live(f))
      throw TraceError(step, "face " + std::to_string(f) + " was already split");
    b.split(f);
  }
  return std::move(b).finish(t.seed, t.entries);
}

// Splits every bounded face, k rounds: the deterministic triangulation with
// 3^k leaf faces and (3^k - 1)/2 + 3 vertices. Round order is by face id.
inline RanInstance standard_subdivision(u32 k) {
  u64 leaves = 1;
  for (u32 i = 0; i < k; ++i) leaves *= 3;
  const u64 n64 = 3 + (leaves - 1) / 2;
  if (n64 > 0xfffffff0ull) throw std::invalid_argument("subdivision depth too large");
  detail::Builder b(static_cast<u32>(n64));
  std::vector<u32> entries;
  u32 round_begin = 0;
  for (u32 round = 0; round < k; ++round) {
    const u32 round_end = b.tree().size();
    for (u32 f = round_begin; f < round_end; ++f) {
      entries.push_back(f);
      b.split(f);
    }
    round_begin = round_end;
  }
  return std::move(b).finish(0, std::move(entries));
}

struct ValidationReport {
  bool ok = true;
  std::string violation;  // first violation found, empty when ok
};

inline ValidationReport validate(const RanInstance& inst) {
  const RanGraph& g = inst.graph;
  const TriTree& t = inst.tree;
  auto fail = [](std::string msg) { return ValidationReport{false, std::move(msg)}; };

  if (g.n < 3) return fail("fewer than 3 vertices");
  if (t.size() != 3 * g.n - 8) return fail("tree size is not 3n-8");
  if (t.leaf_count() != 2 * g.n - 5) return fail("leaf count is not 2n-5");
  if (g.adj.size() != 2 * (3 * static_cast<std::size_t>(g.n) - 6))
    return fail("edge count is not 3n-6");
  if (g.entries.size() != g.n - 3u) return fail("trace length is not n-3");

  for (u32 v = 0; v < g.n; ++v) {
    auto row = g.neighbors(v);
    if (row.size() < 3 && g.n > 3) return fail("vertex degree below 3");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == v) return fail("self loop");
      if (i && row[i] == row[i - 1]) return fail("parallel edge");
    }
  }

  const TriNode& root = t[0];
  if (root.type != 1 || root.parent != kNoNode || root.aux != 0)
    return fail("malformed root");
  u32 internal = 0;
  for (u32 id = 0; id < t.size(); ++id) {
    const TriNode& nd = t[id];
    if (nd.leaf()) continue;
    ++internal;
    if (nd.first_child + 2 >= t.size()) return fail("child ids out of range");
    // all three children must replace distinct corners with one shared vertex
    u32 newv = kNoNode;
    std::array<u32, 3> child_types{};
    for (u32 j = 0; j < 3; ++j) {
      const TriNode& c = t[nd.first_child + j];
      if (c.parent != id) return fail("child parent link broken");
      if (c.depth != nd.depth + 1) return fail("child depth broken");
      for (u32 i = 0; i < 3; ++i) {
        if (i == j) {
          if (newv == kNoNode) newv = c.tri[i];
          if (c.tri[i] != newv) return fail("children disagree on new vertex");
        } else if (c.tri[i] != nd.tri[i]) {
          return fail("child corner does not match parent");
        }
      }
      if (c.aux != nd.aux + (c.type == 1 ? 1u : 0u)) return fail("aux depth broken");
      child_types[j] = c.type;
    }
    if (newv >= g.n) return fail("new vertex id out of range");
    for (u32 i = 0; i < 3; ++i)
      if (!g.has_edge(newv, nd.tri[i])) return fail("missing spoke edge");
    std::array<u32, 3> sorted = child_types;
    std::sort(sorted.begin(), sorted.end());
    bool rule_ok = false;
    switch (nd.type) {
      case 1: rule_ok = sorted == std::array<u32, 3>{2, 2, 2}; break;
      case 2: rule_ok = sorted == std::array<u32, 3>{2, 3, 3}; break;
      case 3: rule_ok = sorted == std::array<u32, 3>{1, 3, 3}; break;
      default: return fail("unknown triangle type");
    }
    if (!rule_ok) return fail("child type rule violated");
  }
  if (internal != g.n - 3) return fail("internal node count is not n-3");
  return ValidationReport{};
}

// Leaf face corner triples in face-id order.
inline std::vector<std::array<u32, 3>> bounded_faces(const TriTree& t) {
  std::vector<std::array<u32, 3>> out;
  out.reserve(t.leaf_count());
  for (const TriNode& nd : t.nodes)
    if (nd.leaf()) out.push_back(nd.tri);
  return out;
}

// Number of leaf faces under every node (a leaf counts itself). Children have
// larger ids than parents, so one backward sweep suffices.
inline std::vector<u32> subtree_leaf_counts(const TriTree& t) {
  std::vector<u32> cnt(t.size(), 0);
  for (u32 id = t.size(); id-- > 0;) {
    if (t[id].leaf())
      cnt[id] = 1;
    else
      cnt[id] = cnt[t[id].first_child] + cnt[t[id].first_child + 1] +
                cnt[t[id].first_child + 2];
  }
  return cnt;
}

}  // namespace ran
