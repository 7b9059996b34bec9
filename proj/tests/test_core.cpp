#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include "ran/core.hpp"

using namespace ran;

TEST_CASE("outer triangle only", "[core]") {
  const RanInstance inst = generate_ran(3, 7);
  CHECK(inst.graph.n == 3);
  CHECK(inst.graph.num_edges() == 3);
  CHECK(inst.tree.size() == 1);
  CHECK(inst.tree[0].leaf());
  CHECK(inst.graph.has_edge(0, 1));
  CHECK(inst.graph.has_edge(1, 2));
  CHECK(inst.graph.has_edge(0, 2));
  CHECK(validate(inst).ok);
}

TEST_CASE("first split yields the complete graph on four vertices", "[core]") {
  const RanInstance inst = generate_ran(4, 123);
  CHECK(inst.graph.num_edges() == 6);
  for (u32 u = 0; u < 4; ++u)
    for (u32 v = u + 1; v < 4; ++v) CHECK(inst.graph.has_edge(u, v));
  CHECK(inst.tree.size() == 4);
  CHECK(inst.tree[0].type == 1);
  for (u32 j = 1; j <= 3; ++j) {
    CHECK(inst.tree[j].type == 2);
    CHECK(inst.tree[j].parent == 0);
    CHECK(inst.tree[j].leaf());
  }
}

TEST_CASE("structural counts hold across sizes and seeds", "[core]") {
  for (u32 n : {3u, 4u, 5u, 9u, 33u, 101u, 517u, 2048u}) {
    for (u64 seed : {1ull, 99ull, 777777ull}) {
      const RanInstance inst = generate_ran(n, seed);
      INFO("n=" << n << " seed=" << seed);
      CHECK(inst.graph.n == n);
      CHECK(inst.graph.num_edges() == 3 * static_cast<u64>(n) - 6);
      CHECK(inst.tree.size() == 3 * static_cast<u64>(n) - 8);
      CHECK(inst.tree.leaf_count() == 2 * static_cast<u64>(n) - 5);
      CHECK(inst.graph.entries.size() == n - 3);
      const ValidationReport rep = validate(inst);
      INFO(rep.violation);
      CHECK(rep.ok);
    }
  }
}

TEST_CASE("minimum degree is three beyond the triangle", "[core]") {
  const RanInstance inst = generate_ran(600, 42);
  for (u32 v = 0; v < inst.graph.n; ++v) CHECK(inst.graph.degree(v) >= 3);
  // neighbor rows are sorted and strict
  for (u32 v = 0; v < inst.graph.n; ++v) {
    const auto row = inst.graph.neighbors(v);
    CHECK(std::is_sorted(row.begin(), row.end()));
    CHECK(std::adjacent_find(row.begin(), row.end()) == row.end());
  }
}

TEST_CASE("split order matches vertex numbering", "[core]") {
  const RanInstance inst = generate_ran(120, 5);
  for (u32 i = 0; i < inst.graph.entries.size(); ++i) {
    const u32 face = inst.graph.entries[i];
    const TriNode& nd = inst.tree[face];
    REQUIRE_FALSE(nd.leaf());
    // the i-th split created vertex 3 + i, shared by all three children
    const u32 v = inst.tree[nd.first_child].tri[0];
    CHECK(v == 3 + i);
    CHECK(inst.tree[nd.first_child + 1].tri[1] == v);
    CHECK(inst.tree[nd.first_child + 2].tri[2] == v);
  }
}

TEST_CASE("standard subdivision has the expected shape", "[core]") {
  const RanInstance k0 = standard_subdivision(0);
  CHECK(k0.graph.n == 3);

  const RanInstance k1 = standard_subdivision(1);
  CHECK(k1.graph.n == 4);

  const RanInstance k2 = standard_subdivision(2);
  CHECK(k2.graph.n == 7);
  CHECK(k2.tree.leaf_count() == 9);
  CHECK(validate(k2).ok);
  CHECK(k2.graph.entries == std::vector<u32>({0, 1, 2, 3}));
  // every leaf sits at depth two
  for (u32 id = 0; id < k2.tree.size(); ++id)
    if (k2.tree[id].leaf()) CHECK(k2.tree[id].depth == 2);
}

TEST_CASE("replay reproduces the generated instance", "[core]") {
  const RanInstance a = generate_ran(257, 31337);
  const RanInstance b = replay(a.graph.trace());
  CHECK(a.graph.adj == b.graph.adj);
  CHECK(a.graph.adj_off == b.graph.adj_off);
  REQUIRE(a.tree.size() == b.tree.size());
  for (u32 id = 0; id < a.tree.size(); ++id) {
    CHECK(a.tree[id].tri == b.tree[id].tri);
    CHECK(a.tree[id].parent == b.tree[id].parent);
    CHECK(a.tree[id].type == b.tree[id].type);
    CHECK(a.tree[id].depth == b.tree[id].depth);
  }
}

TEST_CASE("replay rejects malformed histories", "[core]") {
  Trace t;
  t.n = 5;
  t.seed = 0;

  t.entries = {4, 0};  // node 4 does not exist before any split
  CHECK_THROWS_AS(replay(t), TraceError);
  try {
    replay(t);
  } catch (const TraceError& e) {
    CHECK(e.step == 0);
    CHECK(std::string(e.what()).find("does not exist") != std::string::npos);
  }

  t.entries = {0, 0};  // second split hits a dead face
  try {
    replay(t);
    FAIL("expected TraceError");
  } catch (const TraceError& e) {
    CHECK(e.step == 1);
    CHECK(std::string(e.what()).find("already split") != std::string::npos);
  }

  t.entries = {0};  // wrong number of entries for n=5
  CHECK_THROWS_AS(replay(t), TraceError);
}

TEST_CASE("subtree leaf counts sum along the tree", "[core]") {
  const RanInstance inst = generate_ran(400, 8);
  const std::vector<u32> cnt = subtree_leaf_counts(inst.tree);
  CHECK(cnt[0] == 2 * inst.graph.n - 5);
  for (u32 id = 0; id < inst.tree.size(); ++id) {
    if (inst.tree[id].leaf()) {
      CHECK(cnt[id] == 1);
    } else {
      u32 s = 0;
      for (u32 j = 0; j < 3; ++j) s += cnt[inst.tree[id].first_child + j];
      CHECK(cnt[id] == s);
    }
  }
}

TEST_CASE("generation is deterministic in the seed", "[core]") {
  const RanInstance a = generate_ran(200, 11);
  const RanInstance b = generate_ran(200, 11);
  const RanInstance c = generate_ran(200, 12);
  CHECK(a.graph.entries == b.graph.entries);
  CHECK(a.graph.adj == b.graph.adj);
  CHECK(a.graph.entries != c.graph.entries);
}

TEST_CASE("child triangles replace one corner with the new vertex", "[core]") {
  const RanInstance inst = generate_ran(150, 3);
  for (u32 id = 0; id < inst.tree.size(); ++id) {
    const TriNode& nd = inst.tree[id];
    if (nd.leaf()) continue;
    const u32 v = inst.tree[nd.first_child].tri[0];
    for (u32 j = 0; j < 3; ++j) {
      const TriNode& c = inst.tree[nd.first_child + j];
      CHECK(c.tri[j] == v);
      for (u32 i = 0; i < 3; ++i)
        if (i != j) CHECK(c.tri[i] == nd.tri[i]);
      // the new vertex is adjacent to all corners of the split face
      CHECK(inst.graph.has_edge(v, nd.tri[j]));
    }
  }
}

TEST_CASE("generate rejects degenerate sizes", "[core]") {
  CHECK_THROWS_AS(generate_ran(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_ran(2, 1), std::invalid_argument);
}
