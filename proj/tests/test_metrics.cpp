#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>

#include "ran/core.hpp"
#include "ran/metrics.hpp"
#include "ran/serialize.hpp"

using namespace ran;

namespace {

// always split the newest face: maximizes tree depth, worst case for pruning
RanInstance skewed_instance(u32 n) {
  Trace t;
  t.n = n;
  t.seed = 0;
  for (u32 i = 0; i + 3 < n; ++i) t.entries.push_back(3 * i);
  return replay(t);
}

}  // namespace

TEST_CASE("distances on the smallest instances", "[metrics]") {
  const RanInstance k4 = generate_ran(4, 1);
  CHECK(diameter_allpairs(k4.graph) == 1);
  CHECK(diameter_exact(k4.graph) == 1);
  CHECK(radius_from_boundary(k4.graph) == 1);
  CHECK(auxiliary_height(k4.tree) == 0);

  const AvgDistanceEstimate est = average_distance_estimate(k4.graph, 500, 3);
  CHECK(est.mean == 1.0);
  CHECK(est.stderr_ == 0.0);

  const RanInstance g5 = generate_ran(5, 1);
  CHECK(diameter_allpairs(g5.graph) == 2);
  CHECK(diameter_exact(g5.graph) == 2);
  CHECK(radius_from_boundary(g5.graph) == 1);
  CHECK(auxiliary_height(g5.tree) == 0);
}

TEST_CASE("pruned diameter equals all-pairs diameter", "[metrics]") {
  for (u64 tr = 0; tr < 40; ++tr) {
    const u32 n = 4 + static_cast<u32>(tr * 167 % 700);
    const RanInstance inst = generate_ran(n, 9000 + tr);
    INFO("n=" << n << " trial=" << tr);
    CHECK(diameter_exact(inst.graph) == diameter_allpairs(inst.graph));
  }
  // deep skewed history stresses the level pruning differently
  const RanInstance skew = skewed_instance(160);
  REQUIRE(validate(skew).ok);
  CHECK(diameter_exact(skew.graph) == diameter_allpairs(skew.graph));
}

TEST_CASE("radius tracks the auxiliary height", "[metrics]") {
  for (u64 tr = 0; tr < 60; ++tr) {
    const u32 n = 4 + static_cast<u32>(tr * 211 % 1500);
    const RanInstance inst = generate_ran(n, 100 + tr);
    const u32 r = radius_from_boundary(inst.graph);
    const u32 ah = auxiliary_height(inst.tree);
    INFO("n=" << n << " trial=" << tr << " r=" << r << " ah=" << ah);
    CHECK((r == ah || r == ah + 1));
    CHECK(diameter_exact(inst.graph) <= 2 * r + 2);
  }
}

TEST_CASE("propagated types match geometric types", "[metrics]") {
  for (u64 tr = 0; tr < 25; ++tr) {
    const u32 n = 4 + static_cast<u32>(tr * 311 % 1200);
    const RanInstance inst = generate_ran(n, 500 + tr);
    const auto geo = types_from_distances(inst.graph, inst.tree);
    for (u32 id = 0; id < inst.tree.size(); ++id) {
      INFO("n=" << n << " trial=" << tr << " node=" << id);
      CHECK(geo[id] == inst.tree[id].type);
    }
  }
  const RanInstance skew = skewed_instance(90);
  const auto geo = types_from_distances(skew.graph, skew.tree);
  for (u32 id = 0; id < skew.tree.size(); ++id) CHECK(geo[id] == skew.tree[id].type);
}

TEST_CASE("interior vertex depth is its face depth plus one", "[metrics]") {
  const RanInstance inst = generate_ran(900, 77);
  const DistanceField f = boundary_distances(inst.graph);
  std::vector<u32> aux(inst.tree.size(), 0);
  for (u32 id = 1; id < inst.tree.size(); ++id)
    aux[id] = aux[inst.tree[id].parent] + (inst.tree[id].type == 1 ? 1 : 0);
  for (u32 id = 0; id < inst.tree.size(); ++id) {
    if (inst.tree[id].leaf()) continue;
    const u32 v = inst.tree[inst.tree[id].first_child].tri[0];
    CHECK(f.dist[v] == aux[id] + 1);
  }
}

TEST_CASE("multi source distances start at zero on the boundary", "[metrics]") {
  const RanInstance inst = generate_ran(300, 15);
  const DistanceField f = boundary_distances(inst.graph);
  CHECK(f.dist[0] == 0);
  CHECK(f.dist[1] == 0);
  CHECK(f.dist[2] == 0);
  for (u32 v = 3; v < inst.graph.n; ++v) {
    CHECK(f.dist[v] >= 1);
    // one neighbor sits exactly one level closer
    bool has_parent = false;
    for (u32 w : inst.graph.neighbors(v)) has_parent |= f.dist[w] + 1 == f.dist[v];
    CHECK(has_parent);
  }
}

TEST_CASE("sampled average distance agrees with an exact recount", "[metrics]") {
  const RanInstance inst = generate_ran(64, 21);
  // exact mean over all unordered pairs
  double total = 0;
  u64 pairs = 0;
  for (u32 v = 0; v < inst.graph.n; ++v) {
    const DistanceField f = bfs(inst.graph, v);
    for (u32 w = v + 1; w < inst.graph.n; ++w) {
      total += f.dist[w];
      ++pairs;
    }
  }
  const double exact = total / static_cast<double>(pairs);
  const AvgDistanceEstimate est = average_distance_estimate(inst.graph, 20000, 5);
  CHECK(est.pairs == 20000);
  CHECK(est.stderr_ > 0.0);
  CHECK(std::abs(est.mean - exact) < 5.0 * est.stderr_ + 1e-9);
}

TEST_CASE("average distance estimation is deterministic in the seed", "[metrics]") {
  const RanInstance inst = generate_ran(500, 33);
  const AvgDistanceEstimate a = average_distance_estimate(inst.graph, 300, 7);
  const AvgDistanceEstimate b = average_distance_estimate(inst.graph, 300, 7);
  const AvgDistanceEstimate c = average_distance_estimate(inst.graph, 300, 8);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK((a.mean != c.mean || a.stderr_ != c.stderr_));
}

TEST_CASE("metrics report serializes to csv", "[metrics]") {
  const RanInstance inst = generate_ran(128, 9);
  const MetricsReport rep = compute_metrics(inst, 200, 1);
  CHECK(MetricsReport::csv_header() == "n,seed,diameter,radius,aux_height,avg_dist_est,stderr");
  unsigned long long n = 0, seed = 0;
  unsigned d = 0, r = 0, ah = 0;
  double avg = 0, se = 0;
  REQUIRE(std::sscanf(rep.csv_row().c_str(), "%llu,%llu,%u,%u,%u,%lf,%lf", &n, &seed,
                      &d, &r, &ah, &avg, &se) == 7);
  CHECK(n == 128);
  CHECK(seed == 9);
  CHECK(d == rep.diameter);
  CHECK(r == rep.radius);
}

TEST_CASE("all pairs oracle refuses large graphs", "[metrics]") {
  const RanInstance inst = generate_ran(5000, 2);
  CHECK_THROWS_AS(diameter_allpairs(inst.graph), std::invalid_argument);
}
