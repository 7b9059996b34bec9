#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "ran/branching.hpp"

using namespace ran;

namespace {

std::vector<std::vector<u32>> children_of(const BranchTree& tree) {
  std::vector<std::vector<u32>> kids(tree.nodes.size());
  for (u32 i = 1; i < tree.nodes.size(); ++i)
    kids[tree.nodes[i].parent].push_back(i);
  return kids;
}

std::vector<int> child_types(const BranchTree& tree, const std::vector<u32>& kids) {
  std::vector<int> ts;
  for (u32 c : kids) ts.push_back(tree.nodes[c].type);
  std::sort(ts.begin(), ts.end());
  return ts;
}

}  // namespace

TEST_CASE("zero horizon leaves just the root", "[branching]") {
  for (BranchVariant v :
       {BranchVariant::plain, BranchVariant::pruned, BranchVariant::boosted}) {
    const BranchTree tree = branch_simulate(v, 3, 0.0, 11);
    REQUIRE(tree.node_count() == 1);
    CHECK(tree.nodes[0].type == 1);
    CHECK(tree.nodes[0].birth == 0.0);
    CHECK(tree.nodes[0].dist1 == 0);
    CHECK(tree.nodes[0].n_children == 0);
    CHECK(tree.height() == 0);
    CHECK(auxiliary_height_of(tree) == 0);
  }
  CHECK_THROWS_AS(branch_simulate(BranchVariant::plain, 1, -0.5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(branch_simulate(BranchVariant::pruned, 0, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("offspring types follow the triangle rules", "[branching]") {
  const BranchTree tree = branch_simulate(BranchVariant::plain, 1, 5.0, 90210);
  REQUIRE(tree.node_count() > 1000);
  const auto kids = children_of(tree);
  u64 rule1 = 0, rule2 = 0, rule3 = 0;
  for (u32 i = 0; i < tree.nodes.size(); ++i) {
    const BranchNode& n = tree.nodes[i];
    REQUIRE(n.n_children == kids[i].size());
    if (kids[i].empty()) continue;
    const std::vector<int> ts = child_types(tree, kids[i]);
    switch (n.type) {
      case 1:
        CHECK(ts == std::vector<int>{2, 2, 2});
        ++rule1;
        break;
      case 2:
        CHECK(ts == std::vector<int>{2, 3, 3});
        ++rule2;
        break;
      default:
        CHECK(ts == std::vector<int>{1, 3, 3});
        ++rule3;
        break;
    }
    // all three siblings share one birth, strictly after the parent
    const double b = tree.nodes[kids[i][0]].birth;
    CHECK(b > n.birth);
    CHECK(b <= tree.t);
    for (u32 c : kids[i]) CHECK(tree.nodes[c].birth == b);
  }
  CHECK(rule1 > 0);
  CHECK(rule2 > 0);
  CHECK(rule3 > 0);
}

TEST_CASE("ancestor bookkeeping stays consistent", "[branching]") {
  // the boosted tree multiplies much faster, so it gets a closer horizon
  const std::pair<BranchVariant, double> runs[] = {
      {BranchVariant::plain, 4.5},
      {BranchVariant::pruned, 4.5},
      {BranchVariant::boosted, 2.0},
  };
  for (const auto& [v, horizon] : runs) {
    const BranchTree tree = branch_simulate(v, 2, horizon, 777);
    for (u32 i = 1; i < tree.nodes.size(); ++i) {
      const BranchNode& n = tree.nodes[i];
      const BranchNode& p = tree.nodes[n.parent];
      CHECK(n.depth == p.depth + 1);
      if (n.type == 1)
        CHECK(n.dist1 == 0);
      else
        CHECK(n.dist1 == p.dist1 + 1);
      CHECK(n.aux == p.aux + (n.type == 1 ? 1 : 0));
      // preorder: the first child sits right after its parent
      if (p.first_child != 0xffffffffu) CHECK(p.first_child == n.parent + 1);
    }
    u32 amax = 0;
    for (const BranchNode& n : tree.nodes) amax = std::max(amax, n.aux);
    CHECK(auxiliary_height_of(tree) == amax);
    CHECK(amax <= tree.height());
  }
}

TEST_CASE("saturation reshapes the tree per variant", "[branching]") {
  const u32 k = 2;
  const BranchTree pruned = branch_simulate(BranchVariant::pruned, k, 5.0, 4242);
  bool saw_saturated = false;
  for (const BranchNode& n : pruned.nodes) {
    if (n.type != 1 && n.dist1 >= k) {
      saw_saturated = true;
      CHECK(n.n_children == 0);
    }
  }
  CHECK(saw_saturated);
  // with k=2 no pruned lineage ever reaches a fresh type-1 node, so the tree
  // caps at root, children, grandchildren
  CHECK(pruned.node_count() <= 13);

  const BranchTree boosted = branch_simulate(BranchVariant::boosted, k, 2.2, 4242);
  const auto kids = children_of(boosted);
  u64 three = 0, four = 0;
  for (u32 i = 0; i < boosted.nodes.size(); ++i) {
    const BranchNode& n = boosted.nodes[i];
    if (n.type == 1 || n.dist1 < k) continue;
    REQUIRE(n.n_children == (n.type == 2 ? 3 : 4));
    (n.type == 2 ? three : four) += 1;
    for (u32 c : kids[i]) {
      CHECK(boosted.nodes[c].type == 1);
      CHECK(boosted.nodes[c].birth == n.birth);  // instant replacement
    }
  }
  CHECK(three > 0);
  CHECK(four > 0);
}

TEST_CASE("a one step fuse burns down to four nodes", "[branching]") {
  // with k=1 every type-2 child of the root is saturated at birth, so the
  // pruned tree is the root plus its three children and nothing else
  const BranchTree tree = branch_simulate(BranchVariant::pruned, 1, 8.0, 8);
  REQUIRE(tree.node_count() == 4);
  CHECK(tree.nodes[0].type == 1);
  for (u32 i = 1; i < 4; ++i) {
    CHECK(tree.nodes[i].type == 2);
    CHECK(tree.nodes[i].n_children == 0);
  }
  CHECK(tree.height() == 1);
  CHECK(auxiliary_height_of(tree) == 0);
}

TEST_CASE("pruning removes nodes without relabeling the rest", "[branching]") {
  const BranchTree plain = branch_simulate(BranchVariant::plain, 3, 5.5, 42);
  const BranchTree pruned = branch_simulate(BranchVariant::pruned, 3, 5.5, 42);
  REQUIRE(plain.node_count() > pruned.node_count());

  struct Info {
    double birth;
    u32 depth;
    u32 type;
  };
  std::unordered_map<u64, Info> plain_by_pos;
  plain_by_pos.reserve(plain.nodes.size());
  for (const BranchNode& n : plain.nodes)
    plain_by_pos.emplace(n.pos_seed, Info{n.birth, n.depth, n.type});
  REQUIRE(plain_by_pos.size() == plain.node_count());  // no seed collisions

  for (const BranchNode& n : pruned.nodes) {
    const auto it = plain_by_pos.find(n.pos_seed);
    REQUIRE(it != plain_by_pos.end());
    CHECK(it->second.birth == n.birth);
    CHECK(it->second.depth == n.depth);
    CHECK(it->second.type == n.type);
  }
}

TEST_CASE("simulation is a pure function of its arguments", "[branching]") {
  const BranchTree a = branch_simulate(BranchVariant::boosted, 3, 2.5, 1234);
  const BranchTree b = branch_simulate(BranchVariant::boosted, 3, 2.5, 1234);
  REQUIRE(a.node_count() == b.node_count());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].birth == b.nodes[i].birth);
    CHECK(a.nodes[i].pos_seed == b.nodes[i].pos_seed);
    CHECK(a.nodes[i].type == b.nodes[i].type);
    CHECK(a.nodes[i].parent == b.nodes[i].parent);
  }
  const BranchTree c = branch_simulate(BranchVariant::boosted, 3, 2.5, 1235);
  CHECK((c.node_count() != a.node_count() ||
         c.nodes.back().birth != a.nodes.back().birth));
}

TEST_CASE("node budgets refuse and interrupt oversized runs", "[branching]") {
  // the a-priori estimate rejects hopeless horizons before any work
  CHECK_THROWS_AS(branch_simulate(BranchVariant::plain, 1, 40.0, 1),
                  BudgetError);
  // a boosted fuse outgrows the plain estimate, tripping the runtime backstop
  BranchLimits lim;
  lim.max_nodes = 8000;
  CHECK_THROWS_AS(branch_simulate(BranchVariant::boosted, 1, 3.5, 99, lim),
                  BudgetError);
  // the same budget admits the plain tree at that horizon
  const BranchTree ok = branch_simulate(BranchVariant::plain, 1, 3.5, 99, lim);
  CHECK(ok.node_count() <= 8000);
}

TEST_CASE("growth rows line up with standalone simulations", "[branching]") {
  const std::vector<double> grid{1.0, 2.0, 3.0};
  const u64 trials = 3, seed = 7;
  const GrowthResult res =
      growth_experiment(BranchVariant::plain, 1, grid, trials, seed);
  REQUIRE(res.rows.size() == trials * grid.size());
  for (u64 tr = 0; tr < trials; ++tr) {
    u64 prev_count = 0;
    u32 prev_h = 0, prev_a = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const GrowthRow& row = res.rows[tr * grid.size() + j];
      CHECK(row.t == grid[j]);
      CHECK(row.trial == tr);
      CHECK(row.node_count >= prev_count);
      CHECK(row.height >= prev_h);
      CHECK(row.aux_height >= prev_a);
      prev_count = row.node_count;
      prev_h = row.height;
      prev_a = row.aux_height;
      // the streamed cut at t_j is exactly the tree simulated to t_j
      const BranchTree cut =
          branch_simulate(BranchVariant::plain, 1, grid[j], seed + tr);
      CHECK(row.node_count == cut.node_count());
      CHECK(row.height == cut.height());
      CHECK(row.aux_height == auxiliary_height_of(cut));
    }
  }
}

TEST_CASE("growth experiment validates its grid", "[branching]") {
  using V = BranchVariant;
  CHECK_THROWS_AS(growth_experiment(V::plain, 1, {1.0}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(growth_experiment(V::plain, 1, {2.0, 1.0}, 2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(growth_experiment(V::plain, 1, {-1.0, 1.0}, 2, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(growth_experiment(V::plain, 1, {1.0, 2.0}, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("population and type-1 depth grow at their known rates", "[branching]") {
  const GrowthResult res = growth_experiment(BranchVariant::plain, 1,
                                             {3.0, 3.5, 4.0, 4.5, 5.0}, 40, 1001);
  // population rate 2 (mean log count per unit time), generous window
  CHECK(res.slope_log_count == Catch::Approx(2.0).margin(0.35));
  // type-1 depth rate, between 1 and the population rate
  CHECK(res.slope_aux_height > 1.0);
  CHECK(res.slope_aux_height < 2.0);
}
