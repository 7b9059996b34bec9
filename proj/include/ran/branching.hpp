#pragma once

// Continuous-time typed branching tree. A node born at time b waits one unit-
// mean exponential and then bears three children (all at the same instant);
// types follow the triangle rules (1 -> 2,2,2; 2 -> one 2, two 3; 3 -> one 1,
// two 3, distinguished child uniform). Only nodes born by the horizon t are
// materialized.
//
// Variants hinge on the distance from a type-2/3 node to its nearest type-1
// ancestor reaching k:
//   plain    no intervention
//   pruned   such a node dies childless
//   boosted  such a node instantly (zero edge labels) bears type-1 children,
//            three for type 2, four for type 3
//
// All randomness is derived from a per-position seed hashed down the tree, so
// two runs sharing a seed assign identical births and types to every shared
// position regardless of variant or traversal order; the pruned tree is then
// literally a subset of the plain one.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ran/rng.hpp"

namespace ran {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

enum class BranchVariant { plain, pruned, boosted };

inline const char* to_string(BranchVariant v) {
  switch (v) {
    case BranchVariant::plain: return "plain";
    case BranchVariant::pruned: return "pruned";
    case BranchVariant::boosted: return "boosted";
  }
  return "?";
}

struct BranchLimits {
  u64 max_nodes = (8ull << 30) / 40;  // 8 GiB at ~40 bytes a node
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct BranchRecord {
  double birth;
  u64 pos_seed;
  u32 parent;  // index among visited nodes, 0xffffffff for the root
  u32 depth;
  u32 aux;
  std::uint16_t dist1;  // edges to the nearest type-1 ancestor
  std::uint8_t type;
  std::uint8_t n_children;
};

// Expands the tree depth-first, calling visit(record) exactly once per born
// node, in an order where every parent precedes its children. Returns the
// number of nodes visited. visit must return the node's index (materializing
// walkers) or anything convertible to u32 (streaming walkers may return 0).
template <class Visit>
inline u64 branch_walk(BranchVariant variant, u32 k, double t, u64 seed,
                       u64 max_nodes, Visit&& visit) {
  if (!(t >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  if (variant != BranchVariant::plain && k == 0)
    throw std::invalid_argument("pruned/boosted variants need k >= 1");
  {
    // a-priori refusal: expected population is ~3 e^{2t} for the plain tree
    const double estimate = 3.0 * std::exp(2.0 * t);
    if (estimate > static_cast<double>(max_nodes) * 1.25)
      throw BudgetError("horizon t=" + std::to_string(t) + " needs about " +
                        std::to_string(estimate) +
                        " nodes, over the budget of " + std::to_string(max_nodes));
  }
  u64 s0 = seed;
  std::vector<BranchRecord> stack;
  stack.push_back({0.0, splitmix64(s0), 0xffffffffu, 0, 0, 0, 1, 0});
  u64 visited = 0;
  while (!stack.empty()) {
    BranchRecord rec = stack.back();
    stack.pop_back();
    if (++visited > max_nodes)
      throw BudgetError("node budget of " + std::to_string(max_nodes) +
                        " exhausted at t=" + std::to_string(t));

    const bool saturated = rec.type != 1 && rec.dist1 >= k &&
                           variant != BranchVariant::plain;
    u64 state = rec.pos_seed;
    std::uint8_t n_children = 0;
    double child_birth = rec.birth;
    std::uint8_t child_type[4] = {0, 0, 0, 0};
    if (saturated && variant == BranchVariant::pruned) {
      n_children = 0;
    } else if (saturated) {  // boosted: instant type-1 children
      n_children = rec.type == 2 ? 3 : 4;
      for (int j = 0; j < 4; ++j) child_type[j] = 1;
    } else {
      const double wait = exp1(splitmix64(state));
      child_birth = rec.birth + wait;
      if (child_birth <= t) {
        n_children = 3;
        if (rec.type == 1) {
          child_type[0] = child_type[1] = child_type[2] = 2;
        } else {
          const u32 pick = bounded(splitmix64(state), 3);
          for (u32 j = 0; j < 3; ++j)
            child_type[j] = j == pick ? (rec.type == 2 ? 2 : 1) : 3;
        }
      }
    }
    rec.n_children = n_children;
    const u32 id = static_cast<u32>(visit(static_cast<const BranchRecord&>(rec)));
    for (std::uint8_t j = n_children; j-- > 0;) {
      BranchRecord c;
      c.birth = child_birth;
      c.pos_seed = mix64(rec.pos_seed, j + 1);
      c.parent = id;
      c.depth = rec.depth + 1;
      c.type = child_type[j];
      c.dist1 = c.type == 1 ? 0 : static_cast<std::uint16_t>(rec.dist1 + 1);
      c.aux = rec.aux + (c.type == 1 ? 1 : 0);
      c.n_children = 0;
      stack.push_back(c);
    }
  }
  return visited;
}

}  // namespace detail

struct BranchNode {
  double birth = 0.0;
  u64 pos_seed = 0;  // identity of the tree position under seed coupling
  u32 parent = 0xffffffffu;
  u32 first_child = 0xffffffffu;
  u32 depth = 0;
  u32 aux = 0;  // type-1 ancestors including self, minus 1
  std::uint16_t dist1 = 0;
  std::uint8_t type = 1;
  std::uint8_t n_children = 0;
};

struct BranchTree {
  BranchVariant variant = BranchVariant::plain;
  u32 k = 0;
  double t = 0.0;
  u64 seed = 0;
  std::vector<BranchNode> nodes;

  u64 node_count() const { return nodes.size(); }
  u32 height() const {
    u32 h = 0;
    for (const BranchNode& n : nodes) h = std::max(h, n.depth);
    return h;
  }
};

inline BranchTree branch_simulate(BranchVariant variant, u32 k, double t,
                                  u64 seed, BranchLimits limits = {}) {
  BranchTree tree;
  tree.variant = variant;
  tree.k = k;
  tree.t = t;
  tree.seed = seed;
  detail::branch_walk(variant, k, t, seed, limits.max_nodes,
                      [&](const detail::BranchRecord& r) -> u32 {
                        BranchNode n;
                        n.birth = r.birth;
                        n.pos_seed = r.pos_seed;
                        n.parent = r.parent;
                        n.depth = r.depth;
                        n.aux = r.aux;
                        n.dist1 = r.dist1;
                        n.type = r.type;
                        n.n_children = r.n_children;
                        const u32 id = static_cast<u32>(tree.nodes.size());
                        if (r.parent != 0xffffffffu) {
                          BranchNode& p = tree.nodes[r.parent];
                          if (p.first_child == 0xffffffffu) p.first_child = id;
                        }
                        tree.nodes.push_back(n);
                        return id;
                      });
  return tree;
}

// Max over nodes of (type-1 count on the root path - 1), recomputed from the
// stored types; parents precede children in the node array.
inline u32 auxiliary_height_of(const BranchTree& tree) {
  if (tree.nodes.empty()) return 0;
  std::vector<u32> aux(tree.nodes.size(), 0);
  u32 ah = 0;
  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    const BranchNode& n = tree.nodes[i];
    aux[i] = aux[n.parent] + (n.type == 1 ? 1 : 0);
    ah = std::max(ah, aux[i]);
  }
  return ah;
}

struct GrowthRow {
  double t = 0.0;
  u64 trial = 0;
  u64 node_count = 0;
  u32 height = 0;
  u32 aux_height = 0;
};

struct GrowthResult {
  std::vector<GrowthRow> rows;      // trials x grid, grid-major per trial
  double slope_log_count = 0.0;     // least-squares slope of mean log count vs t
  double slope_aux_height = 0.0;    // least-squares slope of mean aux height vs t
};

namespace detail {

inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// One streamed simulation per trial at the largest horizon; every grid point
// is read off the same tree (counts of births up to t_i, running maxima).
// Trial seeds are seed + trial index.
inline GrowthResult growth_experiment(BranchVariant variant, u32 k,
                                      const std::vector<double>& t_grid,
                                      u64 trials, u64 seed,
                                      BranchLimits limits = {}) {
  if (t_grid.size() < 2)
    throw std::invalid_argument("growth experiment needs at least 2 grid points");
  if (!(t_grid.front() >= 0.0))
    throw std::invalid_argument("time grid must be nonnegative");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
  if (trials == 0) throw std::invalid_argument("need at least one trial");

  const std::size_t g = t_grid.size();
  GrowthResult res;
  res.rows.reserve(trials * g);
  std::vector<double> mean_log(g, 0.0), mean_aux(g, 0.0);
  std::vector<u64> cnt(g);
  std::vector<u32> hmax(g), amax(g);
  for (u64 tr = 0; tr < trials; ++tr) {
    std::fill(cnt.begin(), cnt.end(), 0);
    std::fill(hmax.begin(), hmax.end(), 0);
    std::fill(amax.begin(), amax.end(), 0);
    detail::branch_walk(
        variant, k, t_grid.back(), seed + tr, limits.max_nodes,
        [&](const detail::BranchRecord& r) -> u32 {
          const auto it = std::lower_bound(t_grid.begin(), t_grid.end(), r.birth);
          const std::size_t j = static_cast<std::size_t>(it - t_grid.begin());
          // r contributes to every grid point >= its birth; record at the
          // first and fold forward after the walk
          ++cnt[j];
          hmax[j] = std::max(hmax[j], r.depth);
          amax[j] = std::max(amax[j], r.aux);
          return 0;
        });
    u64 running = 0;
    u32 rh = 0, ra = 0;
    for (std::size_t j = 0; j < g; ++j) {
      running += cnt[j];
      rh = std::max(rh, hmax[j]);
      ra = std::max(ra, amax[j]);
      res.rows.push_back(GrowthRow{t_grid[j], tr, running, rh, ra});
      mean_log[j] += std::log(static_cast<double>(running));
      mean_aux[j] += static_cast<double>(ra);
    }
  }
  for (std::size_t j = 0; j < g; ++j) {
    mean_log[j] /= static_cast<double>(trials);
    mean_aux[j] /= static_cast<double>(trials);
  }
  res.slope_log_count = detail::ls_slope(t_grid, mean_log);
  res.slope_aux_height = detail::ls_slope(t_grid, mean_aux);
  return res;
}

}  // namespace ran
