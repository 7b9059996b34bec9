#pragma once

// Distance-based measurements. Everything here treats the graph as an
// unweighted undirected graph in CSR form; the triangulation structure only
// enters through the triangle tree (auxiliary height).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ran/core.hpp"
#include "ran/rng.hpp"

namespace ran {

inline constexpr u32 kUnreached = 0xffffffffu;

struct DistanceField {
  std::vector<u32> dist;
  u32 max_dist = 0;
  u32 argmax = 0;
};

inline DistanceField bfs(const RanGraph& g, std::span<const u32> sources) {
  if (sources.empty()) throw std::invalid_argument("bfs needs at least one source");
  DistanceField f;
  f.dist.assign(g.n, kUnreached);
  std::vector<u32> queue;
  queue.reserve(g.n);
  for (u32 s : sources) {
    if (s >= g.n) throw std::invalid_argument("bfs source out of range");
    if (f.dist[s] == kUnreached) {
      f.dist[s] = 0;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const u32 u = queue[head];
    const u32 du = f.dist[u];
    if (du > f.max_dist) {
      f.max_dist = du;
      f.argmax = u;
    }
    for (u32 v : g.neighbors(u))
      if (f.dist[v] == kUnreached) {
        f.dist[v] = du + 1;
        queue.push_back(v);
      }
  }
  return f;
}

inline DistanceField bfs(const RanGraph& g, u32 source) {
  const u32 s[1] = {source};
  return bfs(g, std::span<const u32>(s, 1));
}

// Hop distance to the outer triangle {0,1,2} for every vertex.
inline DistanceField boundary_distances(const RanGraph& g) {
  const u32 s[3] = {0, 1, 2};
  return bfs(g, std::span<const u32>(s, 3));
}

// max_v dist(v, {0,1,2})
inline u32 radius_from_boundary(const RanGraph& g) {
  return boundary_distances(g).max_dist;
}

// Max over tree nodes of (type-1 nodes on the root path - 1), recomputed from
// the stored types alone.
inline u32 auxiliary_height(const TriTree& t) {
  std::vector<u32> aux(t.size(), 0);
  u32 ah = 0;
  for (u32 id = 1; id < t.size(); ++id) {
    aux[id] = aux[t[id].parent] + (t[id].type == 1 ? 1 : 0);
    ah = std::max(ah, aux[id]);
  }
  return ah;
}

// Triangle types recomputed from actual boundary distances of the corners:
// {t,t,t} -> 1, {t,t,t+1} -> 2, {t,t+1,t+1} -> 3. Any other corner multiset
// is reported as 0 (no valid type).
inline std::vector<std::uint8_t> types_from_distances(const RanGraph& g,
                                                      const TriTree& t) {
  const DistanceField f = boundary_distances(g);
  std::vector<std::uint8_t> out(t.size(), 0);
  for (u32 id = 0; id < t.size(); ++id) {
    std::array<u32, 3> d{f.dist[t[id].tri[0]], f.dist[t[id].tri[1]],
                         f.dist[t[id].tri[2]]};
    std::sort(d.begin(), d.end());
    if (d[0] == d[2])
      out[id] = 1;
    else if (d[0] == d[1] && d[2] == d[0] + 1)
      out[id] = 2;
    else if (d[1] == d[2] && d[1] == d[0] + 1)
      out[id] = 3;
  }
  return out;
}

// Exact diameter by all-pairs BFS. Oracle for small graphs only.
inline u32 diameter_allpairs(const RanGraph& g) {
  if (g.n > 4096)
    throw std::invalid_argument("all-pairs diameter is limited to n <= 4096");
  u32 best = 0;
  for (u32 v = 0; v < g.n; ++v) best = std::max(best, bfs(g, v).max_dist);
  return best;
}

// Exact diameter with eccentricity pruning: double sweep for a lower bound
// and a central root, then scan BFS levels downward; vertices at level i can
// only realize a diameter above the bound while 2i exceeds it.
inline u32 diameter_exact(const RanGraph& g) {
  if (g.n <= 2) return g.n > 1;
  const DistanceField d0 = bfs(g, u32{0});
  const u32 a = d0.argmax;
  const DistanceField da = bfs(g, a);
  const u32 b = da.argmax;
  u32 lb = da.max_dist;

  // walk half way along a shortest a-b path to find a central root
  u32 mid = b;
  for (u32 step = 0; step < da.max_dist / 2; ++step) {
    for (u32 w : g.neighbors(mid))
      if (da.dist[w] + 1 == da.dist[mid]) {
        mid = w;
        break;
      }
  }
  const DistanceField dm = bfs(g, mid);
  lb = std::max(lb, dm.max_dist);

  std::vector<std::vector<u32>> levels(dm.max_dist + 1);
  for (u32 v = 0; v < g.n; ++v) levels[dm.dist[v]].push_back(v);
  for (u32 i = dm.max_dist; lb < 2 * i; --i) {
    for (u32 v : levels[i]) lb = std::max(lb, bfs(g, v).max_dist);
    if (i == 0) break;
  }
  return lb;
}

struct AvgDistanceEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  u64 pairs = 0;
};

namespace detail {

// Level-synchronized bidirectional BFS with stamped scratch arrays, so
// repeated queries on one graph cost no reinitialization.
class PairDistance {
 public:
  explicit PairDistance(const RanGraph& g) : g_(g) {
    dist_[0].assign(g.n, 0);
    dist_[1].assign(g.n, 0);
    stamp_[0].assign(g.n, 0);
    stamp_[1].assign(g.n, 0);
  }

  u32 operator()(u32 s, u32 t) {
    if (s == t) return 0;
    ++round_;
    front_[0].assign(1, s);
    front_[1].assign(1, t);
    stamp_[0][s] = round_;
    stamp_[1][t] = round_;
    dist_[0][s] = 0;
    dist_[1][t] = 0;
    u32 level[2] = {0, 0};
    u32 best = kUnreached;
    while (!front_[0].empty() && !front_[1].empty() &&
           level[0] + level[1] < best) {
      const int side = front_[0].size() <= front_[1].size() ? 0 : 1;
      const int other = 1 - side;
      next_.clear();
      const u32 d = ++level[side];
      for (u32 u : front_[side])
        for (u32 v : g_.neighbors(u)) {
          if (stamp_[side][v] != round_) {
            stamp_[side][v] = round_;
            dist_[side][v] = d;
            next_.push_back(v);
            if (stamp_[other][v] == round_)
              best = std::min(best, d + dist_[other][v]);
          }
        }
      front_[side].swap(next_);
    }
    return best;
  }

 private:
  const RanGraph& g_;
  std::vector<u32> dist_[2], stamp_[2], front_[2], next_;
  u32 round_ = 0;
};

}  // namespace detail

// Mean hop distance over uniformly sampled unordered vertex pairs.
inline AvgDistanceEstimate average_distance_estimate(const RanGraph& g,
                                                     u64 num_pairs, u64 seed) {
  if (g.n < 2) throw std::invalid_argument("need at least 2 vertices");
  if (num_pairs == 0) throw std::invalid_argument("need at least 1 pair");
  detail::PairDistance pd(g);
  std::mt19937_64 rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (u64 i = 0; i < num_pairs; ++i) {
    u32 u = bounded(rng(), g.n);
    u32 v = bounded(rng(), g.n - 1);
    if (v >= u) ++v;  // uniform over unordered pairs, u != v
    const double d = pd(u, v);
    sum += d;
    sumsq += d * d;
  }
  AvgDistanceEstimate est;
  est.pairs = num_pairs;
  est.mean = sum / static_cast<double>(num_pairs);
  if (num_pairs > 1) {
    const double var =
        (sumsq - sum * sum / static_cast<double>(num_pairs)) /
        static_cast<double>(num_pairs - 1);
    est.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(num_pairs));
  }
  return est;
}

struct MetricsReport {
  u32 n = 0;
  u64 seed = 0;
  u32 diameter = 0;
  u32 radius = 0;
  u32 aux_height = 0;
  double avg_distance = 0.0;
  double avg_distance_stderr = 0.0;

  static std::string csv_header() {
    return "n,seed,diameter,radius,aux_height,avg_dist_est,stderr";
  }
  std::string csv_row() const {
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%u,%llu,%u,%u,%u,%.6f,%.6f", n,
                  static_cast<unsigned long long>(seed), diameter, radius,
                  aux_height, avg_distance, avg_distance_stderr);
    return buf;
  }
};

inline MetricsReport compute_metrics(const RanInstance& inst, u64 num_pairs,
                                     u64 pair_seed) {
  MetricsReport r;
  r.n = inst.graph.n;
  r.seed = inst.graph.seed;
  r.diameter = diameter_exact(inst.graph);
  r.radius = radius_from_boundary(inst.graph);
  r.aux_height = auxiliary_height(inst.tree);
  const AvgDistanceEstimate est =
      average_distance_estimate(inst.graph, num_pairs, pair_seed);
  r.avg_distance = est.mean;
  r.avg_distance_stderr = est.stderr_;
  return r;
}

}  // namespace ran
