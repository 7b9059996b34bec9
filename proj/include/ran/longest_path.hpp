#pragma once

// Longest simple paths.
//
// Exact search runs a DP over the triangle tree. The region of a node is the
// three edges created by its split plus its children's regions (the root
// also owns the outer triangle's edges); regions of siblings meet only at
// triangle corners. Restricting a simple path to a region's edges leaves a
// disjoint union of subpaths, and all a parent needs to know about them is:
// each corner's part (untouched / subpath endpoint / passed through), which
// corners are linked through the region by one subpath, whether one subpath
// lies entirely inside, and implicitly how many of the global path's two
// endpoints are buried in the interior. That budget of two buried endpoints
// keeps the interface to a few dozen profiles; profile gluing is enumerated
// once into lookup tables and the tree sweep is table-driven.
//
// Also here: a brute-force oracle for tiny graphs, the recursive two-corner
// path with a guaranteed edge count, and the nine-grandchild obstruction
// check that any simple path must miss one grandchild triangle's interior.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ran/core.hpp"
#include "ran/harness.hpp"

namespace ran {

struct PathResult {
  std::vector<u32> vertices;
  std::string method;

  u32 length_vertices() const { return static_cast<u32>(vertices.size()); }
  u32 length_edges() const {
    return vertices.empty() ? 0 : static_cast<u32>(vertices.size()) - 1;
  }
};

inline bool is_simple_path(const RanGraph& g, const std::vector<u32>& vs) {
  if (vs.empty()) return false;
  std::vector<u32> seen(vs.begin(), vs.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i)
    if (vs[i] >= g.n || vs[i + 1] >= g.n || !g.has_edge(vs[i], vs[i + 1]))
      return false;
  return true;
}

namespace lpdetail {

// ------------------------------------------------------ interface profiles
//
// A profile over b boundary slots: per slot free/end/through, a partition of
// the touched slots into subpaths, and a flag for one subpath with no slot
// contact at all. Validity: every subpath has two ends, ends not sitting on
// a slot are buried path endpoints, and at most two of those exist overall.

struct StateDesc {
  std::uint8_t b = 3;
  std::array<std::uint8_t, 4> role{};   // 0 free, 1 end, 2 through
  std::array<std::int8_t, 4> group{};   // -1 for free slots, else canonical id
  std::uint8_t flag = 0;                // one subpath entirely interior

  u32 key() const {
    u32 k = flag;
    for (u32 s = 0; s < b; ++s)
      k = (k << 5) | (role[s] << 3) | static_cast<u32>(group[s] + 1);
    return k;
  }
};

// mutable working form: explicit subpaths
struct Seg {
  int ends[4];
  int ne = 0;
  int thru[4];
  int nt = 0;
};

struct Work {
  int b = 3;
  int flag = 0;
  std::vector<Seg> segs;

  int role_of(int s) const {
    for (const Seg& sg : segs) {
      for (int i = 0; i < sg.ne; ++i)
        if (sg.ends[i] == s) return 1;
      for (int i = 0; i < sg.nt; ++i)
        if (sg.thru[i] == s) return 2;
    }
    return 0;
  }

  // buried endpoint total; -1 when some subpath is overfull
  int buried() const {
    int e = 2 * flag;
    for (const Seg& sg : segs) {
      if (sg.ne > 2) return -1;
      e += 2 - sg.ne;
    }
    return e;
  }
};

inline Work to_work(const StateDesc& d) {
  Work w;
  w.b = d.b;
  w.flag = d.flag;
  std::array<int, 4> seg_of{-1, -1, -1, -1};
  for (int s = 0; s < d.b; ++s) {
    if (d.role[s] == 0) continue;
    const int g = d.group[s];
    if (seg_of[g] < 0) {
      seg_of[g] = static_cast<int>(w.segs.size());
      w.segs.push_back({});
    }
    Seg& sg = w.segs[seg_of[g]];
    if (d.role[s] == 1)
      sg.ends[sg.ne++] = s;
    else
      sg.thru[sg.nt++] = s;
  }
  return w;
}

inline bool from_work(const Work& w, StateDesc& out) {
  if (w.flag > 1) return false;
  const int e = w.buried();
  if (e < 0 || e > 2) return false;
  out = StateDesc{};
  out.b = static_cast<std::uint8_t>(w.b);
  out.flag = static_cast<std::uint8_t>(w.flag);
  out.role.fill(0);
  out.group.fill(-1);
  std::array<int, 8> relabel;
  relabel.fill(-1);
  int next = 0;
  for (int s = 0; s < w.b; ++s) {
    for (std::size_t i = 0; i < w.segs.size(); ++i) {
      const Seg& sg = w.segs[i];
      bool end = false, thru = false;
      for (int j = 0; j < sg.ne; ++j) end |= sg.ends[j] == s;
      for (int j = 0; j < sg.nt; ++j) thru |= sg.thru[j] == s;
      if (!end && !thru) continue;
      if (relabel[i] < 0) relabel[i] = next++;
      out.role[s] = end ? 1 : 2;
      out.group[s] = static_cast<std::int8_t>(relabel[i]);
      break;
    }
  }
  // every subpath must touch a slot unless it is the interior flag
  for (std::size_t i = 0; i < w.segs.size(); ++i)
    if (w.segs[i].ne + w.segs[i].nt == 0) return false;
  return true;
}

// Glues profile q (slot space mapped through map[]) onto a; nullopt-style
// return of false when degrees clash, a cycle would close, or the endpoint
// budget overflows.
inline bool glue(const Work& a, const StateDesc& qd, const int* map, Work& out) {
  if (a.flag && qd.flag) return false;
  out = a;
  out.flag = a.flag | qd.flag;
  const Work q = to_work(qd);
  for (const Seg& sg : q.segs) {
    Seg m{};
    for (int i = 0; i < sg.ne; ++i) m.ends[m.ne++] = map[sg.ends[i]];
    for (int i = 0; i < sg.nt; ++i) m.thru[m.nt++] = map[sg.thru[i]];
    out.segs.push_back(m);
  }
  // degree check per slot
  for (int s = 0; s < out.b; ++s) {
    int deg = 0;
    for (const Seg& sg : out.segs) {
      for (int i = 0; i < sg.ne; ++i) deg += sg.ends[i] == s;
      for (int i = 0; i < sg.nt; ++i) deg += 2 * (sg.thru[i] == s);
    }
    if (deg > 2) return false;
  }
  // a slot holding two subpath ends joins them and becomes pass-through;
  // both ends on one subpath would close a cycle
  for (int s = 0; s < out.b; ++s) {
    int ia = -1, ib = -1;
    for (std::size_t i = 0; i < out.segs.size(); ++i)
      for (int j = 0; j < out.segs[i].ne; ++j)
        if (out.segs[i].ends[j] == s) {
          if (ia < 0)
            ia = static_cast<int>(i);
          else
            ib = static_cast<int>(i);
        }
    if (ib < 0) continue;
    if (ia == ib) return false;  // would close a cycle
    Seg& A = out.segs[ia];
    Seg& B = out.segs[ib];
    Seg m{};
    for (int j = 0; j < A.ne; ++j)
      if (A.ends[j] != s) m.ends[m.ne++] = A.ends[j];
    for (int j = 0; j < B.ne; ++j)
      if (B.ends[j] != s) m.ends[m.ne++] = B.ends[j];
    for (int j = 0; j < A.nt; ++j) m.thru[m.nt++] = A.thru[j];
    for (int j = 0; j < B.nt; ++j) m.thru[m.nt++] = B.thru[j];
    m.thru[m.nt++] = s;
    out.segs[ia] = m;
    out.segs.erase(out.segs.begin() + ib);
  }
  return true;
}

struct Algebra {
  std::vector<StateDesc> s3, s4;
  std::map<u32, int> id3, id4;
  int empty3 = -1, empty4 = -1;
  // spoke_init[mask of edges corner j - new vertex] -> s4 id, -1 invalid
  std::array<int, 8> spoke_init{};
  std::array<int, 8> spoke_count{};
  // glue_child[j]: s4 x s3 -> s4, -1 invalid; child j's slots sit at
  // parent slots {3,1,2} / {0,3,2} / {0,1,3}
  std::array<std::vector<int>, 3> glue_child;
  std::vector<int> project;  // s4 -> s3 with slot 3 buried, -1 invalid
  // final_ok[s3 * 8 + outer edge mask]: profile + outer edges form one path
  std::vector<std::uint8_t> final_ok;

  static const Algebra& instance() {
    static const Algebra a;
    return a;
  }

  int n3() const { return static_cast<int>(s3.size()); }
  int n4() const { return static_cast<int>(s4.size()); }

 private:
  static void enumerate(int b, std::vector<StateDesc>& states, std::map<u32, int>& ids) {
    std::array<std::uint8_t, 4> role{};
    const int total = b == 3 ? 27 : 81;
    for (int rc = 0; rc < total; ++rc) {
      int r = rc;
      std::vector<int> used;
      for (int s = 0; s < b; ++s, r /= 3) {
        role[s] = static_cast<std::uint8_t>(r % 3);
        if (role[s]) used.push_back(s);
      }
      // restricted growth strings enumerate the partitions of `used`
      std::array<std::int8_t, 4> group{};
      group.fill(-1);
      std::vector<int> rgs(used.size(), 0);
      while (true) {
        for (int flag = 0; flag < 2; ++flag) {
          StateDesc d;
          d.b = static_cast<std::uint8_t>(b);
          d.role = role;
          d.group = group;
          for (std::size_t i = 0; i < used.size(); ++i)
            d.group[used[i]] = static_cast<std::int8_t>(rgs[i]);
          d.flag = static_cast<std::uint8_t>(flag);
          const Work w = to_work(d);
          const int e = w.buried();
          if (e < 0 || e > 2) continue;
          StateDesc canon;
          if (!from_work(w, canon)) continue;
          if (ids.emplace(canon.key(), static_cast<int>(states.size())).second)
            states.push_back(canon);
        }
        // next restricted growth string
        int i = static_cast<int>(rgs.size()) - 1;
        for (; i > 0; --i) {
          int mx = 0;
          for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[j]);
          if (rgs[i] <= mx) {
            ++rgs[i];
            std::fill(rgs.begin() + i + 1, rgs.end(), 0);
            break;
          }
          rgs[i] = 0;
        }
        if (i <= 0) break;
      }
    }
  }

  int lookup(const Work& w, const std::map<u32, int>& ids) const {
    StateDesc d;
    if (!from_work(w, d)) return -1;
    const auto it = ids.find(d.key());
    return it == ids.end() ? -1 : it->second;
  }

  Algebra() {
    enumerate(3, s3, id3);
    enumerate(4, s4, id4);
    {
      StateDesc d;
      d.b = 3;
      d.role.fill(0);
      d.group.fill(-1);
      empty3 = id3.at(d.key());
      d.b = 4;
      empty4 = id4.at(d.key());
    }

    auto edge_desc = [](int b, int x, int y) {
      StateDesc d;
      d.b = static_cast<std::uint8_t>(b);
      d.role.fill(0);
      d.group.fill(-1);
      d.role[x] = d.role[y] = 1;
      d.group[x] = d.group[y] = 0;
      return d;
    };
    static constexpr int kIdentity[4] = {0, 1, 2, 3};

    // fold spoke subsets onto the empty 4-slot profile
    for (int mask = 0; mask < 8; ++mask) {
      Work w = to_work(s4[empty4]);
      bool ok = true;
      int cnt = 0;
      for (int j = 0; j < 3 && ok; ++j) {
        if (!(mask >> j & 1)) continue;
        Work next;
        ok = glue(w, edge_desc(4, j, 3), kIdentity, next);
        if (ok) w = next;
        ++cnt;
      }
      spoke_init[mask] = ok ? lookup(w, id4) : -1;
      spoke_count[mask] = cnt;
    }

    // child slot maps into the parent's 4-slot space
    static constexpr int kChildMap[3][3] = {{3, 1, 2}, {0, 3, 2}, {0, 1, 3}};
    for (int j = 0; j < 3; ++j) {
      glue_child[j].assign(static_cast<std::size_t>(n4()) * n3(), -1);
      for (int a = 0; a < n4(); ++a) {
        const Work wa = to_work(s4[a]);
        for (int q = 0; q < n3(); ++q) {
          Work out;
          if (glue(wa, s3[q], kChildMap[j], out))
            glue_child[j][static_cast<std::size_t>(a) * n3() + q] = lookup(out, id4);
        }
      }
    }

    // burying slot 3 (the split vertex is interior to the parent's triangle)
    project.assign(n4(), -1);
    for (int a = 0; a < n4(); ++a) {
      Work w = to_work(s4[a]);
      bool ok = true;
      for (std::size_t i = 0; i < w.segs.size() && ok; ++i) {
        Seg& sg = w.segs[i];
        int ne = 0;
        for (int j = 0; j < sg.ne; ++j)
          if (sg.ends[j] != 3) sg.ends[ne++] = sg.ends[j];
        sg.ne = ne;
        int nt = 0;
        for (int j = 0; j < sg.nt; ++j)
          if (sg.thru[j] != 3) sg.thru[nt++] = sg.thru[j];
        sg.nt = nt;
        if (sg.ne + sg.nt == 0) {
          if (w.flag) ok = false;  // two interior subpaths cannot both exist
          w.flag = 1;
          w.segs.erase(w.segs.begin() + i);
          --i;
        }
      }
      if (!ok) continue;
      w.b = 3;
      project[a] = lookup(w, id3);
    }

    // outer edge folding at the root; valid when exactly one subpath remains
    final_ok.assign(static_cast<std::size_t>(n3()) * 8, 0);
    static constexpr int kOuter[3][2] = {{0, 1}, {1, 2}, {0, 2}};
    for (int q = 0; q < n3(); ++q) {
      for (int mask = 0; mask < 8; ++mask) {
        Work w = to_work(s3[q]);
        bool ok = true;
        for (int j = 0; j < 3 && ok; ++j) {
          if (!(mask >> j & 1)) continue;
          Work next;
          ok = glue(w, edge_desc(3, kOuter[j][0], kOuter[j][1]), kIdentity, next);
          if (ok) w = next;
        }
        if (!ok) continue;
        if (static_cast<int>(w.segs.size()) + w.flag == 1)
          final_ok[static_cast<std::size_t>(q) * 8 + mask] = 1;
      }
    }
  }
};

}  // namespace lpdetail

// ------------------------------------------------------------- exact search

inline PathResult longest_path_exact(const RanInstance& inst) {
  const RanGraph& g = inst.graph;
  const TriTree& t = inst.tree;
  if (g.n < 3 || t.size() != 3 * g.n - 8 || t[0].tri != std::array<u32, 3>{0, 1, 2})
    throw std::invalid_argument("graph/tree pair is inconsistent");

  const auto& A = lpdetail::Algebra::instance();
  const int n3 = A.n3();
  if (n3 > 63 || A.n4() > 4096) throw std::logic_error("profile space overflow");

  // compact numbering of internal nodes; children have larger ids so one
  // descending sweep is bottom-up
  std::vector<u32> internal_idx(t.size(), kNoNode);
  u32 n_internal = 0;
  for (u32 id = 0; id < t.size(); ++id)
    if (!t[id].leaf()) internal_idx[id] = n_internal++;

  std::vector<std::int32_t> val(static_cast<std::size_t>(n_internal) * n3, -1);
  std::vector<u32> choice(static_cast<std::size_t>(n_internal) * n3, 0);

  std::vector<std::int32_t> acc(A.n4()), nxt(A.n4());
  std::vector<u32> accc(A.n4()), nxtc(A.n4());

  for (u32 id = t.size(); id-- > 0;) {
    if (t[id].leaf()) continue;
    const u32 row = internal_idx[id];
    std::fill(acc.begin(), acc.end(), -1);
    for (int mask = 0; mask < 8; ++mask) {
      const int s = A.spoke_init[mask];
      if (s < 0) continue;
      if (A.spoke_count[mask] > acc[s]) {
        acc[s] = A.spoke_count[mask];
        accc[s] = static_cast<u32>(mask) |
                  (static_cast<u32>(A.empty3) << 3) |
                  (static_cast<u32>(A.empty3) << 9) |
                  (static_cast<u32>(A.empty3) << 15);
      }
    }
    for (int j = 0; j < 3; ++j) {
      const u32 child = t[id].first_child + j;
      if (t[child].leaf()) continue;  // gluing the empty profile changes nothing
      const std::int32_t* cval = &val[static_cast<std::size_t>(internal_idx[child]) * n3];
      const std::vector<int>& table = A.glue_child[j];
      std::fill(nxt.begin(), nxt.end(), -1);
      for (int a = 0; a < A.n4(); ++a) {
        if (acc[a] < 0) continue;
        const int* trow = &table[static_cast<std::size_t>(a) * n3];
        for (int q = 0; q < n3; ++q) {
          if (cval[q] < 0) continue;
          const int tgt = trow[q];
          if (tgt < 0) continue;
          const std::int32_t cand = acc[a] + cval[q];
          if (cand > nxt[tgt]) {
            nxt[tgt] = cand;
            nxtc[tgt] = (accc[a] & ~(63u << (3 + 6 * j))) |
                        (static_cast<u32>(q) << (3 + 6 * j));
          }
        }
      }
      acc.swap(nxt);
      accc.swap(nxtc);
    }
    std::int32_t* out = &val[static_cast<std::size_t>(row) * n3];
    u32* outc = &choice[static_cast<std::size_t>(row) * n3];
    for (int a = 0; a < A.n4(); ++a) {
      if (acc[a] < 0) continue;
      const int s = A.project[a];
      if (s < 0) continue;
      if (acc[a] > out[s]) {
        out[s] = acc[a];
        outc[s] = accc[a];
      }
    }
  }

  // root profile + outer edge subset forming a single path
  std::int32_t best = -1;
  int best_state = -1, best_mask = 0;
  const bool root_internal = !t[0].leaf();
  for (int q = 0; q < n3; ++q) {
    std::int32_t base;
    if (root_internal)
      base = val[q];
    else
      base = q == A.empty3 ? 0 : -1;
    if (base < 0) continue;
    for (int mask = 0; mask < 8; ++mask) {
      if (!A.final_ok[static_cast<std::size_t>(q) * 8 + mask]) continue;
      const std::int32_t cand = base + std::popcount(static_cast<u32>(mask));
      if (cand > best) {
        best = cand;
        best_state = q;
        best_mask = mask;
      }
    }
  }
  if (best < 1) throw std::logic_error("no path found");

  // ---- reconstruct the chosen edge set
  std::vector<std::pair<u32, u32>> edges;
  edges.reserve(best);
  static constexpr int kOuter[3][2] = {{0, 1}, {1, 2}, {0, 2}};
  for (int j = 0; j < 3; ++j)
    if (best_mask >> j & 1)
      edges.push_back({static_cast<u32>(kOuter[j][0]), static_cast<u32>(kOuter[j][1])});
  if (root_internal) {
    std::vector<std::pair<u32, int>> stack{{0u, best_state}};
    while (!stack.empty()) {
      const auto [id, s] = stack.back();
      stack.pop_back();
      const u32 ch = choice[static_cast<std::size_t>(internal_idx[id]) * n3 + s];
      const u32 mask = ch & 7;
      const u32 v = t[t[id].first_child].tri[0];
      for (u32 j = 0; j < 3; ++j)
        if (mask >> j & 1) edges.push_back({v, t[id].tri[j]});
      for (u32 j = 0; j < 3; ++j) {
        const int cs = static_cast<int>(ch >> (3 + 6 * j)) & 63;
        const u32 child = t[id].first_child + j;
        if (!t[child].leaf())
          stack.push_back({child, cs});
      }
    }
  }

  // ---- walk the edge set into a vertex sequence
  std::map<u32, std::array<u32, 2>> nb;
  std::map<u32, int> deg;
  for (auto [u, v] : edges) {
    nb[u][deg[u]++] = v;
    nb[v][deg[v]++] = u;
  }
  u32 start = kNoNode;
  for (auto& [v, d] : deg)
    if (d == 1 && (start == kNoNode || v < start)) start = v;
  PathResult res;
  res.method = "interface-dp";
  res.vertices.reserve(edges.size() + 1);
  u32 prev = kNoNode, cur = start;
  for (std::size_t i = 0; i <= edges.size(); ++i) {
    res.vertices.push_back(cur);
    const auto& r = nb[cur];
    const u32 next = (deg[cur] > 0 && r[0] != prev) ? r[0]
                     : (deg[cur] > 1 ? r[1] : kNoNode);
    prev = cur;
    cur = next;
    if (cur == kNoNode) break;
  }
  if (res.vertices.size() != edges.size() + 1)
    throw std::logic_error("reconstructed edge set is not one path");
  return res;
}

// ------------------------------------------------------------- brute oracle

// Depth-first enumeration of all simple paths; exact but exponential, so the
// vertex count is capped.
inline PathResult longest_path_brute(const RanGraph& g) {
  if (g.n > 14) throw std::invalid_argument("brute force is limited to n <= 14");
  std::array<u32, 14> adj_bits{};
  for (u32 v = 0; v < g.n; ++v)
    for (u32 w : g.neighbors(v)) adj_bits[v] |= 1u << w;

  std::array<u32, 14> cur{}, best{};
  u32 best_len = 0;
  auto dfs = [&](auto&& self, u32 v, u32 visited, u32 len) -> void {
    cur[len - 1] = v;
    if (len > best_len) {
      best_len = len;
      best = cur;
    }
    for (u32 bits = adj_bits[v] & ~visited; bits;) {
      const u32 w = static_cast<u32>(std::countr_zero(bits));
      bits &= bits - 1;
      self(self, w, visited | (1u << w), len + 1);
    }
  };
  for (u32 v = 0; v < g.n; ++v) dfs(dfs, v, 1u << v, 1);

  PathResult res;
  res.method = "brute-force";
  res.vertices.assign(best.begin(), best.begin() + best_len);
  return res;
}

// -------------------------------------------------------- constructive path

// Path between two outer corners that avoids the third, built by recursing
// into the two heaviest subtriangles at every split and meeting at the split
// vertex. Guarantees at least m^(log 2 / log 3) edges over m faces.
inline PathResult constructive_boundary_path(const RanInstance& inst, u32 from,
                                             u32 to, u32 avoid) {
  const TriTree& t = inst.tree;
  const bool corners_ok =
      from < 3 && to < 3 && avoid < 3 && from != to && to != avoid && from != avoid;
  if (!corners_ok)
    throw std::invalid_argument("endpoints must be the three outer corners 0,1,2");
  const std::vector<u32> leafcnt = subtree_leaf_counts(t);

  PathResult res;
  res.method = "constructive";
  auto emit = [&](auto&& self, u32 node, u32 x, u32 y) -> void {
    // appends the path x..y inside `node`, excluding x itself
    const TriNode& nd = t[node];
    if (nd.leaf()) {
      res.vertices.push_back(y);
      return;
    }
    const u32 v = t[nd.first_child].tri[0];
    // children by the corner they replaced
    u32 cx = kNoNode, cy = kNoNode, cz = kNoNode;
    for (u32 j = 0; j < 3; ++j) {
      const u32 child = nd.first_child + j;
      if (nd.tri[j] == x)
        cx = child;
      else if (nd.tri[j] == y)
        cy = child;
      else
        cz = child;
    }
    // two heaviest children host the two halves; ties fall to the lower id
    u32 a = cx, b = cy;
    if (leafcnt[b] > leafcnt[a] || (leafcnt[b] == leafcnt[a] && b < a)) std::swap(a, b);
    auto better = [&](u32 cand) {
      if (leafcnt[cand] > leafcnt[a] || (leafcnt[cand] == leafcnt[a] && cand < a)) {
        b = a;
        a = cand;
      } else if (leafcnt[cand] > leafcnt[b] || (leafcnt[cand] == leafcnt[b] && cand < b)) {
        b = cand;
      }
    };
    better(cz);
    // the child missing x hosts the y side; the child missing y hosts the x
    // side; cz contains both corners and takes whichever side is left
    u32 host_x, host_y;
    if (a == cx || b == cx) {
      host_y = cx;
      host_x = a == cx ? b : a;
    } else {
      host_x = cy;
      host_y = cz;
    }
    const u32 first = host_x, second = host_y;
    self(self, first, x, v);
    self(self, second, v, y);
  };
  res.vertices.push_back(from);
  emit(emit, 0, from, to);
  return res;
}

// Guaranteed lower bound for the constructive path over m faces.
inline double constructive_bound(u64 m) {
  return std::pow(static_cast<double>(m), std::log(2.0) / std::log(3.0));
}

// --------------------------------------------------- grandchild obstruction

struct ObstructionReport {
  u64 checked = 0;                            // nodes with all nine grandchildren
  std::vector<u32> violations;                // nodes whose grandchildren are all hit
  std::vector<std::pair<u32, u32>> witnesses; // (node, grandchild index 0..8)
  bool ok() const { return violations.empty(); }
};

// Any simple path must leave the strict interior of at least one of the nine
// grandchild triangles of every twice-fully-split node untouched.
inline ObstructionReport check_grandchild_obstruction(const RanInstance& inst,
                                                      const std::vector<u32>& path) {
  const TriTree& t = inst.tree;
  // vertex -> node it split
  std::vector<u32> origin(inst.graph.n, kNoNode);
  for (u32 id = 0; id < t.size(); ++id)
    if (!t[id].leaf()) origin[t[t[id].first_child].tri[0]] = id;

  std::vector<u32> hits(t.size(), 0);
  for (u32 v : path) {
    if (v >= inst.graph.n) throw std::invalid_argument("path vertex out of range");
    for (u32 node = origin[v]; node != kNoNode; node = t[node].parent) ++hits[node];
  }

  ObstructionReport rep;
  for (u32 id = 0; id < t.size(); ++id) {
    const TriNode& nd = t[id];
    if (nd.leaf()) continue;
    bool complete = true;
    for (u32 j = 0; j < 3 && complete; ++j)
      complete = !t[nd.first_child + j].leaf();
    if (!complete) continue;
    ++rep.checked;
    u32 witness = kNoNode;
    for (u32 j = 0; j < 3 && witness == kNoNode; ++j) {
      const TriNode& c = t[nd.first_child + j];
      for (u32 i = 0; i < 3; ++i)
        if (hits[c.first_child + i] == 0) {
          witness = 3 * j + i;
          break;
        }
    }
    if (witness == kNoNode)
      rep.violations.push_back(id);
    else
      rep.witnesses.push_back({id, witness});
  }
  return rep;
}

// ------------------------------------------------------------- trend helper

struct LmTrendRow {
  u32 n = 0;
  u64 trial = 0;
  u32 length_vertices = 0;
  double ratio = 0.0;  // length / n
};

inline std::vector<LmTrendRow> lm_trend(const std::vector<u32>& n_grid, u64 trials,
                                        u64 seed, unsigned threads = 1) {
  std::vector<LmTrendRow> rows;
  rows.reserve(n_grid.size() * trials);
  for (u32 n : n_grid) {
    std::vector<LmTrendRow> part = run_trials<LmTrendRow>(trials, threads, [&](u64 tr) {
      const RanInstance inst = generate_ran(n, seed + tr);
      const PathResult p = longest_path_exact(inst);
      return LmTrendRow{n, tr, p.length_vertices(),
                        static_cast<double>(p.length_vertices()) / n};
    });
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace ran
