#pragma once

// Two-color reinforcement urn and its limit law, plus the experiments that
// tie the urn to face counts in the growing triangulation: the number of
// faces inside one child of a split triangle evolves exactly like the white
// total of a (1,2,2) urn, and the normalized white fraction converges to a
// Beta(w0/s, b0/s) limit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "ran/core.hpp"
#include "ran/rng.hpp"

namespace ran {

struct UrnState {
  u64 w0 = 0, b0 = 0, s = 0;
  u64 draws = 0;
  u64 white = 0, black = 0;
  std::vector<u64> trajectory;  // white after each draw, when recorded

  double white_fraction() const {
    return static_cast<double>(white) / static_cast<double>(white + black);
  }
};

// One generator draw per step, reduced to [0, total) by multiply-shift; the
// drawn color gains s units.
inline UrnState urn_simulate(u64 w0, u64 b0, u64 s, u64 draws, u64 seed,
                             bool record_trajectory = false) {
  if (w0 + b0 == 0) throw std::invalid_argument("urn needs positive total weight");
  const u64 final_total = w0 + b0 + draws * s;
  if (final_total > 0xffffffffull)
    throw std::invalid_argument("urn total exceeds the 32-bit draw range");
  UrnState u;
  u.w0 = w0;
  u.b0 = b0;
  u.s = s;
  u.draws = draws;
  u.white = w0;
  u.black = b0;
  if (record_trajectory) u.trajectory.reserve(draws);
  std::mt19937_64 rng(seed);
  for (u64 i = 0; i < draws; ++i) {
    const u32 total = static_cast<u32>(u.white + u.black);
    if (bounded(rng(), total) < u.white)
      u.white += s;
    else
      u.black += s;
    if (record_trajectory) u.trajectory.push_back(u.white);
  }
  return u;
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16, kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(p, q); absolute error well under 1e-10.
// The continued fraction is applied on whichever side of the symmetry point
// converges fast.
inline double beta_cdf(double x, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("beta requires p, q > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(p + q) - std::lgamma(p) - std::lgamma(q) +
                       p * std::log(x) + q * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (p + 1.0) / (p + q + 2.0))
    return bt * detail::betacf(p, q, x) / p;
  return 1.0 - bt * detail::betacf(q, p, 1.0 - x) / q;
}

// Kolmogorov-Smirnov distance between an empirical sample and a CDF.
template <class Cdf>
inline double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  return d;
}

// Distribution-free one-sample critical value sqrt(log(2/alpha) / (2n)).
inline double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

// Two-sample chi-square statistic over aligned count bins; empty joint bins
// are dropped. Degrees of freedom = occupied bins - 1.
struct ChiSquare {
  double stat = 0.0;
  u32 df = 0;
};

inline ChiSquare chi_square_two_sample(const std::vector<u64>& k1,
                                       const std::vector<u64>& k2) {
  if (k1.size() != k2.size()) throw std::invalid_argument("bin counts differ");
  double n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    n1 += static_cast<double>(k1[i]);
    n2 += static_cast<double>(k2[i]);
  }
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("empty sample");
  const double s1 = std::sqrt(n2 / n1), s2 = std::sqrt(n1 / n2);
  ChiSquare out;
  for (std::size_t i = 0; i < k1.size(); ++i) {
    const double a = static_cast<double>(k1[i]), b = static_cast<double>(k2[i]);
    if (a + b == 0) continue;
    const double diff = s1 * a - s2 * b;
    out.stat += diff * diff / (a + b);
    ++out.df;
  }
  if (out.df > 0) --out.df;
  return out;
}

// ------------------------------------------------------- split experiments

// For one generated instance: the three leaf counts under the root children
// and, where all children are split, the nine grandchild leaf counts.
struct RootSplit {
  std::array<u64, 3> child{};       // faces inside each root child
  bool complete = false;            // all nine grandchildren exist
  std::array<u64, 9> grandchild{};  // leaf counts, row-major by child
};

inline RootSplit root_split_counts(const TriTree& t) {
  RootSplit rs;
  if (t.size() < 4 || t[0].leaf()) throw std::invalid_argument("root was never split");
  const std::vector<u32> cnt = subtree_leaf_counts(t);
  rs.complete = true;
  for (u32 j = 0; j < 3; ++j) {
    const u32 child = t[0].first_child + j;
    rs.child[j] = cnt[child];
    if (t[child].leaf()) {
      rs.complete = false;
      continue;
    }
    for (u32 i = 0; i < 3; ++i)
      rs.grandchild[3 * j + i] = cnt[t[child].first_child + i];
  }
  return rs;
}

struct FaceSplitRow {
  u64 m = 0;
  double eps = 0.0;
  u64 trials = 0;
  u64 complete = 0;     // trials whose nine grandchildren all exist
  double empirical_p = 0.0;  // P(min grandchild count <= eps*m), among complete
  double bound = 0.0;        // 13 * eps^(1/4)
  double ks_child = 0.0;     // KS of child-0 fraction against Beta(1/2, 1)
};

// Per-trial seed is seed + trial index, so rows are reproducible and
// independent of evaluation order.
inline FaceSplitRow face_split_experiment(u64 m, double eps, u64 trials, u64 seed) {
  if (m < 9 || m % 2 == 0)
    throw std::invalid_argument("face count must be odd and at least 9");
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  const u32 n = static_cast<u32>((m + 5) / 2);
  FaceSplitRow row;
  row.m = m;
  row.eps = eps;
  row.trials = trials;
  row.bound = 13.0 * std::pow(eps, 0.25);
  std::vector<double> child_fracs;
  child_fracs.reserve(trials);
  u64 hits = 0;
  for (u64 tr = 0; tr < trials; ++tr) {
    const RanInstance inst = generate_ran(n, seed + tr);
    const RootSplit rs = root_split_counts(inst.tree);
    child_fracs.push_back(static_cast<double>(rs.child[0]) /
                          static_cast<double>(m));
    if (!rs.complete) continue;
    ++row.complete;
    u64 zmin = rs.grandchild[0];
    for (u64 z : rs.grandchild) zmin = std::min(zmin, z);
    if (static_cast<double>(zmin) <= eps * static_cast<double>(m)) ++hits;
  }
  if (row.complete > 0)
    row.empirical_p = static_cast<double>(hits) / static_cast<double>(row.complete);
  row.ks_child = ks_distance(std::move(child_fracs),
                             [](double x) { return beta_cdf(x, 0.5, 1.0); });
  return row;
}

// Ratios X2/(m - X1) over trials where X1/m lands within `window` of
// `center`; the conditional law drifts toward Beta(1/2, 1/2) as m grows.
inline std::vector<double> conditional_split_samples(u64 m, double center,
                                                     double window, u64 trials,
                                                     u64 seed) {
  if (m < 9 || m % 2 == 0)
    throw std::invalid_argument("face count must be odd and at least 9");
  const u32 n = static_cast<u32>((m + 5) / 2);
  std::vector<double> out;
  for (u64 tr = 0; tr < trials; ++tr) {
    const RanInstance inst = generate_ran(n, seed + tr);
    const RootSplit rs = root_split_counts(inst.tree);
    const double x1 = static_cast<double>(rs.child[0]) / static_cast<double>(m);
    if (std::abs(x1 - center) > window) continue;
    out.push_back(static_cast<double>(rs.child[1]) /
                  static_cast<double>(m - rs.child[0]));
  }
  return out;
}

}  // namespace ran
