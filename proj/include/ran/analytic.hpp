#pragma once

// Growth-rate constants. Everything funnels through one scalar equation
// shape: for a generating function f, let
//     Wf(x) = x(x-1) f'(x)/f(x) - log f(x).
// The root of Wf in (0.1, 0.2) turns into a linear growth rate via
// rate = (1 - 1/root) / log f(root). The full series h is handled in closed
// form; its truncations come in two families that sandwich h and whose rates
// converge to the same constant from both sides.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ran/quadrature.hpp"

namespace ran {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// ---------------------------------------------------------------- bisection

struct BisectResult {
  double root = 0.0;
  double lo = 0.0, hi = 0.0;
  int iterations = 0;
};

// Bracketing bisection on [lo, hi] down to bracket width <= tol. Verifies the
// sign change at runtime and that every iteration shrinks the bracket.
template <class F>
inline BisectResult bisect(F&& f, double lo, double hi, double tol = 1e-10) {
  if (!(lo < hi)) throw std::invalid_argument("empty bracket");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, lo, lo, 0};
  if (fhi == 0.0) return {hi, hi, hi, 0};
  if ((flo < 0) == (fhi < 0))
    throw std::domain_error("no sign change over the bracket");
  BisectResult r;
  while (hi - lo > tol) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    if (mid <= lo || mid >= hi) break;  // hit double resolution
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      ++r.iterations;
      break;
    }
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    ++r.iterations;
    if (!(hi - lo < width))
      throw std::logic_error("bisection made no progress");
  }
  r.lo = lo;
  r.hi = hi;
  r.root = lo + 0.5 * (hi - lo);
  return r;
}

// ------------------------------------------------------------ h and W forms

// h(x) = 12x^3/(1-2x) - 6x^3/(1-x), positive on (0, 1/2)
inline double h_eval(double x) {
  if (!(x > 0.0) || !(x < 0.5)) throw std::domain_error("h requires 0 < x < 1/2");
  if (std::abs(1.0 - 2.0 * x) < 1e-9) throw std::domain_error("too close to the x=1/2 pole");
  const double x3 = x * x * x;
  return 12.0 * x3 / (1.0 - 2.0 * x) - 6.0 * x3 / (1.0 - x);
}

inline double h_deriv(double x) {
  if (!(x > 0.0) || !(x < 0.5)) throw std::domain_error("h requires 0 < x < 1/2");
  if (std::abs(1.0 - 2.0 * x) < 1e-9) throw std::domain_error("too close to the x=1/2 pole");
  const double x2 = x * x, x3 = x2 * x;
  const double a = 1.0 - 2.0 * x, b = 1.0 - x;
  return (36.0 * x2 - 48.0 * x3) / (a * a) - (18.0 * x2 - 12.0 * x3) / (b * b);
}

// Wf(x) = x(x-1) f'/f - log f for f > 0
inline double W_of(double f, double fprime, double x) {
  if (!(f > 0.0)) throw std::domain_error("W requires a positive function value");
  return x * (x - 1.0) * fprime / f - std::log(f);
}

inline double Wh(double x) { return W_of(h_eval(x), h_deriv(x), x); }

// d/dx [x(x-1) h'(x)/h(x)] in closed form; the log term of Wh contributes
// -h'/h on top of this.
inline double wh_inner_derivative(double x) {
  const double a = 1.0 - 2.0 * x;
  return 4.0 * x * (x - 1.0) / (a * a);
}

// Root of Wh in (0.1, 0.2). Wh is strictly decreasing there, positive at 0.1
// and negative at 0.2.
inline BisectResult solve_xhat(double tol = 1e-10) {
  return bisect([](double x) { return Wh(x); }, 0.1, 0.2, tol);
}

inline double rate_from_root(double x, double fx) {
  return (1.0 - 1.0 / x) / std::log(fx);
}

// Linear diameter growth coefficient: (1 - 1/xhat) / log h(xhat)
inline double constant_c(double tol = 1e-10) {
  const double xhat = solve_xhat(tol).root;
  return rate_from_root(xhat, h_eval(xhat));
}

// ------------------------------------------------- series coefficient family

// Per-depth node counts in the deterministic type recursion: a_i type-1
// nodes, b_i type-2 chains, c_i type-3 nodes at depth i >= 2. Closed forms
// a_i = 3*2^(i-1) - 6, b_i = 3, c_i = 3*2^i - 6 satisfy
// a_i = c_{i-1}, b_i = b_{i-1}, c_i = 2 b_{i-1} + 2 c_{i-1}.
struct AbcRow {
  u64 a, b, c;
};

inline AbcRow sequence_abc(u32 i) {
  if (i < 2 || i > 61) throw std::invalid_argument("sequence index must be in [2, 61]");
  const u64 p = 1ull << (i - 1);  // 2^(i-1)
  return AbcRow{3 * p - 6, 3, 6 * p - 6};
}

enum class Family { lower, upper };

inline u32 max_series_k() { return 60; }  // upper-family b_k fits u64 up to here

namespace detail {
inline void check_k(u32 k) {
  if (k < 3 || k > max_series_k())
    throw std::invalid_argument("series order k must be in [3, 60]");
}
}  // namespace detail

// lower: sum_{i=3..k} a_i x^i         (drops the tail of h)
// upper: sum_{i=3..k-1} a_i x^i + (a_k + 3 b_k + 4 c_k) x^k
//        (folds the tail into a boosted top coefficient)
inline double series_coeff(Family fam, u32 k, u32 i) {
  const AbcRow r = sequence_abc(i);
  if (fam == Family::upper && i == k)
    return static_cast<double>(r.a + 3 * r.b + 4 * r.c);
  return static_cast<double>(r.a);
}

inline double g_eval(Family fam, u32 k, double x) {
  detail::check_k(k);
  double acc = 0.0;
  for (u32 i = k; i >= 3; --i) acc = acc * x + series_coeff(fam, k, i);
  return acc * x * x * x;
}

inline double g_deriv(Family fam, u32 k, double x) {
  detail::check_k(k);
  double acc = 0.0;
  for (u32 i = k; i >= 3; --i) acc = acc * x + static_cast<double>(i) * series_coeff(fam, k, i);
  return acc * x * x;
}

// Exact integer coefficient mass b_k = g(1). Fits u64 for k <= 60.
inline u64 b_of(Family fam, u32 k) {
  detail::check_k(k);
  u64 acc = 0;
  for (u32 i = 3; i <= k; ++i) {
    const AbcRow r = sequence_abc(i);
    acc += (fam == Family::upper && i == k) ? r.a + 3 * r.b + 4 * r.c : r.a;
  }
  return acc;
}

inline double Wg(Family fam, u32 k, double x) {
  return W_of(g_eval(fam, k, x), g_deriv(fam, k, x), x);
}

struct KThresholdError : std::domain_error {
  u32 smallest_usable;
  KThresholdError(u32 k, u32 usable)
      : std::domain_error("no sign change of Wg over [0.1, 0.2] at k=" +
                          std::to_string(k) + "; smallest usable k is " +
                          std::to_string(usable)),
        smallest_usable(usable) {}
};

// Smallest k whose Wg changes sign over [0.1, 0.2]; found by scanning, never
// hardcoded.
inline u32 min_usable_k(Family fam) {
  for (u32 k = 3; k <= max_series_k(); ++k)
    if (Wg(fam, k, 0.1) > 0.0 && Wg(fam, k, 0.2) < 0.0) return k;
  throw std::domain_error("no usable series order up to 60");
}

struct RhoResult {
  u32 k = 0;
  double x_k = 0.0;    // root of Wg in (0.1, 0.2)
  double rho = 0.0;    // (1 - 1/x_k) / log g(x_k)
  double stationarity_residual = 0.0;  // |x^2 g'/g - 1/rho|
};

inline RhoResult rho_k(Family fam, u32 k, double tol = 1e-10) {
  detail::check_k(k);
  if (!(Wg(fam, k, 0.1) > 0.0 && Wg(fam, k, 0.2) < 0.0))
    throw KThresholdError(k, min_usable_k(fam));
  RhoResult r;
  r.k = k;
  r.x_k = bisect([&](double x) { return Wg(fam, k, x); }, 0.1, 0.2, tol).root;
  r.rho = rate_from_root(r.x_k, g_eval(fam, k, r.x_k));
  r.stationarity_residual =
      std::abs(r.x_k * r.x_k * g_deriv(fam, k, r.x_k) / g_eval(fam, k, r.x_k) -
               1.0 / r.rho);
  return r;
}

// --------------------------------------------- depth-mixture moment route

// E[exp(lambda E_k)] where E_k is the depth mixture: depth i with weight
// coeff_i / b_k, and a depth-i draw is a sum of i unit-mean exponentials,
// so its factor is (1-lambda)^(-i). Requires lambda < 1.
inline double mgf_mixture(Family fam, u32 k, double lambda) {
  detail::check_k(k);
  if (!(lambda < 1.0)) throw std::domain_error("mgf requires lambda < 1");
  const double y = 1.0 / (1.0 - lambda);
  const double b = static_cast<double>(b_of(fam, k));
  double acc = 0.0;
  for (u32 i = 3; i <= k; ++i)
    acc += series_coeff(fam, k, i) * std::pow(y, static_cast<double>(i));
  return acc / b;
}

// sup over lambda <= 0 of lambda/rho - log mgf(lambda), by golden-section
// search (the objective is concave in lambda).
inline double tail_rate_objective(Family fam, u32 k, double rho) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -80.0, hi = 0.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  auto phi = [&](double lam) { return lam / rho - std::log(mgf_mixture(fam, k, lam)); };
  double f1 = phi(x1), f2 = phi(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = phi(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = phi(x1);
    }
  }
  return phi(0.5 * (lo + hi));
}

// Second route to the same rate: the rho at which the optimized exponential
// tail bound exactly balances the coefficient mass, i.e.
// sup_{lambda<=0} [lambda/rho - log mgf(lambda)] = log b_k.
inline double rho_via_tail_rate(Family fam, u32 k, double tol = 1e-9) {
  detail::check_k(k);
  const double target = std::log(static_cast<double>(b_of(fam, k)));
  auto f = [&](double rho) { return tail_rate_objective(fam, k, rho) - target; };
  return bisect(f, 0.05, 20.0, tol).root;
}

// ------------------------------------------------------------ side constants

// Root of 2 psi log(3e/(2 psi)) = 1; unique in (0, 3), lies left of the
// interior maximum at 3/2.
inline double psi_constant(double tol = 1e-10) {
  auto f = [](double p) {
    return 2.0 * p * std::log(3.0 * std::numbers::e / (2.0 * p)) - 1.0;
  };
  return bisect(f, 1e-9, 1.5, tol).root;
}

inline double eta1_constant() { return 6.0 / 11.0; }

// Unique solution greater than 1 of exp(1/x) = 3e/x; the difference is
// strictly increasing for x > 1.
inline double eta2_constant(double tol = 1e-10) {
  auto f = [](double x) {
    return std::exp(1.0 / x) - 3.0 * std::numbers::e / x;
  };
  return bisect(f, 1.0 + 1e-9, 100.0, tol).root;
}

// --------------------------------------------------------- exponent integral

// I(zeta) = int_{t=1/3}^{1} int_{s=1/2}^{min(1, t/(1-t))}
//              [t^zeta + (s(1-t))^zeta] f1(t) f2(s) ds dt
// with f1(x) = x^(-1/2)/2 and f2(x) = x^(-1/2)(1-x)^(-1/2)/pi. The square
// root singularity of f2 at s=1 is removed by s = sin^2(theta), under which
// f2(s) ds = (2/pi) d(theta). The outer integrand has a kink where the upper
// s-limit saturates at 1 (t = 1/2), so the t-range is split there.
inline double zeta_integral(double zeta, double abs_tol = 1e-6) {
  if (!(zeta >= 0.0)) throw std::domain_error("zeta must be nonnegative");
  const double pi = std::numbers::pi;
  auto inner = [&](double t) {
    const double u = t < 0.5 ? t / (1.0 - t) : 1.0;
    const double th_lo = pi / 4.0;  // s = 1/2
    const double th_hi = std::asin(std::sqrt(u));
    const double one_m_t = 1.0 - t;
    const double tpow = std::pow(t, zeta);
    auto g = [&](double th) {
      const double s = std::sin(th);
      return tpow + std::pow(s * s * one_m_t, zeta);
    };
    return (2.0 / pi) * integrate(g, th_lo, th_hi, abs_tol * 0.01);
  };
  auto outer = [&](double t) { return 0.5 / std::sqrt(t) * inner(t); };
  return integrate(outer, 1.0 / 3.0, 0.5, abs_tol * 0.25) +
         integrate(outer, 0.5, 1.0, abs_tol * 0.25);
}

// ----------------------------------------------------------------- context

struct RhoEntry {
  u32 k = 0;
  double x_lower = 0.0, rho_lower = 0.0;
  double x_upper = 0.0, rho_upper = 0.0;
  u64 b_lower = 0, b_upper = 0;
};

struct AnalyticContext {
  double tol = 1e-10;
  double xhat = 0.0;
  double c = 0.0;
  double wh_at_01 = 0.0, wh_at_02 = 0.0;
  double psi = 0.0, eta1 = 0.0, eta2 = 0.0;
  double zeta_exponent = 0.88, zeta_value = 0.0;
  u32 k_min_lower = 0, k_min_upper = 0;
  std::vector<RhoEntry> rho_table;  // k from max(k_min_lower, k_min_upper) to 60
};

inline AnalyticContext build_analytic_context(double tol = 1e-10) {
  AnalyticContext ctx;
  ctx.tol = tol;
  ctx.xhat = solve_xhat(tol).root;
  ctx.c = rate_from_root(ctx.xhat, h_eval(ctx.xhat));
  ctx.wh_at_01 = Wh(0.1);
  ctx.wh_at_02 = Wh(0.2);
  ctx.psi = psi_constant(tol);
  ctx.eta1 = eta1_constant();
  ctx.eta2 = eta2_constant(tol);
  ctx.zeta_value = zeta_integral(ctx.zeta_exponent);
  ctx.k_min_lower = min_usable_k(Family::lower);
  ctx.k_min_upper = min_usable_k(Family::upper);
  for (u32 k = std::max(ctx.k_min_lower, ctx.k_min_upper); k <= max_series_k(); ++k) {
    RhoEntry e;
    e.k = k;
    const RhoResult lo = rho_k(Family::lower, k, tol);
    const RhoResult up = rho_k(Family::upper, k, tol);
    e.x_lower = lo.x_k;
    e.rho_lower = lo.rho;
    e.x_upper = up.x_k;
    e.rho_upper = up.rho;
    e.b_lower = b_of(Family::lower, k);
    e.b_upper = b_of(Family::upper, k);
    ctx.rho_table.push_back(e);
  }
  return ctx;
}

}  // namespace ran
