#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature on an interval stack. The
// Kronrod extension reuses the 7 Gauss nodes, so each panel costs 15
// evaluations and yields both the estimate and an error gauge.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ran {

namespace detail {

inline constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussW[4] = {0.129484966168870, 0.279705391489277,
                                      0.381830050505119, 0.417959183673469};

template <class F>
inline void g7k15(F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double gauss = 0.0;
  kronrod = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double fx = i == 7 ? f(c) : f(c - h * kKronrodX[i]) + f(c + h * kKronrodX[i]);
    kronrod += kKronrodW[i] * fx;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * fx;
  }
  kronrod *= h;
  gauss *= h;
  err = std::abs(kronrod - gauss);
}

}  // namespace detail

template <class F>
inline double integrate(F f, double a, double b, double abs_tol,
                        std::size_t max_panels = 4000) {
  if (!(abs_tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (a == b) return 0.0;
  struct Panel {
    double a, b, value, err;
  };
  double value, err;
  detail::g7k15(f, a, b, value, err);
  if (!std::isfinite(value) || !std::isfinite(err))
    throw std::runtime_error("integrand produced a non-finite panel estimate");
  std::vector<Panel> panels{{a, b, value, err}};
  double total_err = err;
  std::size_t splits = 0;
  while (total_err > abs_tol) {
    if (++splits > max_panels)
      throw std::runtime_error("quadrature failed to reach tolerance");
    // split the worst panel
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    // a panel too narrow to split again will never meet the tolerance
    if (!(p.a < mid && mid < p.b))
      throw std::runtime_error("quadrature failed to reach tolerance");
    Panel left{p.a, mid, 0, 0}, right{mid, p.b, 0, 0};
    detail::g7k15(f, left.a, left.b, left.value, left.err);
    detail::g7k15(f, right.a, right.b, right.value, right.err);
    if (!std::isfinite(left.value + left.err + right.value + right.err))
      throw std::runtime_error("integrand produced a non-finite panel estimate");
    total_err += left.err + right.err - p.err;
    panels[worst] = left;
    panels.push_back(right);
  }
  double sum = 0.0;
  for (const Panel& p : panels) sum += p.value;
  return sum;
}

}  // namespace ran
