#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mal/error.hpp"

namespace mal {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  /// Probability mass cut from each tail of the integration variable.
  double truncation_eps = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("QuadratureConfig: rel_tol must lie in (0,1)");
    if (!(truncation_eps > 0.0 && truncation_eps < 1e-3))
      throw DomainError("QuadratureConfig: truncation_eps must lie in (0,1e-3)");
    if (max_subdivisions == 0) throw DomainError("QuadratureConfig: max_subdivisions must be > 0");
  }
};

/// Adaptive Simpson with Richardson correction, absolute tolerance `tol`.
/// [a, b] is first cut into `initial_panels` equal panels so narrow features
/// are not missed by the first five-point estimate. Throws QuadratureError
/// once more than `max_subdivisions` panels have been split.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, std::size_t max_subdivisions,
                        std::size_t initial_panels = 32) {
  if (a == b) return 0.0;
  struct Panel {
    double a, b, fa, fm, fb, whole, tol;
    int depth;
  };
  constexpr int kMaxDepth = 60;
  std::vector<Panel> stack;
  const double h = (b - a) / static_cast<double>(initial_panels);
  double fa = f(a);
  for (std::size_t i = 0; i < initial_panels; ++i) {
    const double pa = a + h * static_cast<double>(i);
    const double pb = (i + 1 == initial_panels) ? b : a + h * static_cast<double>(i + 1);
    const double pm = 0.5 * (pa + pb);
    const double fm = f(pm);
    const double fb = f(pb);
    stack.push_back({pa, pb, fa, fm, fb, (pb - pa) / 6.0 * (fa + 4.0 * fm + fb),
                     tol / static_cast<double>(initial_panels), 0});
    fa = fb;
  }
  double total = 0.0;
  std::size_t splits = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (std::fabs(delta) <= 15.0 * p.tol || p.depth >= kMaxDepth) {
      total += left + right + delta / 15.0;
      continue;
    }
    if (++splits > max_subdivisions) {
      throw QuadratureError("adaptive Simpson did not converge within " + std::to_string(max_subdivisions) +
                            " subdivisions");
    }
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
  }
  return total;
}

}  // namespace mal
