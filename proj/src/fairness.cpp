#include "mal/fairness.hpp"

#include <cmath>

#include "mal/error.hpp"

namespace mal {
namespace {

// Snap values within 1e-9 of an integer so products like 16 * 0.25 do not
// land on the wrong side of the strict inequality.
double snap(double x) {
  const double r = std::round(x);
  return std::fabs(x - r) <= 1e-9 ? r : x;
}

void check_gamma(double gamma) {
  if (!(gamma > 0.5 && gamma <= 1.0)) throw DomainError("gamma must satisfy 1/2 < gamma <= 1");
}

}  // namespace

FaultBound themis_fault_bound(int n, double gamma) {
  if (n < 1) throw DomainError("n must be >= 1");
  check_gamma(gamma);
  const double frac = (2.0 * gamma - 1.0) / (2.0 * (gamma + 1.0));
  const double limit = snap(static_cast<double>(n) * frac);
  return {static_cast<int>(std::ceil(limit)) - 1, frac};
}

int traditional_bound(int n) {
  if (n < 1) throw DomainError("n must be >= 1");
  return (n - 1) / 3;
}

int gamma_threshold(int n, double gamma) {
  check_gamma(gamma);
  return static_cast<int>(std::ceil(snap(gamma * static_cast<double>(n))));
}

double coverage_at_gamma(const COrderReport& report, double gamma) {
  const int n = report.n();
  if (n < 1) throw DomainError("coverage_at_gamma: empty report");
  const int m = gamma_threshold(n, gamma);
  return report.frac_x_ge_m[static_cast<std::size_t>(m - 1)];
}

FairnessAssessment assess_fairness(const COrderReport& report, double gamma) {
  const auto bound = themis_fault_bound(report.n(), gamma);
  return {gamma, report.n(), bound.f_max, bound.f_frac, coverage_at_gamma(report, gamma)};
}

}  // namespace mal
