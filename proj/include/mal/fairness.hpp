#pragma once

#include "mal/ingest.hpp"

namespace mal {

struct FaultBound {
  int f_max;      // largest integer strictly below n * f_frac
  double f_frac;  // (2γ - 1) / (2(γ + 1))
};

/// Themis batch-order-fairness tolerance for 1/2 < γ ≤ 1.
FaultBound themis_fault_bound(int n, double gamma);

/// Largest integer f with f < n/3.
int traditional_bound(int n);

/// ⌈γ·n⌉, the observer threshold used for γ on an n-observer report.
int gamma_threshold(int n, double gamma);

/// Fraction of sampled pairs whose majority order is shared by ≥ ⌈γ·n⌉ observers.
double coverage_at_gamma(const COrderReport& report, double gamma);

struct FairnessAssessment {
  double gamma;
  int n;
  int f_max;
  double f_frac;
  double coverage;
};

FairnessAssessment assess_fairness(const COrderReport& report, double gamma);

}  // namespace mal
