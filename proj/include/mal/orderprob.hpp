#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "mal/dist.hpp"
#include "mal/quadrature.hpp"

namespace mal {

/// n observers, m of which receive t1 first; omega_s = send(t2) - send(t1).
struct OrderScenario {
  int n;
  int m;
  double omega_s;
  PropagationDistribution dist;
};

struct UniformPrior {
  double lo_s;
  double hi_s;
};

/// Density ∝ exp(-|ω|/scale_s) on [-range_s, range_s].
struct TruncatedDoubleExponential {
  double scale_s;
  double range_s;
};

using OmegaPrior = std::variant<UniformPrior, TruncatedDoubleExponential>;

void validate(const OmegaPrior& prior);
double prior_density(const OmegaPrior& prior, double omega_s);
std::pair<double, double> prior_support(const OmegaPrior& prior);

/// Probability that a single observer receives t1 before t2 when t2 is sent
/// omega_s after t1: ∫ F(ω + ι) f(ι) dι.
double prob_before(const PropagationDistribution& dist, double omega_s, const QuadratureConfig& cfg = {});

/// C(n,m) p^m (1-p)^(n-m) with 0^0 = 1.
double binomial_pmf(int n, int m, double p);

/// Probability that exactly m of n observers receive t1 first.
double q_exact(const OrderScenario& s, const QuadratureConfig& cfg = {});

/// Probability that at least m of n observers receive t1 first.
double q_at_least(const PropagationDistribution& dist, int n, int m, double omega_s, const QuadratureConfig& cfg = {});

/// All of q_exact(n, 0..n, ω) from a single quadrature.
std::vector<double> agreement_distribution(const PropagationDistribution& dist, int n, double omega_s,
                                           const QuadratureConfig& cfg = {});

/// Posterior probability that t1 was sent first (ω > 0) given that exactly m
/// of n observers received it first, under `prior` on ω.
double p_sent_before(const PropagationDistribution& dist, int n, int m, const OmegaPrior& prior,
                     const QuadratureConfig& cfg = {});

/// p_sent_before for m = 0..n, sharing the inner quadratures across m.
std::vector<double> posterior_by_m(const PropagationDistribution& dist, int n, const OmegaPrior& prior,
                                   const QuadratureConfig& cfg = {});

/// (1 - F(τ_C))^n: probability that t reaches none of the n observers within τ_C.
double cross_block_prob(const PropagationDistribution& dist, int n, double tau_c_s, const QuadratureConfig& cfg = {});

}  // namespace mal
