#include "mal/orderprob.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mal/error.hpp"

namespace mal {
namespace {

void check_counts(int n, int m) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (m < 0 || m > n) throw DomainError("m must lie in [0, n]");
}

double binomial_coefficient(int n, int k) {
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Unnormalised likelihood of "exactly m of n" at ω; the binomial coefficient
// cancels in the posterior quotient.
double likelihood(int n, int m, double p) {
  return std::pow(p, m) * std::pow(1.0 - p, n - m);
}

// Composite Simpson with a fixed panel count, used to set an absolute
// tolerance scale for the adaptive pass.
template <class F>
double coarse_simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

void validate(const OmegaPrior& prior) {
  if (const auto* u = std::get_if<UniformPrior>(&prior)) {
    if (!std::isfinite(u->lo_s) || !std::isfinite(u->hi_s) || !(u->lo_s < u->hi_s))
      throw DomainError("uniform prior: need finite lo < hi");
    return;
  }
  const auto& e = std::get<TruncatedDoubleExponential>(prior);
  if (!(e.scale_s > 0.0) || !(e.range_s > 0.0) || !std::isfinite(e.scale_s) || !std::isfinite(e.range_s))
    throw DomainError("double-exponential prior: scale and range must be finite and > 0");
}

double prior_density(const OmegaPrior& prior, double omega) {
  if (const auto* u = std::get_if<UniformPrior>(&prior)) {
    return (omega >= u->lo_s && omega <= u->hi_s) ? 1.0 / (u->hi_s - u->lo_s) : 0.0;
  }
  const auto& e = std::get<TruncatedDoubleExponential>(prior);
  if (std::fabs(omega) > e.range_s) return 0.0;
  const double norm = 2.0 * e.scale_s * (-std::expm1(-e.range_s / e.scale_s));
  return std::exp(-std::fabs(omega) / e.scale_s) / norm;
}

std::pair<double, double> prior_support(const OmegaPrior& prior) {
  if (const auto* u = std::get_if<UniformPrior>(&prior)) return {u->lo_s, u->hi_s};
  const auto& e = std::get<TruncatedDoubleExponential>(prior);
  return {-e.range_s, e.range_s};
}

double prob_before(const PropagationDistribution& dist, double omega, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(omega)) throw DomainError("prob_before: omega must be finite");
  // Substitute u = F(ι): ∫ F(ω + ι) f(ι) dι = ∫_0^1 F(ω + Q(u)) du, truncated
  // to [eps, 1 - eps]; each cut tail is added back with a midpoint estimate.
  const double eps = cfg.truncation_eps;
  auto integrand = [&](double u) { return detail::cdf_any(dist, omega + detail::quantile_unchecked(dist, u)); };
  const double body = adaptive_simpson(integrand, eps, 1.0 - eps, cfg.rel_tol, cfg.max_subdivisions);
  const double tails = eps * (integrand(0.5 * eps) + integrand(1.0 - 0.5 * eps));
  return std::clamp(body + tails, 0.0, 1.0);
}

double binomial_pmf(int n, int m, double p) {
  check_counts(n, m);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_pmf: p outside [0,1]");
  if (p == 0.0) return m == 0 ? 1.0 : 0.0;
  if (p == 1.0) return m == n ? 1.0 : 0.0;
  if (n <= 1000) return binomial_coefficient(n, m) * std::pow(p, m) * std::pow(1.0 - p, n - m);
  const double log_c = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
  return std::exp(log_c + m * std::log(p) + (n - m) * std::log1p(-p));
}

double q_exact(const OrderScenario& s, const QuadratureConfig& cfg) {
  check_counts(s.n, s.m);
  return binomial_pmf(s.n, s.m, prob_before(s.dist, s.omega_s, cfg));
}

std::vector<double> agreement_distribution(const PropagationDistribution& dist, int n, double omega,
                                           const QuadratureConfig& cfg) {
  check_counts(n, 0);
  const double p = prob_before(dist, omega, cfg);
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) out[static_cast<std::size_t>(m)] = binomial_pmf(n, m, p);
  return out;
}

double q_at_least(const PropagationDistribution& dist, int n, int m, double omega, const QuadratureConfig& cfg) {
  check_counts(n, m);
  if (m == 0) return 1.0;
  const auto q = agreement_distribution(dist, n, omega, cfg);
  double acc = 0.0;
  // summed from the small tail so the cumulative stays accurate near 1
  for (int k = n; k >= m; --k) acc += q[static_cast<std::size_t>(k)];
  return std::min(acc, 1.0);
}

namespace {

// p(ω) memoised on the exact abscissa. Adaptive passes for different m bisect
// the same initial grid, so most abscissae repeat across the posterior column.
class OmegaCurve {
 public:
  OmegaCurve(const PropagationDistribution& dist, const QuadratureConfig& cfg) : dist_(dist), cfg_(cfg) {}

  double operator()(double omega) {
    auto [it, inserted] = memo_.try_emplace(omega, 0.0);
    if (inserted) it->second = prob_before(dist_, omega, cfg_);
    return it->second;
  }

 private:
  const PropagationDistribution& dist_;
  QuadratureConfig cfg_;
  std::unordered_map<double, double> memo_;
};

double posterior(OmegaCurve& curve, int n, int m, const OmegaPrior& prior, const QuadratureConfig& cfg) {
  auto weighted = [&](double omega) {
    const double density = prior_density(prior, omega);
    if (density == 0.0) return 0.0;
    return likelihood(n, m, curve(omega)) * density;
  };
  const auto [lo, hi] = prior_support(prior);
  // A prior on one side of zero decides the answer whatever the likelihood.
  if (lo >= 0.0) return 1.0;
  if (hi <= 0.0) return 0.0;
  auto integrate = [&](double a, double b) {
    if (!(b > a)) return 0.0;
    const double scale = std::fabs(coarse_simpson(weighted, a, b, 64));
    if (scale == 0.0) return 0.0;
    return adaptive_simpson(weighted, a, b, cfg.rel_tol * scale, cfg.max_subdivisions, 32);
  };
  const double after = integrate(std::max(lo, 0.0), hi);
  const double before = integrate(lo, std::min(hi, 0.0));
  const double evidence = after + before;
  if (!(evidence > 0.0)) throw DomainError("p_sent_before: prior assigns zero mass to the observed event");
  return std::clamp(after / evidence, 0.0, 1.0);
}

QuadratureConfig inner_config(const QuadratureConfig& cfg) {
  // outer:inner tolerance budget 10:1
  QuadratureConfig inner = cfg;
  inner.rel_tol = cfg.rel_tol / 10.0;
  return inner;
}

}  // namespace

double p_sent_before(const PropagationDistribution& dist, int n, int m, const OmegaPrior& prior,
                     const QuadratureConfig& cfg) {
  check_counts(n, m);
  validate(prior);
  cfg.validate();
  OmegaCurve curve(dist, inner_config(cfg));
  return posterior(curve, n, m, prior, cfg);
}

std::vector<double> posterior_by_m(const PropagationDistribution& dist, int n, const OmegaPrior& prior,
                                   const QuadratureConfig& cfg) {
  check_counts(n, 0);
  validate(prior);
  cfg.validate();
  OmegaCurve curve(dist, inner_config(cfg));
  std::vector<double> out;
  for (int m = 0; m <= n; ++m) out.push_back(posterior(curve, n, m, prior, cfg));
  return out;
}

double cross_block_prob(const PropagationDistribution& dist, int n, double tau_c_s, const QuadratureConfig&) {
  if (n < 1) throw DomainError("cross_block_prob: n must be >= 1");
  if (!(tau_c_s >= 0.0) || !std::isfinite(tau_c_s)) throw DomainError("cross_block_prob: tau_c must be finite and >= 0");
  return std::pow(1.0 - cdf(dist, tau_c_s), n);
}

}  // namespace mal
