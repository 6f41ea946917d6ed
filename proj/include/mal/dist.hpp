#pragma once

#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "mal/rng.hpp"

namespace mal {

/// Log-normal propagation delay. `sigma_sq` is the variance of ln(delay),
/// i.e. the parameters of the underlying normal: LN(1.973, 0.585) has median
/// e^1.973 ≈ 7.19 s.
struct LogNormal {
  double mu;
  double sigma_sq;
};

struct CdfKnot {
  double time_s;
  double cum_prob;
};

/// Piecewise-linear CDF through the knots, 0 before the first knot and 1 after
/// the last. A first knot with cum_prob > 0 is an atom at that time.
struct EmpiricalCdf {
  std::vector<CdfKnot> knots;
};

/// Distribution of the time a transaction takes to reach an observer.
/// Immutable after construction; construct through the factory functions,
/// which enforce the invariants.
class PropagationDistribution {
 public:
  using Variant = std::variant<LogNormal, EmpiricalCdf>;

  const Variant& variant() const { return repr_; }
  bool is_lognormal() const { return std::holds_alternative<LogNormal>(repr_); }

  friend PropagationDistribution lognormal(double mu, double sigma_sq);
  friend PropagationDistribution empirical(std::vector<CdfKnot> knots);

 private:
  explicit PropagationDistribution(Variant v) : repr_(std::move(v)) {}
  Variant repr_;
};

PropagationDistribution lognormal(double mu, double sigma_sq);

/// Validates knots: times ≥ 0 and strictly increasing, cum_prob nondecreasing
/// in [0,1], last cum_prob = 1 within 1e-12.
PropagationDistribution empirical(std::vector<CdfKnot> knots);

/// The log-normal fit to the KIT Bitcoin propagation measurements.
inline PropagationDistribution kit_lognormal() { return lognormal(1.973, 0.585); }

/// Empirical CDF from delay samples: the i-th order statistic (1-based) gets
/// cumulative probability (i-1)/(N-1); tied samples collapse to the highest
/// position, so all-equal samples give a point mass.
PropagationDistribution fit_empirical(std::span<const double> delays_s);

/// Density per second. Defined for LogNormal only; Empirical throws DomainError.
double pdf(const PropagationDistribution& d, double t_s);
double cdf(const PropagationDistribution& d, double t_s);
/// Generalized inverse of cdf, p in (0,1).
double quantile(const PropagationDistribution& d, double p);
double sample(const PropagationDistribution& d, RngStream& rng);

/// Standard normal CDF and its inverse (Wichura AS241, ~1e-16 relative).
double normal_cdf(double z);
double normal_quantile(double p);

namespace detail {
// Unchecked variants used in inner loops: accept any real t (cdf = 0 for t ≤ 0
// on LogNormal) and p in [0,1].
double cdf_any(const PropagationDistribution& d, double t_s);
double quantile_unchecked(const PropagationDistribution& d, double p);
}  // namespace detail

/// `time_s,cum_prob` CSV with header.
PropagationDistribution load_empirical_csv(const std::filesystem::path& path);
/// One-column `delay_s` CSV with header.
std::vector<double> load_delay_samples_csv(const std::filesystem::path& path);

}  // namespace mal
