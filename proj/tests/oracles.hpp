// Reference implementations used only by the tests. They deliberately take
// different numerical routes from the library (Newton instead of AS241,
// Gauss-Legendre over log-time instead of adaptive Simpson over probability,
// Pascal's triangle instead of multiplicative binomials, mt19937_64 instead
// of Philox) so agreement is evidence rather than tautology.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double lognormal_cdf(double t, double mu, double s2) {
  if (t <= 0.0) return 0.0;
  return 0.5 * std::erfc(-(std::log(t) - mu) / std::sqrt(2.0 * s2));
}

inline double lognormal_pdf(double t, double mu, double s2) {
  if (t <= 0.0) return 0.0;
  const double z = std::log(t) - mu;
  return std::exp(-z * z / (2.0 * s2)) / (t * std::sqrt(2.0 * M_PI * s2));
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Newton iteration on erfc, started by bisection.
inline double std_normal_quantile(double p) {
  if (p > 0.5) return -std_normal_quantile(1.0 - p);  // 1 - p is exact here
  double lo = -40, hi = 40;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std_normal_cdf(mid) < p ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    x -= (std_normal_cdf(x) - p) / pdf;
  }
  return x;
}

// 20-point Gauss-Legendre on [-1, 1].
inline const std::array<std::pair<double, double>, 10>& gl20() {
  static const std::array<std::pair<double, double>, 10> nodes{{
      {0.0765265211334973, 0.1527533871307258},
      {0.2277858511416451, 0.1491729864726037},
      {0.3737060887154195, 0.1420961093183820},
      {0.5108670019508271, 0.1316886384491766},
      {0.6360536807265150, 0.1181945319615184},
      {0.7463319064601508, 0.1019301198172404},
      {0.8391169718222188, 0.0832767415767048},
      {0.9122344282513259, 0.0626720483341091},
      {0.9639719272779138, 0.0406014298003869},
      {0.9931285991850949, 0.0176140071391521},
  }};
  return nodes;
}

template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    const double r = 0.5 * h;
    for (const auto& [x, w] : gl20()) total += w * r * (f(c - r * x) + f(c + r * x));
  }
  return total;
}

/// P(d1 < ω + d2) for i.i.d. log-normal delays: ∫ F(ω + ι) f(ι) dι with
/// ι = e^y, integrated over y ∈ μ ± 14σ. For ω < 0 the integrand vanishes
/// below ι = -ω, so the range starts there rather than straddling the kink.
inline double prob_before(double omega, double mu, double s2) {
  const double s = std::sqrt(s2);
  const double lo = omega < 0 ? std::max(mu - 14.0 * s, std::log(-omega)) : mu - 14.0 * s;
  if (lo >= mu + 14.0 * s) return 0.0;
  return gauss_legendre(
      [&](double y) {
        const double iota = std::exp(y);
        const double z = (y - mu) / s;
        const double dens = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));  // density in y
        return lognormal_cdf(omega + iota, mu, s2) * dens;
      },
      lo, mu + 14.0 * s, 400);
}

/// Binomial coefficients from Pascal's triangle.
inline std::vector<std::vector<double>> pascal(int n) {
  std::vector<std::vector<double>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1.0);
    for (int k = 1; k < i; ++k) c[i][k] = c[i - 1][k - 1] + c[i - 1][k];
  }
  return c;
}

inline double q_exact(int n, int m, double omega, double mu, double s2) {
  const double p = prob_before(omega, mu, s2);
  return pascal(n)[n][m] * std::pow(p, m) * std::pow(1.0 - p, n - m);
}

inline double q_at_least(int n, int m, double omega, double mu, double s2) {
  const double p = prob_before(omega, mu, s2);
  const auto c = pascal(n);
  double s = 0.0;
  for (int k = m; k <= n; ++k) s += c[n][k] * std::pow(p, k) * std::pow(1.0 - p, n - k);
  return s;
}

/// Posterior P(ω > 0 | m of n) under a Uniform(lo, hi) prior with lo < 0 < hi,
/// by Gauss-Legendre over breakpoints that resolve the region near ω = 0.
inline double posterior_uniform(int n, int m, double lo, double hi, double mu, double s2) {
  const auto c = pascal(n);
  auto like = [&](double w) {
    const double p = prob_before(w, mu, s2);
    return c[n][m] * std::pow(p, m) * std::pow(1.0 - p, n - m);
  };
  auto side = [&](double a, double b) {
    // a, b ≥ 0: integrate like(sign * ω)
    static const double cuts[] = {0, 0.5, 1, 2, 4, 8, 15, 30, 60, 120, 300, 600, 1e9};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
      const double x0 = std::max(a, cuts[i]), x1 = std::min(b, cuts[i + 1]);
      if (x1 > x0) total += gauss_legendre(like, x0, x1, 2);
    }
    return total;
  };
  const double pos = side(0.0, hi);
  auto like_neg = [&](double a, double b) {
    static const double cuts[] = {0, 0.5, 1, 2, 4, 8, 15, 30, 60, 120, 300, 600, 1e9};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
      const double x0 = std::max(a, cuts[i]), x1 = std::min(b, cuts[i + 1]);
      if (x1 > x0) total += gauss_legendre([&](double w) { return like(-w); }, x0, x1, 2);
    }
    return total;
  };
  const double neg = like_neg(0.0, -lo);
  return pos / (pos + neg);
}

/// Monte Carlo histogram of K = #observers with d1 < ω + d2, using the
/// standard library's generator and log-normal distribution.
inline std::vector<std::uint64_t> mc_agreement(int n, double omega, double mu, double s2, std::uint64_t trials,
                                               std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::lognormal_distribution<double> d(mu, std::sqrt(s2));
  std::vector<std::uint64_t> hist(n + 1, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    int k = 0;
    for (int o = 0; o < n; ++o) k += d(gen) < omega + d(gen);
    ++hist[k];
  }
  return hist;
}

/// Exact 0/1 knapsack optimum (maximum total fee within capacity).
inline std::int64_t knapsack(const std::vector<std::int64_t>& weight, const std::vector<std::int64_t>& fee,
                             std::int64_t capacity) {
  std::vector<std::int64_t> best(capacity + 1, 0);
  for (std::size_t i = 0; i < weight.size(); ++i)
    for (std::int64_t c = capacity; c >= weight[i]; --c) best[c] = std::max(best[c], best[c - weight[i]] + fee[i]);
  return best[capacity];
}

/// Binomial upper tail Σ_{k≥m} C(n,k) q^k (1-q)^(n-k).
inline double binomial_tail(int n, int m, double q) {
  const auto c = pascal(n);
  double s = 0.0;
  for (int k = m; k <= n; ++k) s += c[n][k] * std::pow(q, k) * std::pow(1.0 - q, n - k);
  return s;
}

}  // namespace oracle
