#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mal/error.hpp"
#include "mal/orderprob.hpp"
#include "oracles.hpp"

using namespace mal;

namespace {
constexpr double kMu = 1.973, kS2 = 0.585;
const std::vector<double> kOmegas{-600, -60, -30, -10, -5, -1, 0, 1, 5, 10, 30, 60, 600};

double q(int n, int m, double w) { return q_exact({n, m, w, kit_lognormal()}); }
}  // namespace

TEST_CASE("prob_before worked values") {
  const auto d = kit_lognormal();
  CHECK(prob_before(d, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prob_before(d, 30.0) == doctest::Approx(0.98459).epsilon(1e-4));
  CHECK(std::pow(prob_before(d, 30.0), 16) == doctest::Approx(0.780).epsilon(1e-3));
  CHECK(prob_before(d, 600.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("prob_before agrees with the log-space Gauss-Legendre oracle") {
  const auto d = kit_lognormal();
  for (double w : kOmegas) CHECK(prob_before(d, w) == doctest::Approx(oracle::prob_before(w, kMu, kS2)).epsilon(1e-9));
  const auto d2 = lognormal(0.3, 1.7);
  for (double w : {-3.0, 0.2, 2.0, 11.0}) CHECK(prob_before(d2, w) == doctest::Approx(oracle::prob_before(w, 0.3, 1.7)).epsilon(1e-9));
}

TEST_CASE("prob_before reflection and monotonicity") {
  const auto d = kit_lognormal();
  double prev = 0.0;
  for (double w = -100.0; w <= 100.0; w += 0.5) {
    const double p = prob_before(d, w);
    CHECK(p >= prev - 1e-15);
    CHECK(p + prob_before(d, -w) == doctest::Approx(1.0).epsilon(2e-9));
    prev = p;
  }
}

TEST_CASE("prob_before on an empirical distribution") {
  // Uniform(0, 10) delays: P(d1 < ω + d2) has a closed form.
  const auto d = empirical({{0.0, 0.0}, {10.0, 1.0}});
  auto exact = [](double w) {
    const double a = std::fabs(w) / 10.0;
    const double tail = a >= 1 ? 0.0 : 0.5 * (1 - a) * (1 - a);
    return w >= 0 ? 1.0 - tail : tail;
  };
  for (double w : {-12.0, -5.0, -1.0, 0.0, 2.5, 7.0, 10.0, 15.0})
    CHECK(prob_before(d, w) == doctest::Approx(exact(w)).epsilon(1e-8));
}

TEST_CASE("q_exact worked values") {
  CHECK(q(5, 3, 0) == doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(q(5, 5, 0) == doctest::Approx(0.03125).epsilon(1e-12));
  CHECK(q(16, 16, 30) == doctest::Approx(0.780).epsilon(5e-4));
}

TEST_CASE("q_exact at omega 0 is the symmetric binomial") {
  const auto c = oracle::pascal(20);
  for (int n = 1; n <= 20; ++n)
    for (int m = 0; m <= n; ++m) CHECK(std::fabs(q(n, m, 0) - c[n][m] / std::ldexp(1.0, n)) <= 1e-9);
}

TEST_CASE("q_exact agrees with the oracle across the grid") {
  for (int n : {1, 5, 16, 32})
    for (double w : kOmegas)
      for (int m = 0; m <= n; m += std::max(1, n / 4))
        CHECK(std::fabs(q(n, m, w) - oracle::q_exact(n, m, w, kMu, kS2)) <= 1e-8);
}

TEST_CASE("agreement distribution normalizes and reflects") {
  const auto d = kit_lognormal();
  for (int n : {1, 2, 5, 16, 32})
    for (double w : kOmegas) {
      const auto dist = agreement_distribution(d, n, w);
      double s = 0;
      for (double v : dist) s += v;
      CHECK(std::fabs(s - 1.0) <= n * 1e-9);
      const auto mirrored = agreement_distribution(d, n, -w);
      for (int m = 0; m <= n; ++m) CHECK(std::fabs(dist[m] - mirrored[n - m]) <= 2e-9);
    }
}

TEST_CASE("q_at_least worked values and monotonicity") {
  const auto d = kit_lognormal();
  CHECK(q_at_least(d, 5, 4, 10) == doctest::Approx(0.871).epsilon(1e-3));
  CHECK(q_at_least(d, 16, 12, 5) == doctest::Approx(0.615).epsilon(2e-3));
  for (int n : {1, 7, 16})
    for (double w : kOmegas) CHECK(q_at_least(d, n, 0, w) == 1.0);
  for (int m = 1; m <= 16; ++m) {
    double prev = 0.0;
    for (double w : kOmegas) {
      const double v = q_at_least(d, 16, m, w);
      CHECK(v >= prev - 1e-12);
      CHECK(v <= q_at_least(d, 16, m - 1, w) + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("binomial_pmf edge cases") {
  CHECK(binomial_pmf(5, 0, 0.0) == 1.0);
  CHECK(binomial_pmf(5, 5, 1.0) == 1.0);
  CHECK(binomial_pmf(5, 3, 1.0) == 0.0);
  CHECK(binomial_pmf(5, 0, 1.0) == 0.0);
  CHECK_THROWS_AS(binomial_pmf(0, 0, 0.3), DomainError);
  CHECK(binomial_pmf(2000, 1000, 0.5) == doctest::Approx(0.017839).epsilon(1e-4));
  CHECK_THROWS_AS(binomial_pmf(5, 6, 0.5), DomainError);
  CHECK_THROWS_AS(binomial_pmf(5, -1, 0.5), DomainError);
  CHECK_THROWS_AS(binomial_pmf(5, 1, 1.5), DomainError);
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(q_exact({0, 0, 0.0, kit_lognormal()}), DomainError);
  CHECK_THROWS_AS(q_exact({5, 6, 0.0, kit_lognormal()}), DomainError);
  CHECK_THROWS_AS(q_exact({5, 2, NAN, kit_lognormal()}), DomainError);
  QuadratureConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(prob_before(kit_lognormal(), 1.0, bad), DomainError);
  bad = {};
  bad.truncation_eps = 0.1;
  CHECK_THROWS_AS(prob_before(kit_lognormal(), 1.0, bad), DomainError);
}

TEST_CASE("quadrature budget exhaustion is reported") {
  QuadratureConfig tight;
  tight.rel_tol = 1e-15;
  tight.max_subdivisions = 2;
  CHECK_THROWS_AS(prob_before(kit_lognormal(), 3.0, tight), QuadratureError);
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return std::sqrt(std::fabs(x - 0.3)); }, 0.0, 1.0, 1e-15, 4),
                  QuadratureError);
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 3.0, 1e-12, 1000) == doctest::Approx(9.0));
}

TEST_CASE("posterior worked values") {
  const auto d = kit_lognormal();
  const UniformPrior prior{-600, 600};
  CHECK(p_sent_before(d, 12, 6, prior) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(p_sent_before(d, 5, 5, prior) >= 0.99);
  CHECK(p_sent_before(d, 16, 9, prior) < p_sent_before(d, 16, 12, prior));
}

TEST_CASE("posterior agrees with the Gauss-Legendre oracle") {
  const auto d = kit_lognormal();
  const auto post = posterior_by_m(d, 5, UniformPrior{-600, 600});
  for (int m = 0; m <= 5; ++m)
    CHECK(post[m] == doctest::Approx(oracle::posterior_uniform(5, m, -600, 600, kMu, kS2)).epsilon(1e-6));
  CHECK(p_sent_before(d, 5, 2, UniformPrior{-100, 300}) ==
        doctest::Approx(oracle::posterior_uniform(5, 2, -100, 300, kMu, kS2)).epsilon(1e-6));
}

TEST_CASE("posterior is strictly increasing in m") {
  const auto d = kit_lognormal();
  for (int n : {5, 12, 16}) {
    const auto post = posterior_by_m(d, n, UniformPrior{-600, 600});
    for (int m = 1; m <= n; ++m) CHECK(post[m] > post[m - 1]);
    for (int m = 0; m <= n; ++m) CHECK(post[m] + post[n - m] == doctest::Approx(1.0).epsilon(1e-6));
  }
  const auto dexp = posterior_by_m(d, 16, TruncatedDoubleExponential{60, 600});
  for (int m = 1; m <= 16; ++m) CHECK(dexp[m] > dexp[m - 1]);
}

TEST_CASE("posterior ordering matches a Monte Carlo Bayes oracle") {
  // Sample ω from the prior, simulate 16 observers, condition on m.
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> prior(-600, 600);
  std::lognormal_distribution<double> delay(kMu, std::sqrt(kS2));
  std::vector<double> hits(17, 0), totals(17, 0);
  for (int t = 0; t < 400000; ++t) {
    const double w = prior(gen);
    int k = 0;
    for (int o = 0; o < 16; ++o) k += delay(gen) < w + delay(gen);
    totals[k] += 1;
    hits[k] += w > 0;
  }
  const auto post = posterior_by_m(kit_lognormal(), 16, UniformPrior{-600, 600});
  for (int m = 9; m <= 15; ++m) {
    const double est = hits[m] / totals[m];
    const double se = std::sqrt(std::max(est * (1 - est), 1e-4) / totals[m]);
    CHECK(std::fabs(est - post[m]) <= 4 * se);
  }
}

TEST_CASE("prior validation") {
  const auto d = kit_lognormal();
  CHECK_THROWS_AS(p_sent_before(d, 5, 2, UniformPrior{10, -10}), DomainError);
  CHECK_THROWS_AS(p_sent_before(d, 5, 2, TruncatedDoubleExponential{0, 10}), DomainError);
  CHECK_THROWS_AS(p_sent_before(d, 5, 6, UniformPrior{-10, 10}), DomainError);
  // all prior mass far on one side: posterior is certain
  CHECK(p_sent_before(d, 5, 0, UniformPrior{1000, 2000}) == doctest::Approx(1.0));
  CHECK(prior_density(UniformPrior{-600, 600}, 0.0) == doctest::Approx(1.0 / 1200));
  CHECK(prior_density(UniformPrior{-600, 600}, 700.0) == 0.0);
}

TEST_CASE("cross-block probability") {
  const auto d = kit_lognormal();
  CHECK(cross_block_prob(d, 16, 0.0) == 1.0);
  CHECK(cross_block_prob(d, 1, 20.0) == doctest::Approx(0.091).epsilon(1e-3));
  // closed form with the fitted curve: (1 - 0.9612)^16
  CHECK(cross_block_prob(d, 16, 27.75) == doctest::Approx(2.587e-23).epsilon(1e-3));
  for (int n : {1, 4, 16})
    for (double tau : {5.0, 20.0, 27.75})
      CHECK(std::fabs(cross_block_prob(d, n, tau) - std::pow(1 - oracle::lognormal_cdf(tau, kMu, kS2), n)) <=
            1e-12);
  double prev = 1.0;
  for (double tau = 0.5; tau < 100; tau += 0.5) {
    const double v = cross_block_prob(d, 4, tau);
    CHECK(v < prev);
    CHECK(cross_block_prob(d, 5, tau) < v);
    prev = v;
  }
  CHECK_THROWS_AS(cross_block_prob(d, 4, -1.0), DomainError);
  CHECK_THROWS_AS(cross_block_prob(d, 0, 1.0), DomainError);
}
