#include "mal/dist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "mal/error.hpp"

namespace mal {
namespace {

template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

constexpr double kA[] = {3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
                         1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                         3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kB[] = {1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2, 5.3941960214247511077e+3,
                         2.1213794301586595867e+4, 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                         5.2264952788528545610e+3};
constexpr double kC[] = {1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
                         3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
                         2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kD[] = {1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
                         1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                         1.05075007164441684324e-9};
constexpr double kE[] = {6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
                         2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                         2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[] = {1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
                         7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                         2.04426310338993978564e-15};

double empirical_cdf(const EmpiricalCdf& e, double t) {
  const auto& k = e.knots;
  if (t < k.front().time_s) return 0.0;
  if (t >= k.back().time_s) return 1.0;
  // first knot with time > t; t lies in [it-1, it)
  auto it = std::upper_bound(k.begin(), k.end(), t, [](double v, const CdfKnot& c) { return v < c.time_s; });
  const CdfKnot& hi = *it;
  const CdfKnot& lo = *(it - 1);
  const double w = (t - lo.time_s) / (hi.time_s - lo.time_s);
  return lo.cum_prob + w * (hi.cum_prob - lo.cum_prob);
}

double empirical_quantile(const EmpiricalCdf& e, double p) {
  const auto& k = e.knots;
  if (p <= k.front().cum_prob) return k.front().time_s;
  auto it = std::lower_bound(k.begin(), k.end(), p, [](const CdfKnot& c, double v) { return c.cum_prob < v; });
  if (it == k.end()) return k.back().time_s;
  const CdfKnot& hi = *it;
  const CdfKnot& lo = *(it - 1);
  const double w = (p - lo.cum_prob) / (hi.cum_prob - lo.cum_prob);
  return lo.time_s + w * (hi.time_s - lo.time_s);
}

std::vector<std::string> read_csv_rows(const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  std::vector<std::string> rows;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != expected_header) throw ParseError("expected header '" + expected_header + "'", lineno);
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  if (!header_seen) throw ParseError("missing header in " + path.string());
  return rows;
}

double parse_double(const std::string& s, std::size_t row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'", row);
  }
  if (used != s.size() || !std::isfinite(v)) throw ParseError("not a finite number: '" + s + "'", row);
  return v;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(kA, r) / poly(kB, r);
  }
  double r = std::sqrt(-std::log(q < 0 ? p : 1.0 - p));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = poly(kC, r) / poly(kD, r);
  } else {
    r -= 5.0;
    val = poly(kE, r) / poly(kF, r);
  }
  return q < 0 ? -val : val;
}

PropagationDistribution lognormal(double mu, double sigma_sq) {
  if (!std::isfinite(mu) || !std::isfinite(sigma_sq)) throw DomainError("lognormal: parameters must be finite");
  if (!(sigma_sq > 0.0)) throw DomainError("lognormal: sigma_sq must be > 0");
  return PropagationDistribution(LogNormal{mu, sigma_sq});
}

PropagationDistribution empirical(std::vector<CdfKnot> knots) {
  if (knots.empty()) throw DomainError("empirical: no knots");
  double prev_t = -1.0;
  double prev_c = 0.0;
  for (const auto& k : knots) {
    if (!std::isfinite(k.time_s) || k.time_s < 0.0) throw DomainError("empirical: knot times must be finite and >= 0");
    if (k.time_s <= prev_t) throw DomainError("empirical: knot times must be strictly increasing");
    if (!(k.cum_prob >= 0.0 && k.cum_prob <= 1.0 + 1e-12)) throw DomainError("empirical: cum_prob outside [0,1]");
    if (k.cum_prob < prev_c) throw DomainError("empirical: cum_prob must be nondecreasing");
    prev_t = k.time_s;
    prev_c = k.cum_prob;
  }
  if (std::fabs(knots.back().cum_prob - 1.0) > 1e-12) throw DomainError("empirical: last cum_prob must be 1");
  knots.back().cum_prob = 1.0;
  return PropagationDistribution(EmpiricalCdf{std::move(knots)});
}

PropagationDistribution fit_empirical(std::span<const double> delays_s) {
  if (delays_s.size() < 2) throw DomainError("fit_empirical: need at least 2 samples");
  std::vector<double> sorted(delays_s.begin(), delays_s.end());
  for (double d : sorted) {
    if (!std::isfinite(d) || d < 0.0) throw DomainError("fit_empirical: delays must be finite and >= 0");
  }
  std::sort(sorted.begin(), sorted.end());
  const double denom = static_cast<double>(sorted.size() - 1);
  std::vector<CdfKnot> knots;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    knots.push_back({sorted[i], static_cast<double>(i) / denom});
  }
  return empirical(std::move(knots));
}

namespace detail {

double cdf_any(const PropagationDistribution& d, double t) {
  if (const auto* ln = std::get_if<LogNormal>(&d.variant())) {
    if (t <= 0.0) return 0.0;
    return normal_cdf((std::log(t) - ln->mu) / std::sqrt(ln->sigma_sq));
  }
  return empirical_cdf(std::get<EmpiricalCdf>(d.variant()), t);
}

double quantile_unchecked(const PropagationDistribution& d, double p) {
  if (const auto* ln = std::get_if<LogNormal>(&d.variant())) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return std::exp(ln->mu + std::sqrt(ln->sigma_sq) * normal_quantile(p));
  }
  return empirical_quantile(std::get<EmpiricalCdf>(d.variant()), p);
}

}  // namespace detail

double pdf(const PropagationDistribution& d, double t) {
  if (!(t >= 0.0)) throw DomainError("pdf: t must be >= 0");
  const auto* ln = std::get_if<LogNormal>(&d.variant());
  if (ln == nullptr) throw DomainError("pdf: undefined for empirical distributions");
  if (t == 0.0) return 0.0;
  const double sigma = std::sqrt(ln->sigma_sq);
  const double z = (std::log(t) - ln->mu) / sigma;
  return std::exp(-0.5 * z * z) / (t * sigma * std::sqrt(2.0 * std::numbers::pi));
}

double cdf(const PropagationDistribution& d, double t) {
  if (!(t >= 0.0)) throw DomainError("cdf: t must be >= 0");
  return detail::cdf_any(d, t);
}

double quantile(const PropagationDistribution& d, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0,1)");
  return detail::quantile_unchecked(d, p);
}

double sample(const PropagationDistribution& d, RngStream& rng) {
  return detail::quantile_unchecked(d, rng.uniform());
}

PropagationDistribution load_empirical_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path, "time_s,cum_prob");
  std::vector<CdfKnot> knots;
  std::size_t row = 1;
  for (const auto& r : rows) {
    ++row;
    const auto comma = r.find(',');
    if (comma == std::string::npos) throw ParseError("expected two columns", row);
    knots.push_back({parse_double(r.substr(0, comma), row), parse_double(r.substr(comma + 1), row)});
  }
  return empirical(std::move(knots));
}

std::vector<double> load_delay_samples_csv(const std::filesystem::path& path) {
  const auto rows = read_csv_rows(path, "delay_s");
  std::vector<double> out;
  std::size_t row = 1;
  for (const auto& r : rows) {
    ++row;
    const double v = parse_double(r, row);
    if (v < 0.0) throw ParseError("negative delay", row);
    out.push_back(v);
  }
  return out;
}

}  // namespace mal
