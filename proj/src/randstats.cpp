#include "ifsdf/randstats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ifsdf {

namespace {

// Continued fraction for I_x(a,b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxTerms = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("beta_cdf: continued fraction did not converge");
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double beta_density(const BetaParams& p, double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp((p.alpha - 1.0) * std::log(x) + (p.beta - 1.0) * std::log1p(-x) - log_beta(p.alpha, p.beta));
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

std::string short_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

BetaParams::BetaParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("Beta parameters must be positive");
  }
}

std::string BetaParams::label() const { return "Beta(" + short_number(alpha) + "," + short_number(beta) + ")"; }

double beta_cdf(const BetaParams& params, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("beta_cdf: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double a = params.alpha;
  const double b = params.beta;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  double value;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    value = front * beta_continued_fraction(a, b, x) / a;
  } else {
    value = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
  }
  return std::clamp(value, 0.0, 1.0);
}

double beta_quantile(const BetaParams& params, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("beta_quantile: u outside (0,1)");
  // Newton steps safeguarded by a shrinking bracket.
  double lo = 0.0;
  double hi = 1.0;
  double x = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double f = beta_cdf(params, x) - u;
    if (std::abs(f) <= 1e-14) return x;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(hi, 1e-300)) break;
    const double density = beta_density(params, x);
    double next = density > 0.0 ? x - f / density : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

BetaParams parse_distribution(const std::string& spec) {
  if (spec == "uniform") return BetaParams(1.0, 1.0);
  const std::string prefix = "beta:";
  if (spec.rfind(prefix, 0) != 0) throw std::invalid_argument("unknown distribution '" + spec + "'");
  const std::string body = spec.substr(prefix.size());
  const auto comma = body.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("expected beta:A,B, got '" + spec + "'");
  return BetaParams(parse_double(body.substr(0, comma)), parse_double(body.substr(comma + 1)));
}

std::string format_distribution(const BetaParams& params) {
  return "beta:" + short_number(params.alpha) + "," + short_number(params.beta);
}

DistributionFunctionPtr beta_df(const BetaParams& params) {
  if (params.alpha == 1.0 && params.beta == 1.0) return uniform_df();
  return std::make_shared<const AnalyticDF>([params](double x) { return beta_cdf(params, x); }, params.label());
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SeededRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double SeededRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial) { return seed ^ mix64(trial + 1); }

std::vector<double> sample_beta(const BetaParams& params, std::size_t n, SeededRng& rng) {
  constexpr double kGuard = 1e-12;
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double u = rng.uniform();
    if (u < kGuard || u > 1.0 - kGuard) continue;
    out.push_back(beta_quantile(params, u));
  }
  return out;
}

}  // namespace ifsdf
