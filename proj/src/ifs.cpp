#include "ifsdf/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ifsdf {

namespace {

constexpr double kEndpointTol = 1e-12;
constexpr double kNormalizationTol = 1e-12;

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::string join(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].message;
  }
  return out.str();
}

// Values and left limits of |f - g| at the given points.
double sup_with_left_limits(const DistributionFunction& f, const DistributionFunction& g,
                            std::span<const double> points) {
  double worst = 0.0;
  for (double x : points) {
    worst = std::max(worst, std::abs(f.eval(x) - g.eval(x)));
    if (x > 0.0) worst = std::max(worst, std::abs(f.eval_left_limit(x) - g.eval_left_limit(x)));
  }
  return worst;
}

std::vector<double> target_endpoints(const IfsSystem& system) {
  std::vector<double> points{0.0, 1.0};
  for (const auto& m : system.maps) points.push_back(std::clamp(m.target_lo(), 0.0, 1.0));
  return points;
}

}  // namespace

AffineMap AffineMap::onto(double a, double b, double c, double d) {
  if (!(b > a) || !(d > c)) throw std::invalid_argument("AffineMap::onto: degenerate interval");
  const double slope = (d - c) / (b - a);
  return {a, b, slope, c - slope * a};
}

std::vector<Violation> validate_structure(const IfsSystem& system) {
  std::vector<Violation> out;
  const std::size_t k = system.maps.size();
  auto add = [&out](Violation::Kind kind, std::string msg) { out.push_back({kind, std::move(msg)}); };
  if (k == 0) {
    add(Violation::Kind::kShape, "system has no maps");
    return out;
  }
  if (system.p.size() != k) add(Violation::Kind::kShape, "weight count differs from map count");
  if (system.delta.size() != k - 1) add(Violation::Kind::kShape, "offset count must be map count - 1");

  for (std::size_t i = 0; i < k; ++i) {
    const auto& m = system.maps[i];
    const std::string tag = "map " + std::to_string(i + 1);
    if (!(m.slope > 0.0) || !std::isfinite(m.slope) || !std::isfinite(m.intercept)) {
      add(Violation::Kind::kMap, tag + " is not increasing");
      continue;
    }
    if (!(m.a >= 0.0 && m.b <= 1.0 && m.a < m.b)) add(Violation::Kind::kMap, tag + " source not inside [0,1]");
    if (m.target_lo() < -kEndpointTol || m.target_hi() > 1.0 + kEndpointTol) {
      add(Violation::Kind::kMap, tag + " image not inside [0,1]");
    }
    if (system.identity_partition && !m.is_identity()) {
      add(Violation::Kind::kMap, tag + " is not the identity in an identity-partition system");
    }
  }

  const auto& first = system.maps.front();
  const auto& last = system.maps.back();
  if (std::abs(first.a) > kEndpointTol || std::abs(first.target_lo()) > kEndpointTol) {
    add(Violation::Kind::kCoverage, "first map must start at 0");
  }
  if (std::abs(last.b - 1.0) > kEndpointTol || std::abs(last.target_hi() - 1.0) > kEndpointTol) {
    add(Violation::Kind::kCoverage, "last map must end at 1");
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double gap = system.maps[i + 1].target_lo() - system.maps[i].target_hi();
    if (gap < -kEndpointTol) {
      add(Violation::Kind::kCoverage,
          "targets of maps " + std::to_string(i + 1) + " and " + std::to_string(i + 2) + " overlap");
    } else if (gap > kEndpointTol) {
      add(Violation::Kind::kCoverage,
          "gap between targets of maps " + std::to_string(i + 1) + " and " + std::to_string(i + 2));
    }
  }
  return out;
}

std::vector<Violation> validate(const IfsSystem& system) {
  auto out = validate_structure(system);
  const std::size_t k = system.maps.size();
  if (k == 0 || system.p.size() != k || system.delta.size() != k - 1) return out;
  auto add = [&out](Violation::Kind kind, std::string msg) { out.push_back({kind, std::move(msg)}); };

  double total = 0.0;
  for (double v : system.p) total += v;
  for (double v : system.delta) total += v;
  if (!(std::abs(total - 1.0) <= kNormalizationTol)) {
    add(Violation::Kind::kNormalization, "weights and offsets sum to " + std::to_string(total) + ", not 1");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(system.p[i] >= 0.0)) add(Violation::Kind::kWeight, "p_" + std::to_string(i + 1) + " is negative");
  }
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double d = system.delta[j];
    const std::string tag = "delta_" + std::to_string(j + 1);
    if (system.identity_partition) {
      const double floor = -std::min(system.p[j], system.p[j + 1]);
      if (!(d >= floor)) add(Violation::Kind::kOffset, tag + " below -min(p_j, p_j+1)");
    } else if (!(d >= 0.0)) {
      add(Violation::Kind::kOffset, tag + " is negative");
    }
  }
  return out;
}

void require_valid(const IfsSystem& system) {
  const auto violations = validate(system);
  if (!violations.empty()) throw std::invalid_argument("invalid IFS system: " + join(violations));
}

std::vector<double> cumulative_offsets(const IfsSystem& system) {
  std::vector<double> offsets(system.maps.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    offsets[i] = acc;
    acc += system.p[i];
    if (i < system.delta.size()) acc += system.delta[i];
  }
  return offsets;
}

std::size_t locate(const IfsSystem& system, double x) {
  const std::size_t k = system.maps.size();
  if (x >= 1.0) return k - 1;
  // Target starts are increasing; the owning interval is the last start <= x.
  std::size_t lo = 0;
  std::size_t hi = k;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (system.maps[mid].target_lo() <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double contractivity(const IfsSystem& system) {
  if (system.p.empty()) throw std::invalid_argument("contractivity: empty weight vector");
  return *std::max_element(system.p.begin(), system.p.end());
}

OperatorImage::OperatorImage(std::shared_ptr<const IfsSystem> system, DistributionFunctionPtr inner)
    : system_(std::move(system)), inner_(std::move(inner)) {
  if (!system_ || !inner_) throw std::invalid_argument("OperatorImage: null argument");
  offsets_ = cumulative_offsets(*system_);
  starts_.reserve(system_->size());
  for (const auto& m : system_->maps) starts_.push_back(m.target_lo());
  starts_.front() = 0.0;
}

double OperatorImage::preimage(std::size_t i, double x) const {
  const auto& m = system_->maps[i];
  if (x == starts_[i]) return m.a;
  return std::clamp(m.inverse(x), m.a, m.b);
}

double OperatorImage::image_of(std::size_t i, double y) const {
  const auto& m = system_->maps[i];
  double x = m.forward(y);
  if (m.is_identity()) return x;
  while (preimage(i, x) < y) x = std::nextafter(x, 2.0);
  while (x > starts_[i] && preimage(i, std::nextafter(x, 0.0)) >= y) x = std::nextafter(x, 0.0);
  return x;
}

double OperatorImage::eval(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), x);
  const auto i = static_cast<std::size_t>(it - starts_.begin()) - 1;
  return system_->p[i] * inner_->eval(preimage(i, x)) + offsets_[i];
}

double OperatorImage::eval_left_limit(double x) const {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  // Owning interval from the left: the last start strictly below x.
  const auto it = std::lower_bound(starts_.begin(), starts_.end(), x);
  const auto i = static_cast<std::size_t>(it - starts_.begin()) - 1;
  const auto& m = system_->maps[i];
  const bool at_right_end = (i + 1 < starts_.size() && x == starts_[i + 1]) || x == 1.0;
  if (at_right_end || m.is_identity()) {
    return system_->p[i] * inner_->eval_left_limit(at_right_end ? m.b : x) + offsets_[i];
  }
  // Inner jumps are reported at the first double whose preimage reaches them,
  // so the value just below x is the left limit.
  return system_->p[i] * inner_->eval(preimage(i, std::nextafter(x, 0.0))) + offsets_[i];
}

std::vector<double> OperatorImage::breakpoints() const {
  std::vector<double> out(starts_.begin() + 1, starts_.end());
  out.push_back(1.0);
  const auto inner = inner_->breakpoints();
  for (std::size_t i = 0; i < system_->size(); ++i) {
    const auto& m = system_->maps[i];
    const auto lo = std::upper_bound(inner.begin(), inner.end(), m.a);
    const auto hi = std::lower_bound(inner.begin(), inner.end(), m.b);
    for (auto it = lo; it < hi; ++it) out.push_back(image_of(i, *it));
  }
  normalize_mesh(out);
  return out;
}

std::size_t OperatorImage::breakpoint_count_bound() const {
  const std::size_t k = system_->size();
  const std::size_t inner = inner_->breakpoint_count_bound();
  return saturating_add(k + 1, system_->identity_partition ? inner : saturating_mul(k, inner));
}

DistributionFunctionPtr apply(const IfsSystem& system, DistributionFunctionPtr f) {
  require_valid(system);
  return std::make_shared<const OperatorImage>(std::make_shared<const IfsSystem>(system), std::move(f));
}

GridDF iterate(const IfsSystem& system, DistributionFunctionPtr u0, int s, std::vector<double> mesh,
               std::size_t mesh_cap) {
  require_valid(system);
  if (s < 1) throw std::invalid_argument("iterate: s must be at least 1");
  const auto shared = std::make_shared<const IfsSystem>(system);
  DistributionFunctionPtr f = std::move(u0);
  for (int step = 0; step < s; ++step) f = std::make_shared<const OperatorImage>(shared, f);

  const auto ends = target_endpoints(system);
  mesh.insert(mesh.end(), ends.begin(), ends.end());
  if (f->breakpoint_count_bound() <= mesh_cap) {
    const auto bps = f->breakpoints();
    mesh.insert(mesh.end(), bps.begin(), bps.end());
  }
  return GridDF::sample(*f, std::move(mesh));
}

FixedPointResult fixed_point(const IfsSystem& system, double tol, std::vector<double> mesh,
                             std::size_t mesh_cap, int max_iterations) {
  require_valid(system);
  if (!(tol > 0.0)) throw std::invalid_argument("fixed_point: tol must be positive");
  const double c = contractivity(system);
  if (!(c < 1.0)) throw std::domain_error("fixed_point: system is not contractive (max p_i >= 1)");

  const auto shared = std::make_shared<const IfsSystem>(system);
  const auto ends = target_endpoints(system);
  mesh.insert(mesh.end(), ends.begin(), ends.end());
  std::vector<double> base = mesh;
  normalize_mesh(base);

  auto u = std::make_shared<const GridDF>(GridDF::sample(*uniform_df(), base));
  for (int it = 1;; ++it) {
    const OperatorImage v(shared, u);
    auto bps = v.breakpoints();

    std::vector<double> next_mesh = u->xs();
    bool exact = false;
    if (bps.size() <= mesh_cap) {
      next_mesh = base;
      next_mesh.insert(next_mesh.end(), bps.begin(), bps.end());
      exact = true;
    }
    auto next = std::make_shared<const GridDF>(GridDF::sample(v, next_mesh));

    std::vector<double> probe = u->xs();
    probe.insert(probe.end(), bps.begin(), bps.end());
    normalize_mesh(probe);
    const double step = sup_with_left_limits(v, *u, probe);
    // On a frozen mesh the sampled iteration contracts to its own fixed point;
    // stop once it settles and carry the sampling error in the bound.
    const double settle = exact ? step : sup_with_left_limits(*next, *u, next->xs());

    if (c * settle <= tol * (1.0 - c) || it >= max_iterations) {
      const double resample_error = exact ? 0.0 : sup_with_left_limits(v, *next, probe);
      return {*next, it, c / (1.0 - c) * step + resample_error};
    }
    u = std::move(next);
  }
}

IfsAttractorDF::IfsAttractorDF(IfsSystem system, double tol) : system_(std::move(system)), tol_(tol) {
  require_valid(system_);
  if (!(contractivity(system_) < 1.0)) throw std::domain_error("IfsAttractorDF: system is not contractive");
  offsets_ = cumulative_offsets(system_);
}

double IfsAttractorDF::unroll(double x, bool left) const {
  double value = 0.0;
  double weight = 1.0;
  while (weight > tol_) {
    if (x <= 0.0) return value;
    if (!left && x >= 1.0) return value + weight;
    std::size_t i = locate(system_, x);
    const auto& m = system_.maps[i];
    double y;
    if (left) {
      if (x <= m.target_lo() && i > 0) --i;
      const auto& ml = system_.maps[i];
      const bool at_right_end = x >= ml.target_hi() || x >= 1.0;
      y = at_right_end ? ml.b : std::clamp(ml.inverse(x), ml.a, ml.b);
    } else {
      y = x == m.target_lo() ? m.a : std::clamp(m.inverse(x), m.a, m.b);
    }
    value += weight * offsets_[i];
    weight *= system_.p[i];
    x = y;
  }
  // Remaining mass is resolved with the uniform starting function.
  return value + weight * std::clamp(x, 0.0, 1.0);
}

double IfsAttractorDF::eval(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return unroll(x, false);
}

double IfsAttractorDF::eval_left_limit(double x) const {
  if (x <= 0.0) return 0.0;
  return unroll(std::min(x, 1.0), true);
}

double perturbation_bound(std::span<const double> p, std::span<const double> p_star, double c) {
  if (p.size() != p_star.size()) throw std::invalid_argument("perturbation_bound: length mismatch");
  if (!(c < 1.0) || c < 0.0) throw std::domain_error("perturbation_bound: c must lie in [0,1)");
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) total += std::abs(p[j] - p_star[j]);
  return total / (1.0 - c);
}

}  // namespace ifsdf
