#include "ifsdf/distfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ifsdf {

namespace {

// Rounding slack allowed when checking monotonicity of tabulated values.
constexpr double kMonotoneSlack = 1e-12;

}  // namespace

AnalyticDF::AnalyticDF(std::function<double(double)> cdf, std::string name)
    : cdf_(std::move(cdf)), name_(std::move(name)) {
  if (!cdf_) throw std::invalid_argument("AnalyticDF: empty callable");
}

double AnalyticDF::eval(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::clamp(cdf_(x), 0.0, 1.0);
}

DistributionFunctionPtr uniform_df() {
  static const auto uniform = std::make_shared<const AnalyticDF>([](double x) { return x; }, "uniform");
  return uniform;
}

EmpiricalDF::EmpiricalDF(std::vector<double> sample) : sample_(std::move(sample)) {
  if (sample_.empty()) throw std::invalid_argument("empirical distribution: empty sample");
  for (double v : sample_) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument("empirical distribution: sample value outside (0,1)");
    }
  }
  std::sort(sample_.begin(), sample_.end());
  if (std::adjacent_find(sample_.begin(), sample_.end()) != sample_.end()) {
    throw std::invalid_argument("empirical distribution: duplicate sample values");
  }
}

double EmpiricalDF::eval(double x) const {
  const auto count = std::upper_bound(sample_.begin(), sample_.end(), x) - sample_.begin();
  return static_cast<double>(count) / static_cast<double>(sample_.size());
}

double EmpiricalDF::eval_left_limit(double x) const {
  const auto count = std::lower_bound(sample_.begin(), sample_.end(), x) - sample_.begin();
  return static_cast<double>(count) / static_cast<double>(sample_.size());
}

EmpiricalDF edf_from_sample(std::vector<double> sample) { return EmpiricalDF(std::move(sample)); }

GridDF::GridDF(std::vector<double> xs, std::vector<double> values, Interpolation mode)
    : xs_(std::move(xs)), values_(std::move(values)), mode_(mode) {
  if (values_.size() != xs_.size()) throw std::invalid_argument("GridDF: size mismatch");
  left_values_.resize(values_.size());
  if (!values_.empty()) left_values_[0] = values_[0];
  for (std::size_t j = 1; j < values_.size(); ++j) {
    left_values_[j] = mode_ == Interpolation::kLinear ? values_[j] : values_[j - 1];
  }
  check();
}

GridDF::GridDF(std::vector<double> xs, std::vector<double> values, std::vector<double> left_values,
               Interpolation mode)
    : xs_(std::move(xs)), values_(std::move(values)), left_values_(std::move(left_values)), mode_(mode) {
  if (values_.size() != xs_.size() || left_values_.size() != xs_.size()) {
    throw std::invalid_argument("GridDF: size mismatch");
  }
  if (!left_values_.empty()) left_values_[0] = values_[0];
  check();
}

void GridDF::check() const {
  if (xs_.size() < 2) throw std::invalid_argument("GridDF: need at least two mesh points");
  if (xs_.front() != 0.0 || xs_.back() != 1.0) throw std::invalid_argument("GridDF: mesh must span [0,1]");
  if (values_.front() != 0.0 || values_.back() != 1.0) {
    throw std::invalid_argument("GridDF: values must start at 0 and end at 1");
  }
  for (std::size_t j = 1; j < xs_.size(); ++j) {
    if (!(xs_[j] > xs_[j - 1])) throw std::invalid_argument("GridDF: mesh not strictly increasing");
    const double from = mode_ == Interpolation::kLinear ? values_[j - 1] : left_values_[j];
    if (mode_ == Interpolation::kStep && left_values_[j] != values_[j - 1]) {
      throw std::invalid_argument("GridDF: step left limit must equal previous value");
    }
    if (left_values_[j] < from - kMonotoneSlack || values_[j] < left_values_[j] - kMonotoneSlack) {
      throw std::invalid_argument("GridDF: values not non-decreasing");
    }
  }
}

GridDF GridDF::sample(const DistributionFunction& f, std::vector<double> mesh, Interpolation mode) {
  mesh.push_back(0.0);
  mesh.push_back(1.0);
  std::erase_if(mesh, [](double x) { return !(x >= 0.0 && x <= 1.0); });
  normalize_mesh(mesh);
  std::vector<double> values(mesh.size());
  std::vector<double> left(mesh.size());
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    values[j] = f.eval(mesh[j]);
    left[j] = j == 0 ? values[j] : f.eval_left_limit(mesh[j]);
  }
  values.front() = 0.0;
  values.back() = 1.0;
  if (mode == Interpolation::kStep) {
    for (std::size_t j = 1; j < mesh.size(); ++j) left[j] = values[j - 1];
  }
  // Clean sub-ulp monotonicity noise from floating evaluation.
  double running = 0.0;
  for (std::size_t j = 0; j < mesh.size(); ++j) {
    left[j] = std::clamp(std::max(left[j], running), 0.0, 1.0);
    if (mode == Interpolation::kStep && j > 0) left[j] = values[j - 1];
    values[j] = std::clamp(std::max(values[j], left[j]), 0.0, 1.0);
    running = values[j];
  }
  return GridDF(std::move(mesh), std::move(values), std::move(left), mode);
}

std::size_t GridDF::segment(double x) const {
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  return static_cast<std::size_t>(it - xs_.begin()) - 1;
}

double GridDF::eval(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const std::size_t j = segment(x);
  if (xs_[j] == x || mode_ == Interpolation::kStep) return values_[j];
  const double t = (x - xs_[j]) / (xs_[j + 1] - xs_[j]);
  return values_[j] + t * (left_values_[j + 1] - values_[j]);
}

double GridDF::eval_left_limit(double x) const {
  if (x <= 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  const auto j = static_cast<std::size_t>(it - xs_.begin());
  if (*it == x) return left_values_[j];
  return eval(x);
}

std::vector<double> GridDF::breakpoints() const { return {xs_.begin() + 1, xs_.end()}; }

std::vector<double> uniform_mesh(std::size_t m) {
  if (m < 2) throw std::invalid_argument("uniform_mesh: need at least two points");
  std::vector<double> mesh(m);
  for (std::size_t i = 0; i < m; ++i) mesh[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  mesh.back() = 1.0;
  return mesh;
}

void normalize_mesh(std::vector<double>& mesh) {
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());
}

double sup_distance_at(const DistributionFunction& f, const DistributionFunction& g,
                       std::span<const double> points) {
  double worst = 0.0;
  for (double x : points) worst = std::max(worst, std::abs(f.eval(x) - g.eval(x)));
  return worst;
}

double sup_distance(const DistributionFunction& f, const DistributionFunction& g, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("sup_distance: grid_size must be at least 2");
  std::vector<double> points = uniform_mesh(grid_size);
  for (const DistributionFunction* h : {&f, &g}) {
    if (h->breakpoint_count_bound() <= kMaxSupBreakpoints) {
      const auto bps = h->breakpoints();
      points.insert(points.end(), bps.begin(), bps.end());
    }
  }
  normalize_mesh(points);
  double worst = 0.0;
  for (double x : points) {
    worst = std::max(worst, std::abs(f.eval(x) - g.eval(x)));
    if (x > 0.0) worst = std::max(worst, std::abs(f.eval_left_limit(x) - g.eval_left_limit(x)));
  }
  return worst;
}

double eval_left_limit(const DistributionFunction& f, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("eval_left_limit: x must be positive");
  return f.eval_left_limit(x);
}

double quantile_by_bisection(const DistributionFunction& f, double u, double tol) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile: level must lie in (0,1)");
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f.eval(mid) >= u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace ifsdf
