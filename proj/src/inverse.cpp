#include "ifsdf/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>

#include "ifsdf/simplex.hpp"

namespace ifsdf {

std::string to_string(CollageMode mode) {
  switch (mode) {
    case CollageMode::kAuto:
      return "auto";
    case CollageMode::kExactEndpoints:
      return "exact-endpoints";
    case CollageMode::kGrid:
      return "grid";
  }
  return "unknown";
}

double AffineResidual::at(std::span<const double> p) const {
  double r = constant;
  for (std::size_t j = 0; j < coeffs.size(); ++j) r += coeffs[j] * p[j];
  return r;
}

CollageProblem::CollageProblem(DistributionFunctionPtr target, std::vector<AffineMap> maps,
                               std::vector<double> delta, CollageMode mode, std::size_t grid_size)
    : target_(std::move(target)), maps_(std::move(maps)), delta_(std::move(delta)), mode_(mode) {
  if (!target_) throw std::invalid_argument("collage problem: null target");
  identity_ = !maps_.empty() && std::all_of(maps_.begin(), maps_.end(), [](const AffineMap& m) { return m.is_identity(); });

  IfsSystem structure = system(std::vector<double>(maps_.size(), 0.0));
  const auto violations = validate_structure(structure);
  if (!violations.empty()) throw std::invalid_argument("collage problem: " + violations.front().message);

  budget_ = 1.0 - std::accumulate(delta_.begin(), delta_.end(), 0.0);
  if (!(budget_ > 0.0)) throw std::invalid_argument("collage problem: constraint set is empty (sum delta >= 1)");

  if (mode_ == CollageMode::kAuto) mode_ = identity_ ? CollageMode::kExactEndpoints : CollageMode::kGrid;
  if (mode_ == CollageMode::kExactEndpoints) {
    if (!identity_) throw std::invalid_argument("collage problem: exact endpoints need identity maps");
    build_exact();
  } else {
    if (grid_size < 2) throw std::invalid_argument("collage problem: grid size must be at least 2");
    build_grid(grid_size);
  }
}

CollageProblem CollageProblem::identity_partition(DistributionFunctionPtr target, std::vector<double> cuts,
                                                  std::vector<double> delta) {
  normalize_mesh(cuts);
  std::erase_if(cuts, [](double x) { return !(x > 0.0 && x < 1.0); });
  std::vector<AffineMap> maps;
  double lo = 0.0;
  for (double x : cuts) {
    maps.push_back(AffineMap::identity(lo, x));
    lo = x;
  }
  maps.push_back(AffineMap::identity(lo, 1.0));
  if (delta.empty()) delta.assign(maps.size() - 1, 0.0);
  return CollageProblem(std::move(target), std::move(maps), std::move(delta), CollageMode::kAuto);
}

IfsSystem CollageProblem::system(std::vector<double> p) const {
  return IfsSystem{maps_, std::move(p), delta_, identity_};
}

// On an identity cell [x_lo, x_hi) the residual is
//   sum_{j<i} p_j + sum_{j<i} delta_j - (1 - p_i) F(x),
// affine and monotone in F(x), so its extremes sit at F(x_lo) and F(x_hi-).
void CollageProblem::build_exact() {
  const std::size_t k = maps_.size();
  double shift = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double f_lo = target_->eval(maps_[i].a);
    const double f_hi = target_->eval_left_limit(maps_[i].b);
    for (double f : {f_lo, f_hi}) {
      AffineResidual r{std::vector<double>(k, 0.0), shift - f};
      for (std::size_t j = 0; j < i; ++j) r.coeffs[j] = 1.0;
      r.coeffs[i] = f;
      residuals_.push_back(std::move(r));
    }
    if (i < delta_.size()) shift += delta_[i];
  }
}

void CollageProblem::build_grid(std::size_t grid_size) {
  const std::size_t k = maps_.size();
  std::vector<double> points = uniform_mesh(grid_size);
  for (const auto& m : maps_) points.push_back(m.target_lo());
  if (target_->breakpoint_count_bound() <= kMaxSupBreakpoints) {
    const auto bps = target_->breakpoints();
    points.insert(points.end(), bps.begin(), bps.end());
    for (const auto& m : maps_) {
      for (double b : bps) {
        if (b > m.a && b < m.b) points.push_back(m.forward(b));
      }
    }
  }
  std::erase_if(points, [](double x) { return !(x >= 0.0 && x < 1.0); });
  normalize_mesh(points);

  std::vector<double> shifts(k, 0.0);
  for (std::size_t i = 1; i < k; ++i) shifts[i] = shifts[i - 1] + delta_[i - 1];
  std::vector<double> starts;
  for (const auto& m : maps_) starts.push_back(m.target_lo());
  starts.front() = 0.0;

  auto add = [&](std::size_t i, double inner, double outer) {
    AffineResidual r{std::vector<double>(k, 0.0), shifts[i] - outer};
    for (std::size_t j = 0; j < i; ++j) r.coeffs[j] = 1.0;
    r.coeffs[i] = inner;
    residuals_.push_back(std::move(r));
  };
  for (double x : points) {
    const auto i = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), x) - starts.begin()) - 1;
    const auto& m = maps_[i];
    const double y = x == starts[i] ? m.a : std::clamp(m.inverse(x), m.a, m.b);
    add(i, target_->eval(y), target_->eval(x));
    if (x > 0.0) {
      const auto il = static_cast<std::size_t>(std::lower_bound(starts.begin(), starts.end(), x) - starts.begin()) - 1;
      const auto& ml = maps_[il];
      const double yl = (il + 1 < k && x == starts[il + 1]) ? ml.b : std::clamp(ml.inverse(x), ml.a, ml.b);
      add(il, target_->eval_left_limit(yl), target_->eval_left_limit(x));
    }
  }
  // Left limit at 1 from the closed last cell.
  add(k - 1, target_->eval_left_limit(maps_.back().b), target_->eval_left_limit(1.0));
}

double collage_distance(const CollageProblem& problem, std::span<const double> p) {
  if (p.size() != problem.num_weights()) throw std::invalid_argument("collage_distance: weight length mismatch");
  double worst = 0.0;
  for (const auto& r : problem.residuals()) worst = std::max(worst, std::abs(r.at(p)));
  return worst;
}

namespace {

std::size_t count_active(const CollageProblem& problem, std::span<const double> p, double d_star, double tol) {
  std::size_t active = 0;
  for (const auto& r : problem.residuals()) {
    if (std::abs(std::abs(r.at(p)) - d_star) <= tol) ++active;
  }
  return active;
}

}  // namespace

namespace {

// minimize t  s.t.  -t <= r_m(p) <= t for the residuals in `rows`, p in C.
lp::Solution solve_restricted(const CollageProblem& problem, const std::vector<std::size_t>& rows) {
  const std::size_t k = problem.num_weights();
  lp::Problem lp;
  lp.num_vars = k + 1;  // weights, then the bound t
  lp.objective.assign(k + 1, 0.0);
  lp.objective[k] = 1.0;
  for (std::size_t m : rows) {
    const auto& r = problem.residuals()[m];
    lp::Constraint upper{r.coeffs, lp::Sense::kLessEqual, -r.constant};
    upper.coeffs.push_back(-1.0);
    lp::Constraint lower{r.coeffs, lp::Sense::kLessEqual, r.constant};
    for (double& v : lower.coeffs) v = -v;
    lower.coeffs.push_back(-1.0);
    lp.constraints.push_back(std::move(upper));
    lp.constraints.push_back(std::move(lower));
  }
  lp::Constraint budget{std::vector<double>(k + 1, 1.0), lp::Sense::kEqual, problem.weight_budget()};
  budget.coeffs[k] = 0.0;
  lp.constraints.push_back(std::move(budget));
  return lp::solve(lp);
}

}  // namespace

InverseSolution solve_inverse(const CollageProblem& problem, double tol) {
  constexpr std::size_t kInitialRows = 64;
  constexpr std::size_t kRowsPerRound = 32;
  constexpr double kViolationTol = 1e-13;
  const std::size_t k = problem.num_weights();
  const auto& residuals = problem.residuals();

  // Constraint generation: solve over a working set of residuals, then add the
  // most violated ones until none exceeds the current bound.
  std::vector<char> used(residuals.size(), 0);
  std::vector<std::size_t> rows;
  const std::vector<double> start(k, problem.weight_budget() / static_cast<double>(k));
  std::vector<std::size_t> order(residuals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto add_worst = [&](std::span<const double> p, double bound, std::size_t count) {
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t m : order) {
      const double excess = std::abs(residuals[m].at(p)) - bound;
      if (!used[m] && excess > kViolationTol) violated.emplace_back(excess, m);
    }
    const auto take = std::min(count, violated.size());
    std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take), violated.end(),
                      std::greater<>());
    for (std::size_t j = 0; j < take; ++j) {
      used[violated[j].second] = 1;
      rows.push_back(violated[j].second);
    }
    return take;
  };
  if (residuals.size() <= kInitialRows) {
    for (std::size_t m = 0; m < residuals.size(); ++m) used[m] = 1;
    rows = order;
  } else {
    add_worst(start, -1.0, kInitialRows);
  }

  int iterations = 0;
  std::vector<double> p;
  while (true) {
    const auto sol = solve_restricted(problem, rows);
    iterations += sol.iterations;
    if (sol.status != lp::Status::kOptimal) {
      throw std::runtime_error("solve_inverse: linear program did not reach an optimum");
    }
    p.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
    for (double& v : p) v = std::max(v, 0.0);
    if (add_worst(p, sol.x[k], kRowsPerRound) == 0) break;
  }

  InverseSolution out;
  out.p_star = std::move(p);
  out.d_star = collage_distance(problem, out.p_star);
  out.active_constraints = count_active(problem, out.p_star, out.d_star, tol);
  out.iterations = iterations;
  out.mode = problem.mode();
  return out;
}

std::vector<double> project_onto_simplex(std::span<const double> v, double budget) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - budget) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::max(v[j] - theta, 0.0);
  return out;
}

InverseSolution solve_inverse_subgradient(const CollageProblem& problem, int iterations) {
  const std::size_t k = problem.num_weights();
  const double budget = problem.weight_budget();
  std::vector<double> p(k, budget / static_cast<double>(k));
  std::vector<double> best = p;
  double best_value = collage_distance(problem, p);
  const double radius = budget * std::sqrt(2.0);

  for (int t = 1; t <= iterations; ++t) {
    const AffineResidual* worst = nullptr;
    double worst_abs = -1.0;
    double sign = 1.0;
    for (const auto& r : problem.residuals()) {
      const double value = r.at(p);
      if (std::abs(value) > worst_abs) {
        worst_abs = std::abs(value);
        worst = &r;
        sign = value >= 0.0 ? 1.0 : -1.0;
      }
    }
    double norm = 0.0;
    for (double g : worst->coeffs) norm += g * g;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    const double step = radius / (norm * std::sqrt(static_cast<double>(t)));
    for (std::size_t j = 0; j < k; ++j) p[j] -= step * sign * worst->coeffs[j];
    p = project_onto_simplex(p, budget);
    const double value = collage_distance(problem, p);
    if (value < best_value) {
      best_value = value;
      best = p;
    }
  }
  InverseSolution out;
  out.p_star = std::move(best);
  out.d_star = best_value;
  out.active_constraints = count_active(problem, out.p_star, out.d_star, 1e-8);
  out.iterations = iterations;
  out.mode = problem.mode();
  return out;
}

double collage_bound(double epsilon, double c) {
  if (!(c < 1.0) || c < 0.0) throw std::domain_error("collage_bound: c must lie in [0,1)");
  if (epsilon < 0.0) throw std::invalid_argument("collage_bound: epsilon must be non-negative");
  return epsilon / (1.0 - c);
}

std::pair<double, double> convexity_witness(const CollageProblem& problem, std::span<const double> p1,
                                            std::span<const double> p2, double lambda) {
  if (p1.size() != p2.size()) throw std::invalid_argument("convexity_witness: length mismatch");
  std::vector<double> mix(p1.size());
  for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = lambda * p1[j] + (1.0 - lambda) * p2[j];
  const double lhs = collage_distance(problem, mix);
  const double rhs = lambda * collage_distance(problem, p1) + (1.0 - lambda) * collage_distance(problem, p2);
  return {lhs, rhs};
}

}  // namespace ifsdf
