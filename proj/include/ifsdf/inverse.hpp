#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ifsdf/distfn.hpp"
#include "ifsdf/ifs.hpp"

namespace ifsdf {

enum class CollageMode {
  kAuto,            // exact endpoints for identity partitions, grid otherwise
  kExactEndpoints,  // identity partitions only
  kGrid,
};

std::string to_string(CollageMode mode);

inline constexpr std::size_t kDefaultCollageGrid = 512;

/// The residual (T_p F)(x) - F(x) at one evaluation point, which is affine in p.
struct AffineResidual {
  std::vector<double> coeffs;
  double constant = 0.0;

  double at(std::span<const double> p) const;
};

/// Inverse problem for fixed maps and offsets: choose weights p in
/// C = {p >= 0, sum p = 1 - sum delta} minimizing D(p) = d_sup(T_p F, F).
class CollageProblem {
 public:
  CollageProblem(DistributionFunctionPtr target, std::vector<AffineMap> maps, std::vector<double> delta,
                 CollageMode mode = CollageMode::kAuto, std::size_t grid_size = kDefaultCollageGrid);

  /// Identity maps on the cells [0,x_1), [x_1,x_2), ..., [x_m,1] of the given
  /// interior cut points.
  static CollageProblem identity_partition(DistributionFunctionPtr target, std::vector<double> cuts,
                                           std::vector<double> delta = {});

  std::size_t num_weights() const { return maps_.size(); }
  /// 1 - sum delta, the total weight every feasible p carries.
  double weight_budget() const { return budget_; }
  CollageMode mode() const { return mode_; }
  bool is_identity_partition() const { return identity_; }
  const std::vector<AffineMap>& maps() const { return maps_; }
  const std::vector<double>& delta() const { return delta_; }
  const DistributionFunction& target() const { return *target_; }
  const std::vector<AffineResidual>& residuals() const { return residuals_; }

  /// IfsSystem with these maps and offsets and the given weights (not validated).
  IfsSystem system(std::vector<double> p) const;

 private:
  void build_exact();
  void build_grid(std::size_t grid_size);

  DistributionFunctionPtr target_;
  std::vector<AffineMap> maps_;
  std::vector<double> delta_;
  CollageMode mode_;
  bool identity_;
  double budget_;
  std::vector<AffineResidual> residuals_;
};

/// D(p) for any p in R^k. Throws std::invalid_argument on a length mismatch.
double collage_distance(const CollageProblem& problem, std::span<const double> p);

struct InverseSolution {
  std::vector<double> p_star;
  double d_star = 0.0;
  /// Residuals whose |value| is within the activity tolerance of d_star.
  std::size_t active_constraints = 0;
  int iterations = 0;
  CollageMode mode = CollageMode::kExactEndpoints;
};

/// Solves min_{p in C} D(p) as the linear program
///   minimize t  s.t.  -t <= r_m(p) <= t for every residual, p in C.
/// `tol` is the activity tolerance used to count active residuals.
InverseSolution solve_inverse(const CollageProblem& problem, double tol = 1e-8);

/// Projected subgradient descent with steps proportional to 1/sqrt(t); an
/// independent cross-check for small problems.
InverseSolution solve_inverse_subgradient(const CollageProblem& problem, int iterations = 100000);

/// Euclidean projection onto {p >= 0, sum p = budget}.
std::vector<double> project_onto_simplex(std::span<const double> v, double budget);

/// epsilon / (1 - c): bound on d_sup(F, fixed point of T_p) when D(p) <= epsilon.
double collage_bound(double epsilon, double c);

/// (D(lambda p1 + (1-lambda) p2), lambda D(p1) + (1-lambda) D(p2)).
std::pair<double, double> convexity_witness(const CollageProblem& problem, std::span<const double> p1,
                                            std::span<const double> p2, double lambda);

}  // namespace ifsdf
