#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ifsdf {

/// A distribution function on [0,1]: non-decreasing, right-continuous,
/// F(0) = 0 and F(1) = 1.
///
/// Representations that are only piecewise smooth report their breakpoints so
/// that sup-norm distances can be evaluated exactly at jumps and kinks.
class DistributionFunction {
 public:
  virtual ~DistributionFunction() = default;

  virtual double eval(double x) const = 0;

  /// lim_{t -> x-} F(t). Defaults to eval(x), which is right for continuous
  /// representations.
  virtual double eval_left_limit(double x) const { return eval(x); }

  /// Sorted points in (0,1] where the function may jump or change slope.
  virtual std::vector<double> breakpoints() const { return {}; }

  /// Upper bound on breakpoints().size() that is cheap to compute. Nested
  /// operator images can have exponentially many breakpoints; callers check
  /// this before materializing them.
  virtual std::size_t breakpoint_count_bound() const { return 0; }

  double operator()(double x) const { return eval(x); }
};

using DistributionFunctionPtr = std::shared_ptr<const DistributionFunction>;

/// Continuous distribution function given by a callable.
class AnalyticDF final : public DistributionFunction {
 public:
  explicit AnalyticDF(std::function<double(double)> cdf, std::string name = "analytic");

  double eval(double x) const override;
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> cdf_;
  std::string name_;
};

/// F(x) = x.
DistributionFunctionPtr uniform_df();

/// Right-continuous step function (1/n) #{sample points <= x}.
class EmpiricalDF final : public DistributionFunction {
 public:
  /// The sample is sorted on construction. Throws std::invalid_argument for an
  /// empty sample, values outside the open interval (0,1), or duplicates.
  explicit EmpiricalDF(std::vector<double> sample);

  double eval(double x) const override;
  double eval_left_limit(double x) const override;
  std::vector<double> breakpoints() const override { return sample_; }
  std::size_t breakpoint_count_bound() const override { return sample_.size(); }

  const std::vector<double>& sample() const { return sample_; }
  std::size_t size() const { return sample_.size(); }

 private:
  std::vector<double> sample_;
};

EmpiricalDF edf_from_sample(std::vector<double> sample);

enum class Interpolation { kStep, kLinear };

/// Distribution function tabulated on a mesh 0 = x_0 < ... < x_m = 1.
///
/// Each mesh point carries its value and its left limit, so jumps are
/// represented exactly. Between x_j and x_{j+1} the function is either constant
/// at values[j] (step) or linear from values[j] to left_values[j+1] (linear).
class GridDF final : public DistributionFunction {
 public:
  /// Continuous (linear) or right-continuous step table without explicit left
  /// limits. For step mode left_values[j] = values[j-1].
  GridDF(std::vector<double> xs, std::vector<double> values, Interpolation mode);

  /// Full table with explicit left limits (left_values[0] is ignored).
  GridDF(std::vector<double> xs, std::vector<double> values, std::vector<double> left_values,
         Interpolation mode);

  /// Samples `f` (values and left limits) on `mesh`; 0 and 1 are added.
  static GridDF sample(const DistributionFunction& f, std::vector<double> mesh,
                       Interpolation mode = Interpolation::kLinear);

  double eval(double x) const override;
  double eval_left_limit(double x) const override;
  std::vector<double> breakpoints() const override;
  std::size_t breakpoint_count_bound() const override { return xs_.size(); }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& left_values() const { return left_values_; }
  Interpolation mode() const { return mode_; }

 private:
  void check() const;
  std::size_t segment(double x) const;

  std::vector<double> xs_;
  std::vector<double> values_;
  std::vector<double> left_values_;
  Interpolation mode_;
};

/// m equally spaced points 0, 1/(m-1), ..., 1. Requires m >= 2.
std::vector<double> uniform_mesh(std::size_t m);

/// Sorts and removes exact duplicates; clamps nothing.
void normalize_mesh(std::vector<double>& mesh);

inline constexpr std::size_t kDefaultSupGridSize = 20;
inline constexpr std::size_t kMaxSupBreakpoints = std::size_t{1} << 18;

/// max |F(x) - G(x)| over grid_size equally spaced points together with every
/// breakpoint of either argument (values and left limits). Exact when both
/// arguments are piecewise monotone/linear with all breakpoints reported;
/// otherwise a lower bound on the true supremum. Breakpoint sets larger than
/// kMaxSupBreakpoints are skipped.
double sup_distance(const DistributionFunction& f, const DistributionFunction& g,
                    std::size_t grid_size = kDefaultSupGridSize);

/// max |F(x) - G(x)| over exactly the given points, with no augmentation.
double sup_distance_at(const DistributionFunction& f, const DistributionFunction& g,
                       std::span<const double> points);

double eval_left_limit(const DistributionFunction& f, double x);

/// Smallest x in [0,1] with F(x) >= u, found by bisection to `tol`.
double quantile_by_bisection(const DistributionFunction& f, double u, double tol = 1e-12);

}  // namespace ifsdf
