#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ifsdf/distfn.hpp"

namespace ifsdf {

/// Increasing affine map w(x) = slope * x + intercept from the source interval
/// [a,b) onto its image [c,d).
struct AffineMap {
  double a = 0.0;
  double b = 1.0;
  double slope = 1.0;
  double intercept = 0.0;

  static AffineMap identity(double a, double b) { return {a, b, 1.0, 0.0}; }
  /// The map sending [a,b) onto [c,d).
  static AffineMap onto(double a, double b, double c, double d);

  double forward(double x) const { return slope * x + intercept; }
  double inverse(double y) const { return (y - intercept) / slope; }
  double target_lo() const { return forward(a); }
  double target_hi() const { return forward(b); }
  bool is_identity() const { return slope == 1.0 && intercept == 0.0; }

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

/// Maps, weights and offsets of the operator
///
///   (T F)(x) = p_i F(w_i^{-1}(x)) + sum_{j<i} p_j + sum_{j<i} delta_j,   x in w_i([a_i,b_i)),
///
/// with (T F)(1) = 1. Target intervals are ordered left to right.
struct IfsSystem {
  std::vector<AffineMap> maps;
  std::vector<double> p;
  std::vector<double> delta;  // size maps.size() - 1
  bool identity_partition = false;

  std::size_t size() const { return maps.size(); }

  friend bool operator==(const IfsSystem&, const IfsSystem&) = default;
};

struct Violation {
  enum class Kind {
    kShape,          // vector lengths inconsistent
    kMap,            // non-increasing map or source outside [0,1]
    kCoverage,       // targets do not tile [0,1) in order
    kNormalization,  // sum p + sum delta != 1
    kWeight,         // negative p_i
    kOffset,         // offset outside the admissible regime
  };
  Kind kind;
  std::string message;
};

/// Every violated structural and regime condition; empty when the system is valid.
std::vector<Violation> validate(const IfsSystem& system);

/// Throws std::invalid_argument listing all violations.
void require_valid(const IfsSystem& system);

/// Structural conditions only (maps and offsets), independent of the weights.
std::vector<Violation> validate_structure(const IfsSystem& system);

/// sum_{j<i} p_j + sum_{j<i} delta_j for every i.
std::vector<double> cumulative_offsets(const IfsSystem& system);

/// Index of the map whose half-open target contains x; the last map for x >= 1.
std::size_t locate(const IfsSystem& system, double x);

/// max_i p_i.
double contractivity(const IfsSystem& system);

/// Lazy image T F of a distribution function under a validated system.
class OperatorImage final : public DistributionFunction {
 public:
  OperatorImage(std::shared_ptr<const IfsSystem> system, DistributionFunctionPtr inner);

  double eval(double x) const override;
  double eval_left_limit(double x) const override;
  std::vector<double> breakpoints() const override;
  std::size_t breakpoint_count_bound() const override;

 private:
  double preimage(std::size_t i, double x) const;
  // Smallest double in cell i whose preimage is at least y.
  double image_of(std::size_t i, double y) const;

  std::shared_ptr<const IfsSystem> system_;
  DistributionFunctionPtr inner_;
  std::vector<double> offsets_;
  std::vector<double> starts_;
};

/// T F for a valid system; throws std::invalid_argument otherwise.
DistributionFunctionPtr apply(const IfsSystem& system, DistributionFunctionPtr f);

inline constexpr std::size_t kDefaultMeshCap = std::size_t{1} << 12;

/// T^s u0 tabulated on `mesh` plus all target endpoints. Exact breakpoints of
/// T^s u0 are added while they number at most `mesh_cap`.
GridDF iterate(const IfsSystem& system, DistributionFunctionPtr u0, int s, std::vector<double> mesh,
               std::size_t mesh_cap = kDefaultMeshCap);

struct FixedPointResult {
  GridDF function;
  int iterations = 0;
  /// Upper bound on d_sup(function, true fixed point).
  double error_bound = 0.0;
};

/// Banach iteration from the uniform distribution until c/(1-c) d_sup(Tu, u)
/// <= tol. Throws std::domain_error when contractivity(system) >= 1.
FixedPointResult fixed_point(const IfsSystem& system, double tol, std::vector<double> mesh,
                             std::size_t mesh_cap = kDefaultMeshCap, int max_iterations = 100000);

/// Fixed point evaluated pointwise by unrolling F = T F backwards until the
/// accumulated weight drops below `tol`. Independent of mesh iteration.
class IfsAttractorDF final : public DistributionFunction {
 public:
  IfsAttractorDF(IfsSystem system, double tol = 1e-14);

  double eval(double x) const override;
  double eval_left_limit(double x) const override;

 private:
  double unroll(double x, bool left) const;

  IfsSystem system_;
  std::vector<double> offsets_;
  double tol_;
};

/// (1/(1-c)) sum_j |p_j - p*_j|: bound on the distance between the fixed
/// points of two systems that differ only in their weights.
double perturbation_bound(std::span<const double> p, std::span<const double> p_star, double c);

}  // namespace ifsdf
