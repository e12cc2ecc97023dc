#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ifsdf/distfn.hpp"
#include "ifsdf/ifs.hpp"

namespace ifsdf {

/// Probability levels and the abscissae they induce, padded with 0 and 1.
struct QuantileGrid {
  std::vector<double> levels;     // interior levels, strictly increasing in (0,1)
  std::vector<double> abscissae;  // 0, x_1, ..., x_m, 1
};

/// Identity-partition system whose fixed point is exactly the empirical
/// distribution function of `sample`: cells [x_{i-1}, x_i) with x_0 = 0 and
/// x_{n+1} = 1, p = (0, 1/n, ..., 1/n), delta = ((n-1)/n^2, -1/n^2, ..., -1/n^2).
/// Requires n >= 2 distinct values in (0,1).
IfsSystem edf_ifs(std::vector<double> sample);

/// Levels u_i = i/(n_points+1) and x_i = F^{-1}(u_i) by bisection.
QuantileGrid quantile_grid(const DistributionFunction& f, std::size_t n_points);

/// System T_F with maps [0,1) -> [x_{i-1}, x_i) and weights F(x_i) - F(x_{i-1})
/// at the quantile abscissae; every iterate interpolates F at the x_i.
IfsSystem quantile_ifs(const DistributionFunction& f, std::size_t n_points);

/// Same construction for arbitrary strictly increasing interior points.
IfsSystem interpolating_ifs(const DistributionFunction& f, std::span<const double> points);

/// Left-continuous empirical quantile: the ceil(level * n)-th order statistic
/// (1-indexed) of a sorted sample.
double empirical_quantile(std::span<const double> sorted_sample, double level);

/// Empirical quantiles q_i of order i/k, i = 1..k-1, padded with q_0 = 0, q_k = 1.
QuantileGrid empirical_quantile_grid(std::vector<double> sample, std::size_t k);

/// Estimator system with maps [0,1) -> [q_{i-1}, q_i), weights 1/k and zero
/// offsets. Coincident quantiles merge into one cell carrying the summed
/// weight. Requires 2 <= k < n.
IfsSystem quantile_estimator(std::vector<double> sample, std::size_t k);

}  // namespace ifsdf
