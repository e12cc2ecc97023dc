#include "ifsdf/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ifsdf {

namespace {

void check_open_unit_sample(const std::vector<double>& sorted) {
  for (double v : sorted) {
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("sample value outside (0,1)");
  }
}

// Maps [0,1) onto consecutive cells of the padded abscissae.
IfsSystem cells_to_system(const std::vector<double>& abscissae, std::vector<double> weights) {
  IfsSystem system;
  for (std::size_t i = 1; i < abscissae.size(); ++i) {
    system.maps.push_back(AffineMap::onto(0.0, 1.0, abscissae[i - 1], abscissae[i]));
  }
  system.maps.front().intercept = 0.0;
  system.p = std::move(weights);
  system.delta.assign(system.maps.size() - 1, 0.0);
  return system;
}

}  // namespace

IfsSystem edf_ifs(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  check_open_unit_sample(sample);
  if (std::adjacent_find(sample.begin(), sample.end()) != sample.end()) {
    throw std::invalid_argument("edf_ifs: duplicate sample values");
  }
  const std::size_t n = sample.size();
  if (n < 2) throw std::invalid_argument("edf_ifs: need at least two sample points");

  const double nd = static_cast<double>(n);
  IfsSystem system;
  system.identity_partition = true;
  double lo = 0.0;
  for (double x : sample) {
    system.maps.push_back(AffineMap::identity(lo, x));
    lo = x;
  }
  system.maps.push_back(AffineMap::identity(lo, 1.0));
  system.p.assign(n + 1, 1.0 / nd);
  system.p[0] = 0.0;
  system.delta.assign(n, -1.0 / (nd * nd));
  system.delta[0] = (nd - 1.0) / (nd * nd);
  return system;
}

QuantileGrid quantile_grid(const DistributionFunction& f, std::size_t n_points) {
  if (n_points < 1) throw std::invalid_argument("quantile_grid: need at least one point");
  QuantileGrid grid;
  grid.abscissae.push_back(0.0);
  for (std::size_t i = 1; i <= n_points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n_points + 1);
    const double x = quantile_by_bisection(f, u, 1e-12);
    if (!(x > grid.abscissae.back()) || !(x < 1.0)) {
      throw std::invalid_argument("quantile_grid: quantiles not strictly increasing; F must be continuous and increasing");
    }
    grid.levels.push_back(u);
    grid.abscissae.push_back(x);
  }
  grid.abscissae.push_back(1.0);
  return grid;
}

IfsSystem interpolating_ifs(const DistributionFunction& f, std::span<const double> points) {
  std::vector<double> xs{0.0};
  for (double x : points) {
    if (!(x > xs.back() && x < 1.0)) throw std::invalid_argument("interpolating_ifs: points must increase inside (0,1)");
    xs.push_back(x);
  }
  xs.push_back(1.0);
  std::vector<double> weights;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double w = f.eval(xs[i]) - f.eval(xs[i - 1]);
    if (w < 0.0) throw std::invalid_argument("interpolating_ifs: F decreases");
    weights.push_back(w);
  }
  return cells_to_system(xs, std::move(weights));
}

IfsSystem quantile_ifs(const DistributionFunction& f, std::size_t n_points) {
  const auto grid = quantile_grid(f, n_points);
  const std::span<const double> interior(grid.abscissae.data() + 1, grid.abscissae.size() - 2);
  return interpolating_ifs(f, interior);
}

double empirical_quantile(std::span<const double> sorted_sample, double level) {
  if (sorted_sample.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("empirical_quantile: level outside (0,1)");
  const double n = static_cast<double>(sorted_sample.size());
  double rank = level * n;
  // Snap ranks that are integers up to rounding, e.g. (1/3) * 3.
  const double nearest = std::round(rank);
  if (std::abs(rank - nearest) <= 1e-9 * std::max(1.0, n)) rank = nearest;
  const auto index = static_cast<std::size_t>(std::clamp(std::ceil(rank), 1.0, n));
  return sorted_sample[index - 1];
}

QuantileGrid empirical_quantile_grid(std::vector<double> sample, std::size_t k) {
  std::sort(sample.begin(), sample.end());
  check_open_unit_sample(sample);
  const std::size_t n = sample.size();
  if (k < 2) throw std::invalid_argument("quantile estimator: k must be at least 2");
  if (k >= n) throw std::invalid_argument("quantile estimator: k must be smaller than the sample size");
  QuantileGrid grid;
  grid.abscissae.push_back(0.0);
  for (std::size_t i = 1; i < k; ++i) {
    // ceil(i n / k) in exact integer arithmetic.
    const std::size_t rank = (i * n + k - 1) / k;
    grid.levels.push_back(static_cast<double>(i) / static_cast<double>(k));
    grid.abscissae.push_back(sample[rank - 1]);
  }
  grid.abscissae.push_back(1.0);
  return grid;
}

IfsSystem quantile_estimator(std::vector<double> sample, std::size_t k) {
  const auto grid = empirical_quantile_grid(std::move(sample), k);
  const double w = 1.0 / static_cast<double>(k);
  std::vector<double> cells{0.0};
  std::vector<double> weights;
  for (std::size_t i = 1; i < grid.abscissae.size(); ++i) {
    if (grid.abscissae[i] > cells.back()) {
      cells.push_back(grid.abscissae[i]);
      weights.push_back(w);
    } else {
      weights.back() += w;
    }
  }
  return cells_to_system(cells, std::move(weights));
}

}  // namespace ifsdf
