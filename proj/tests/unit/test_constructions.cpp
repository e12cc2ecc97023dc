#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ifsdf/constructions.hpp"
#include "support/generators.hpp"

using namespace ifsdf;
using ifsdf::testing::Rng;

namespace {

double total_mass(const IfsSystem& s) {
  return std::accumulate(s.p.begin(), s.p.end(), 0.0) + std::accumulate(s.delta.begin(), s.delta.end(), 0.0);
}

std::vector<double> breakpoint_mesh(const std::vector<double>& sample) {
  auto mesh = uniform_mesh(33);
  mesh.insert(mesh.end(), sample.begin(), sample.end());
  return mesh;
}

}  // namespace

TEST_CASE("edf_ifs: two points") {
  const auto s = edf_ifs({0.7, 0.3});
  REQUIRE(s.size() == 3);
  CHECK(s.identity_partition);
  CHECK(s.p == std::vector<double>{0.0, 0.5, 0.5});
  CHECK(s.delta == std::vector<double>{0.25, -0.25});
  CHECK(s.maps[1].a == 0.3);
  CHECK(s.maps[1].b == 0.7);
  CHECK(validate(s).empty());

  const auto fp = fixed_point(s, 1e-12, breakpoint_mesh({0.3, 0.7}));
  CHECK(fp.function.eval(0.1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fp.function.eval(0.3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fp.function.eval(0.69) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fp.function.eval(0.7) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("edf_ifs: errors") {
  CHECK_THROWS_AS(edf_ifs({0.5}), std::invalid_argument);
  CHECK_THROWS_AS(edf_ifs({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(edf_ifs({0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(edf_ifs({0.5, 1.2}), std::invalid_argument);
}

TEST_CASE("edf_ifs: n = 10 fixed point is the e.d.f.") {
  Rng rng(8);
  const auto sample = testing::random_sample(rng, 10);
  const auto fp = fixed_point(edf_ifs(sample), 1e-12, breakpoint_mesh(sample));
  CHECK(sup_distance(fp.function, EmpiricalDF(sample), 2) <= 1e-10);
}

TEST_CASE("quantile_ifs: uniform target") {
  const auto s = quantile_ifs(*uniform_df(), 3);
  REQUIRE(s.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.p[i] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.maps[i].target_lo() == doctest::Approx(0.25 * static_cast<double>(i)).epsilon(1e-12));
  }
  CHECK(validate(s).empty());
  const auto fp = fixed_point(s, 1e-12, uniform_mesh(41));
  CHECK(sup_distance(fp.function, *uniform_df(), 101) <= 1e-11);
}

TEST_CASE("quantile_ifs: Beta(2,2) interpolates its quartiles") {
  const AnalyticDF beta22([](double x) { return 3 * x * x - 2 * x * x * x; });
  const auto grid = quantile_grid(beta22, 3);
  // Roots of 3x^2 - 2x^3 = i/4 from a 30-digit solver.
  CHECK(grid.abscissae[1] == doctest::Approx(0.326351822333069651).epsilon(1e-11));
  CHECK(grid.abscissae[2] == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(grid.abscissae[3] == doctest::Approx(0.673648177666930349).epsilon(1e-11));
  CHECK(grid.levels == std::vector<double>{0.25, 0.5, 0.75});

  const auto s = quantile_ifs(beta22, 3);
  const auto fp = fixed_point(s, 1e-12, uniform_mesh(41));
  for (std::size_t i = 1; i <= 3; ++i) {
    CHECK(fp.function.eval(grid.abscissae[i]) == doctest::Approx(0.25 * static_cast<double>(i)).epsilon(1e-11));
  }
}

TEST_CASE("quantile_grid rejects step targets") {
  CHECK_THROWS_AS(quantile_grid(EmpiricalDF({0.5}), 3), std::invalid_argument);
  CHECK_THROWS_AS(quantile_grid(*uniform_df(), 0), std::invalid_argument);
}

TEST_CASE("empirical_quantile") {
  const std::vector<double> s{0.2, 0.4, 0.9};
  CHECK(empirical_quantile(s, 1.0 / 3.0) == 0.2);
  CHECK(empirical_quantile(s, 0.34) == 0.4);
  CHECK(empirical_quantile(s, 0.999999) == 0.9);
  CHECK(empirical_quantile(std::vector<double>{0.5}, 0.5) == 0.5);
  CHECK_THROWS_AS(empirical_quantile(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_quantile(s, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST_CASE("quantile_estimator: median split") {
  const std::vector<double> sample{0.9, 0.1, 0.6, 0.3, 0.45};
  const auto s = quantile_estimator(sample, 2);
  REQUIRE(s.size() == 2);
  CHECK(s.p == std::vector<double>{0.5, 0.5});
  CHECK(s.delta == std::vector<double>{0.0});
  CHECK(s.maps[1].target_lo() == doctest::Approx(0.45));
  CHECK(validate(s).empty());
  const auto fp = fixed_point(s, 1e-12, uniform_mesh(21));
  CHECK(fp.function.eval(0.45) == doctest::Approx(0.5).epsilon(1e-11));

  CHECK_THROWS_AS(quantile_estimator(sample, 1), std::invalid_argument);
  CHECK_THROWS_AS(quantile_estimator(sample, 5), std::invalid_argument);
}

TEST_CASE("quantile_estimator merges coincident quantiles") {
  // n = 6, k = 5: ranks ceil(6i/5) = 2, 3, 4, 5; only distinct values split cells.
  const std::vector<double> sample{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto full = quantile_estimator(sample, 5);
  CHECK(full.size() == 5);
  const auto grid = empirical_quantile_grid(sample, 3);
  CHECK(grid.abscissae == std::vector<double>{0.0, 0.2, 0.4, 1.0});

  // A sample with a repeated value collapses a cell and keeps the mass.
  const std::vector<double> repeated{0.3, 0.3, 0.3, 0.3, 0.8};
  const auto merged = quantile_estimator(repeated, 4);
  CHECK(merged.size() == 2);
  CHECK(merged.p[0] == doctest::Approx(0.75));
  CHECK(merged.p[1] == doctest::Approx(0.25));
  CHECK(validate(merged).empty());
}

TEST_CASE("property: e.d.f. exactness") {
  Rng rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const auto sample = testing::random_sample(rng, 2 + rng() % 99);
    const auto fp = fixed_point(edf_ifs(sample), 1e-12, breakpoint_mesh(sample));
    CHECK(sup_distance(fp.function, EmpiricalDF(sample), 2) <= 1e-10);
  }
}

TEST_CASE("property: quantile interpolation for every iterate and start") {
  Rng rng(13);
  const AnalyticDF target([](double x) { return 10 * std::pow(x, 3) - 15 * std::pow(x, 4) + 6 * std::pow(x, 5); });
  for (std::size_t n_points : {1u, 3u, 9u}) {
    const auto grid = quantile_grid(target, n_points);
    const auto s = quantile_ifs(target, n_points);
    for (int rep = 0; rep < 5; ++rep) {
      const auto u0 = testing::random_exact_df(rng);
      for (int iters = 1; iters <= 4; ++iters) {
        const auto g = iterate(s, u0, iters, grid.abscissae);
        for (std::size_t i = 1; i + 1 < grid.abscissae.size(); ++i) {
          CHECK(std::abs(g.eval(grid.abscissae[i]) - target.eval(grid.abscissae[i])) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("property: estimator interpolation and normalization") {
  Rng rng(14);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 5 + rng() % 60;
    const auto sample = testing::random_sample(rng, n);
    const std::size_t k = 2 + rng() % (n - 2);
    const auto s = quantile_estimator(sample, k);
    CHECK(validate(s).empty());
    CHECK(std::abs(total_mass(s) - 1.0) <= 1e-12);
    const auto grid = empirical_quantile_grid(sample, k);
    const auto fp = fixed_point(s, 1e-12, grid.abscissae);
    for (std::size_t i = 1; i < k; ++i) {
      CHECK(std::abs(fp.function.eval(grid.abscissae[i]) - grid.levels[i - 1]) <= 1e-10);
    }
    const auto e = edf_ifs(sample);
    CHECK(validate(e).empty());
    CHECK(std::abs(total_mass(e) - 1.0) <= 1e-12);
  }
}
