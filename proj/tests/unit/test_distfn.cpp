#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ifsdf/distfn.hpp"

using namespace ifsdf;

namespace {

std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s;
  while (s.size() < n) {
    const double v = u(rng);
    if (v > 0.0) s.push_back(v);
  }
  return s;
}

}  // namespace

TEST_CASE("edf_from_sample counts points at or below x") {
  const auto single = edf_from_sample({0.5});
  CHECK(single.eval(0.4) == 0.0);
  CHECK(single.eval(0.5) == 1.0);

  CHECK(edf_from_sample({0.3, 0.7}).eval(0.5) == 0.5);
  CHECK(edf_from_sample({0.9, 0.2, 0.4}).eval(0.4) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(single.eval(0.0) == 0.0);
  CHECK(single.eval(1.0) == 1.0);
}

TEST_CASE("edf_from_sample rejects bad samples") {
  CHECK_THROWS_AS(edf_from_sample({}), std::invalid_argument);
  CHECK_THROWS_AS(edf_from_sample({0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(edf_from_sample({0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(edf_from_sample({0.2, 0.5, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(edf_from_sample({std::nan("")}), std::invalid_argument);
}

TEST_CASE("eval_left_limit") {
  const EmpiricalDF half({0.5});
  CHECK(eval_left_limit(half, 0.5) == 0.0);
  CHECK(eval_left_limit(*uniform_df(), 0.5) == 0.5);
  CHECK(eval_left_limit(EmpiricalDF({0.3, 0.7}), 0.7) == 0.5);
  CHECK_THROWS_AS(eval_left_limit(half, 0.0), std::invalid_argument);
}

TEST_CASE("sup_distance examples") {
  const auto u = uniform_df();
  CHECK(sup_distance(*u, *u) == 0.0);
  // Approaching 0.5 from the left the step is 0 and the line is 0.5.
  CHECK(sup_distance(*u, EmpiricalDF({0.5})) == doctest::Approx(0.5).epsilon(1e-15));

  // Dense brute force on 3x^2 - 2x^3 - x gives sqrt(3)/18 at x = 1/2 +- sqrt(3)/6;
  // 20 equally spaced points fall short of it, a fine grid gets close.
  const AnalyticDF beta22([](double x) { return 3 * x * x - 2 * x * x * x; });
  const double coarse = sup_distance(beta22, *u);
  const double fine = sup_distance(beta22, *u, 200001);
  CHECK(coarse <= std::sqrt(3.0) / 18.0);
  CHECK(fine == doctest::Approx(std::sqrt(3.0) / 18.0).epsilon(1e-9));
  CHECK_THROWS_AS(sup_distance(*u, *u, 1), std::invalid_argument);
}

TEST_CASE("sup_distance is exact for step against linear tables") {
  // Step at 0.25 of height 1 against the line: worst gap is at 0.25- (0.25).
  const GridDF step({0.0, 0.25, 1.0}, {0.0, 1.0, 1.0}, Interpolation::kStep);
  const GridDF line({0.0, 1.0}, {0.0, 1.0}, Interpolation::kLinear);
  CHECK(sup_distance(step, line, 2) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("GridDF evaluation and validation") {
  const GridDF g({0.0, 0.5, 1.0}, {0.0, 0.8, 1.0}, {0.0, 0.4, 1.0}, Interpolation::kLinear);
  CHECK(g.eval(0.25) == doctest::Approx(0.2));
  CHECK(g.eval(0.5) == 0.8);
  CHECK(g.eval_left_limit(0.5) == 0.4);
  CHECK(g.eval(0.75) == doctest::Approx(0.9));
  CHECK(g.eval_left_limit(1.0) == 1.0);

  CHECK_THROWS_AS(GridDF({0.0, 1.0}, {0.0, 0.9}, Interpolation::kLinear), std::invalid_argument);
  CHECK_THROWS_AS(GridDF({0.0, 0.5, 0.5, 1.0}, {0.0, 0.5, 0.5, 1.0}, Interpolation::kLinear), std::invalid_argument);
  CHECK_THROWS_AS(GridDF({0.0, 0.3, 0.5, 1.0}, {0.0, 0.6, 0.5, 1.0}, Interpolation::kLinear), std::invalid_argument);
  CHECK_THROWS_AS(GridDF({0.0, 0.5, 1.0}, {0.0, 0.7, 0.6}, Interpolation::kLinear), std::invalid_argument);
}

TEST_CASE("GridDF::sample keeps jumps of a step function") {
  const EmpiricalDF e({0.3, 0.7});
  const auto g = GridDF::sample(e, {0.3, 0.7});
  CHECK(sup_distance(g, e, 2) == 0.0);
  CHECK(g.eval(0.5) == 0.5);
}

TEST_CASE("quantile_by_bisection inverts a continuous CDF") {
  const AnalyticDF beta22([](double x) { return 3 * x * x - 2 * x * x * x; });
  // Root of 3x^2 - 2x^3 = 1/4 from a 30-digit solver.
  CHECK(quantile_by_bisection(beta22, 0.25) == doctest::Approx(0.326351822333069651).epsilon(1e-11));
  CHECK_THROWS_AS(quantile_by_bisection(beta22, 1.0), std::invalid_argument);
}

TEST_CASE("property: monotone, symmetric, triangle inequality") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const EmpiricalDF f(random_sample(rng, 1 + rep % 17));
    const EmpiricalDF g(random_sample(rng, 1 + rep % 5));
    const EmpiricalDF h(random_sample(rng, 2 + rep % 9));
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    CHECK(f.eval(a) <= f.eval(b));
    const double n = static_cast<double>(f.size());
    CHECK(std::abs(f.eval(a) * n - std::round(f.eval(a) * n)) < 1e-12);

    const double fg = sup_distance(f, g);
    CHECK(fg == sup_distance(g, f));
    CHECK(sup_distance(f, f) == 0.0);
    CHECK(sup_distance(f, h) <= fg + sup_distance(g, h) + 1e-15);
  }
}
