#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ifsdf/simplex.hpp"

using namespace ifsdf::lp;

TEST_CASE("textbook LP") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18: optimum (2, 6), value 36.
  Problem p;
  p.num_vars = 2;
  p.objective = {-3.0, -5.0};
  p.constraints = {{{1.0, 0.0}, Sense::kLessEqual, 4.0},
                   {{0.0, 2.0}, Sense::kLessEqual, 12.0},
                   {{3.0, 2.0}, Sense::kLessEqual, 18.0}};
  const auto s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(-36.0).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.x[1] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("equality and >= rows need phase one") {
  // min x + y s.t. x + y >= 2, x - y = 1: optimum (1.5, 0.5).
  Problem p;
  p.num_vars = 2;
  p.objective = {1.0, 1.0};
  p.constraints = {{{1.0, 1.0}, Sense::kGreaterEqual, 2.0}, {{1.0, -1.0}, Sense::kEqual, 1.0}};
  const auto s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.x[0] == doctest::Approx(1.5));
  CHECK(s.x[1] == doctest::Approx(0.5));

  // Negative right-hand side: -x <= -3 means x >= 3.
  Problem q;
  q.num_vars = 1;
  q.objective = {1.0};
  q.constraints = {{{-1.0}, Sense::kLessEqual, -3.0}};
  const auto t = solve(q);
  REQUIRE(t.status == Status::kOptimal);
  CHECK(t.x[0] == doctest::Approx(3.0));
}

TEST_CASE("infeasible and unbounded") {
  Problem p;
  p.num_vars = 1;
  p.objective = {1.0};
  p.constraints = {{{1.0}, Sense::kLessEqual, 1.0}, {{1.0}, Sense::kGreaterEqual, 2.0}};
  CHECK(solve(p).status == Status::kInfeasible);

  Problem q;
  q.num_vars = 2;
  q.objective = {-1.0, 0.0};
  q.constraints = {{{1.0, -1.0}, Sense::kLessEqual, 1.0}};
  CHECK(solve(q).status == Status::kUnbounded);
}

TEST_CASE("degenerate problem terminates") {
  // Many redundant constraints through the optimum vertex.
  Problem p;
  p.num_vars = 2;
  p.objective = {-1.0, -1.0};
  for (int i = 0; i < 30; ++i) {
    const double w = 1.0 + i * 0.01;
    p.constraints.push_back({{w, 1.0}, Sense::kLessEqual, w});
    p.constraints.push_back({{1.0, w}, Sense::kLessEqual, w});
  }
  const auto s = solve(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective <= -1.0 + 1e-9);
}

TEST_CASE("malformed problem") {
  Problem p;
  p.num_vars = 2;
  p.objective = {1.0};
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
}

TEST_CASE("property: optimum beats random feasible points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    // Random packing LP: A >= 0, b > 0, so 0 is feasible and the region is bounded.
    Problem p;
    p.num_vars = 2 + rep % 4;
    for (std::size_t j = 0; j < p.num_vars; ++j) p.objective.push_back(-u(rng));
    for (int i = 0; i < 6; ++i) {
      Constraint c;
      for (std::size_t j = 0; j < p.num_vars; ++j) c.coeffs.push_back(0.1 + u(rng));
      c.rhs = 0.5 + u(rng);
      p.constraints.push_back(c);
    }
    const auto s = solve(p);
    REQUIRE(s.status == Status::kOptimal);
    for (const auto& c : p.constraints) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < p.num_vars; ++j) lhs += c.coeffs[j] * s.x[j];
      CHECK(lhs <= c.rhs + 1e-9);
    }
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(p.num_vars);
      for (auto& v : x) v = u(rng);
      double scale = 1.0;
      for (const auto& c : p.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < p.num_vars; ++j) lhs += c.coeffs[j] * x[j];
        scale = std::min(scale, c.rhs / lhs);
      }
      double value = 0.0;
      for (std::size_t j = 0; j < p.num_vars; ++j) value += p.objective[j] * x[j] * scale;
      CHECK(s.objective <= value + 1e-9);
    }
  }
}
