#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "ifsdf/simulation.hpp"

using namespace ifsdf;

namespace {

TrialConfig config(BetaParams dist, std::size_t n, std::size_t trials, std::uint64_t seed) {
  TrialConfig c;
  c.distribution = dist;
  c.n = n;
  c.trials = trials;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("effective_k and validation") {
  auto c = config({2, 2}, 10, 1, 0);
  CHECK(c.effective_k() == 5);
  c.n = 11;
  CHECK(c.effective_k() == 6);
  c.n = 3;
  CHECK(c.effective_k() == 2);
  c.k = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config({2, 2}, 10, 0, 0);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config({2, 2}, 10, 1, 0);
  c.iterations = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config({2, 2}, 10, 1, 0);
  c.eval_points = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("run_trial: diagnostic mode compares F with itself") {
  auto c = config({1, 1}, 20, 1, 3);
  c.diagnostic_true_cdf = true;
  const auto r = run_trial(c, 0);
  CHECK(r.d_estimator == 0.0);
  CHECK(r.d_edf > 0.0);
  CHECK(r.ratio == 0.0);
}

TEST_CASE("run_trial is deterministic and bounded") {
  const auto c = config({2, 2}, 50, 1, 7);
  const auto a = run_trial(c, 4);
  CHECK(a == run_trial(c, 4));
  CHECK_FALSE(a == run_trial(c, 5));
  CHECK(a.d_estimator >= 0.0);
  CHECK(a.d_estimator <= 1.0);
  CHECK(a.d_edf > 0.0);
  CHECK(a.d_edf <= 1.0);
  CHECK(a.ratio == doctest::Approx(a.d_estimator / a.d_edf));

  auto exact = c;
  exact.exact_sup = true;
  const auto e = run_trial(exact, 4);
  CHECK(e.d_edf >= a.d_edf);
  CHECK(e.d_estimator >= a.d_estimator);
}

TEST_CASE("run_table: one trial is the trial itself") {
  const auto c = config({3, 5}, 30, 1, 11);
  const auto table = run_table({c});
  REQUIRE(table.rows.size() == 1);
  const auto& row = table.rows[0];
  const auto t = run_trial(c, 0);
  CHECK(row.trials.size() == 1);
  CHECK(row.mean_a == t.d_estimator);
  CHECK(row.mean_b == t.d_edf);
  CHECK(row.ratio_pct == doctest::Approx(100.0 * t.ratio));
  CHECK(row.mean_ratio_pct == doctest::Approx(100.0 * t.ratio));
  CHECK(row.k == 15);
  CHECK_THROWS_AS(run_table({}), std::invalid_argument);
}

TEST_CASE("run_table: aggregates lie within the per-trial range") {
  const auto table = run_table({config({2, 2}, 40, 12, 1), config({5, 3}, 25, 9, 2)}, 3);
  for (const auto& row : table.rows) {
    auto [amin, amax] = std::minmax_element(row.trials.begin(), row.trials.end(),
                                            [](auto& x, auto& y) { return x.d_estimator < y.d_estimator; });
    auto [bmin, bmax] = std::minmax_element(row.trials.begin(), row.trials.end(),
                                            [](auto& x, auto& y) { return x.d_edf < y.d_edf; });
    CHECK(row.mean_a >= amin->d_estimator);
    CHECK(row.mean_a <= amax->d_estimator);
    CHECK(row.mean_b >= bmin->d_edf);
    CHECK(row.mean_b <= bmax->d_edf);
  }
}

TEST_CASE("run_table: independent of the thread count") {
  const std::vector<TrialConfig> configs{config({2, 2}, 10, 7, 5), config({1, 1}, 100, 5, 5)};
  const auto one = table_to_csv(run_table(configs, 1));
  CHECK(one == table_to_csv(run_table(configs, 2)));
  CHECK(one == table_to_csv(run_table(configs, 8)));
}

TEST_CASE("table_to_csv layout") {
  SimulationTable table;
  TableRow row;
  row.config = config({2, 2}, 10, 30, 0);
  row.k = 5;
  row.mean_a = 0.2023249;
  row.mean_b = 0.24103;
  row.ratio_pct = 83.94123;
  table.rows.push_back(row);
  CHECK(table_to_csv(table) ==
        "dist,n,k,trials,iters,mean_a,mean_b,ratio_pct\n\"beta:2,2\",10,5,30,4,0.20232,0.24103,83.941\n");
}
