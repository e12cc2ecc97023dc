#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifsdf/randstats.hpp"

namespace ifsdf {

/// One row of the estimator-vs-e.d.f. comparison.
struct TrialConfig {
  BetaParams distribution{2.0, 2.0};
  std::size_t n = 10;
  /// Quantile count; nullopt selects ceil(n/2) capped at n-1.
  std::optional<std::size_t> k;
  int iterations = 4;
  std::size_t eval_points = 20;
  std::size_t trials = 30;
  std::uint64_t seed = 0;
  /// Measure sup distances on the evaluation points plus all breakpoints.
  bool exact_sup = false;
  /// Replace the estimator by the true F (checks the harness itself).
  bool diagnostic_true_cdf = false;

  std::size_t effective_k() const;
  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;
};

struct TrialResult {
  double d_estimator = 0.0;  // (a)
  double d_edf = 0.0;        // (b)
  double ratio = 0.0;        // (a)/(b), 0 when (b) is 0

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

TrialResult run_trial(const TrialConfig& config, std::size_t trial_index);

struct TableRow {
  TrialConfig config;
  std::size_t k = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  /// 100 * mean(a) / mean(b).
  double ratio_pct = 0.0;
  /// 100 * mean of per-trial ratios.
  double mean_ratio_pct = 0.0;
  std::vector<TrialResult> trials;
};

struct SimulationTable {
  std::vector<TableRow> rows;
};

/// Runs every configuration's trials on up to `threads` workers. Trials are
/// merged by index, so the result does not depend on the thread count.
SimulationTable run_table(const std::vector<TrialConfig>& configs, unsigned threads = 1);

/// Header `dist,n,k,trials,iters,mean_a,mean_b,ratio_pct`; numbers carry five
/// significant digits.
std::string table_to_csv(const SimulationTable& table);

}  // namespace ifsdf
