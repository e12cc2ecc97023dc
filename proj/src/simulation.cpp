#include "ifsdf/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ifsdf/constructions.hpp"
#include "ifsdf/distfn.hpp"
#include "ifsdf/ifs.hpp"

namespace ifsdf {

std::size_t TrialConfig::effective_k() const {
  if (k) return *k;
  const std::size_t half = (n + 1) / 2;
  return std::min(half, n > 1 ? n - 1 : std::size_t{1});
}

void TrialConfig::validate() const {
  if (n < 3) throw std::invalid_argument("trial config: n must be at least 3");
  const std::size_t kk = effective_k();
  if (kk < 2 || kk >= n) throw std::invalid_argument("trial config: need 2 <= k < n");
  if (iterations < 1) throw std::invalid_argument("trial config: iterations must be at least 1");
  if (eval_points < 2) throw std::invalid_argument("trial config: eval_points must be at least 2");
  if (trials < 1) throw std::invalid_argument("trial config: trials must be at least 1");
}

TrialResult run_trial(const TrialConfig& config, std::size_t trial_index) {
  config.validate();
  SeededRng rng(substream_seed(config.seed, trial_index));
  const auto target = beta_df(config.distribution);
  auto sample = sample_beta(config.distribution, config.n, rng);

  DistributionFunctionPtr estimate;
  if (config.diagnostic_true_cdf) {
    estimate = target;
  } else {
    const IfsSystem system = quantile_estimator(sample, config.effective_k());
    require_valid(system);
    const auto shared = std::make_shared<const IfsSystem>(system);
    estimate = uniform_df();
    for (int s = 0; s < config.iterations; ++s) estimate = std::make_shared<const OperatorImage>(shared, estimate);
  }
  const EmpiricalDF edf(std::move(sample));

  TrialResult result;
  if (config.exact_sup) {
    result.d_estimator = sup_distance(*estimate, *target, config.eval_points);
    result.d_edf = sup_distance(edf, *target, config.eval_points);
  } else {
    const auto points = uniform_mesh(config.eval_points);
    result.d_estimator = sup_distance_at(*estimate, *target, points);
    result.d_edf = sup_distance_at(edf, *target, points);
  }
  result.ratio = result.d_edf > 0.0 ? result.d_estimator / result.d_edf : 0.0;
  return result;
}

SimulationTable run_table(const std::vector<TrialConfig>& configs, unsigned threads) {
  if (configs.empty()) throw std::invalid_argument("run_table: no configurations");
  struct Job {
    std::size_t row;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  SimulationTable table;
  for (std::size_t r = 0; r < configs.size(); ++r) {
    configs[r].validate();
    TableRow row;
    row.config = configs[r];
    row.k = configs[r].effective_k();
    row.trials.resize(configs[r].trials);
    table.rows.push_back(std::move(row));
    for (std::size_t t = 0; t < configs[r].trials; ++t) jobs.push_back({r, t});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto& job = jobs[j];
        table.rows[job.row].trials[job.trial] = run_trial(configs[job.row], job.trial);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& row : table.rows) {
    double sum_a = 0.0;
    double sum_b = 0.0;
    double sum_ratio = 0.0;
    for (const auto& t : row.trials) {
      sum_a += t.d_estimator;
      sum_b += t.d_edf;
      sum_ratio += t.ratio;
    }
    const double count_d = static_cast<double>(row.trials.size());
    row.mean_a = sum_a / count_d;
    row.mean_b = sum_b / count_d;
    row.ratio_pct = row.mean_b > 0.0 ? 100.0 * row.mean_a / row.mean_b : 0.0;
    row.mean_ratio_pct = 100.0 * sum_ratio / count_d;
  }
  return table;
}

namespace {

std::string sig5(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5g", v);
  return buf;
}

}  // namespace

std::string table_to_csv(const SimulationTable& table) {
  std::ostringstream out;
  out << "dist,n,k,trials,iters,mean_a,mean_b,ratio_pct\n";
  for (const auto& row : table.rows) {
    // The distribution spec contains a comma, so it is quoted.
    out << '"' << format_distribution(row.config.distribution) << "\"," << row.config.n << ',' << row.k << ','
        << row.config.trials << ',' << row.config.iterations << ',' << sig5(row.mean_a) << ','
        << sig5(row.mean_b) << ',' << sig5(row.ratio_pct) << '\n';
  }
  return out.str();
}

}  // namespace ifsdf
