#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifsdf/distfn.hpp"

namespace ifsdf {

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  BetaParams() = default;
  /// Throws std::invalid_argument unless both shapes are positive.
  BetaParams(double alpha, double beta);

  std::string label() const;  // e.g. "Beta(2,2)"
  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

/// Regularized incomplete beta function I_x(alpha, beta).
double beta_cdf(const BetaParams& params, double x);

/// x with beta_cdf(x) = u, to 1e-10 in probability.
double beta_quantile(const BetaParams& params, double u);

/// Parses "beta:A,B" or "uniform" (= beta:1,1).
BetaParams parse_distribution(const std::string& spec);
std::string format_distribution(const BetaParams& params);

DistributionFunctionPtr beta_df(const BetaParams& params);

/// SplitMix64 generator. The state advances by 0x9E3779B97F4A7C15 per draw and
/// each output is the advanced state passed through mix64, so a seed fixes the
/// stream bit for bit on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed of the independent stream for one trial: seed XOR mix64(trial + 1).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial);

/// n inverse-transform draws; uniforms outside [1e-12, 1 - 1e-12] are redrawn.
std::vector<double> sample_beta(const BetaParams& params, std::size_t n, SeededRng& rng);

}  // namespace ifsdf
