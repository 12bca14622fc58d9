#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "stabcert/binom_test.hpp"
#include "stabcert/sampler.hpp"

namespace stabcert {

/// Shared Monte Carlo settings.  Replicate r always draws from seeds derived
/// via (master, "rep", r), and results land in per-replicate slots before
/// aggregation, so estimates are bit-identical for any worker count.
struct MCConfig {
  std::int64_t replicates = 1000;
  Seed master;
  int workers = 1;

  void validate() const {
    require(replicates >= 1, ErrorCode::invalid_argument,
            "replicates must be >= 1");
    require(workers >= 1, ErrorCode::invalid_argument, "workers must be >= 1");
  }
};

/// Proportion estimate with its binomial standard error and normal 95% CI
/// (clipped to [0, 1]).
struct ProportionEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::array<double, 2> ci95{0.0, 0.0};
  std::int64_t replicates = 0;
  std::int64_t hits = 0;
};

ProportionEstimate make_proportion(std::int64_t hits, std::int64_t replicates);

/// Monte Carlo estimate of the true instability rate: the probability that
/// one fresh fold (n iid training pairs, one iid probe point) produces a
/// prediction difference above epsilon.
ProportionEstimate oracle_delta_star(const Algorithm& algorithm,
                                     const Sampler& sampler, std::int64_t n,
                                     double epsilon, SeedMode mode,
                                     const MCConfig& mc);

/// Monte Carlo acceptance rate of the full certification pipeline on fresh
/// datasets of the given sizes drawn from the sampler.
ProportionEstimate empirical_power(const Algorithm& algorithm,
                                   const Sampler& sampler,
                                   std::int64_t n_labeled,
                                   std::int64_t n_unlabeled,
                                   const StabilityParams& params, SeedMode mode,
                                   const MCConfig& mc);

/// Chi-squared goodness of fit of the observed exceedance counts against
/// Bin(fold_count, delta_star) across replicates.  Bins with expected count
/// below 5 are pooled from the right.
struct GofReport {
  std::int64_t fold_count = 0;
  double delta_star = 0.0;
  std::int64_t replicates = 0;
  std::vector<std::int64_t> observed;  // histogram of B over 0..fold_count
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
};

GofReport gof_binomial_B(const Algorithm& algorithm, const Sampler& sampler,
                         std::int64_t n, std::int64_t n_labeled,
                         std::int64_t n_unlabeled, double epsilon,
                         double delta_star, SeedMode mode, const MCConfig& mc);

}  // namespace stabcert
