#pragma once

#include <cstdint>
#include <vector>

#include "stabcert/binom_test.hpp"

namespace stabcert {

enum class HeuristicMethod { bootstrap, simulated };
enum class Smoothing { none, gaussian };

/// Result of a resampling heuristic.  These runs REUSE data across
/// replicates, so the exchangeability argument behind the exact test does
/// not apply: certified is false on every path, and nothing downstream will
/// turn a HeuristicRun into a certificate.
struct HeuristicRun {
  HeuristicMethod method = HeuristicMethod::bootstrap;
  std::int64_t replicates = 0;
  double epsilon = 0.0;
  std::vector<double> deltas;     // one prediction difference per replicate
  std::int64_t exceed_count = 0;  // replicates with delta > epsilon
  double exceed_rate = 0.0;
  Smoothing smoothing = Smoothing::none;
  double bandwidth = 0.0;
  bool certified = false;  // always false, by construction
};

/// Replicate r resamples n training pairs from the labeled data (with
/// replacement) and one probe point from the unlabeled pool, then measures
/// the usual fold difference.
HeuristicRun bootstrap_deltas(const Algorithm& algorithm,
                              const LabeledDataset& labeled,
                              const UnlabeledDataset& probe_pool,
                              std::int64_t n, std::int64_t replicates,
                              double epsilon, Seed master, SeedMode mode,
                              int workers = 1);

/// Same resampling scheme, but training pairs come from the labeled data and
/// the probe point uniformly from ALL feature vectors (labeled then
/// unlabeled), optionally with Gaussian jitter of the given bandwidth added
/// to every resampled coordinate and label (smoothed bootstrap).  With
/// smoothing none this coincides with bootstrap_deltas run against the
/// combined feature pool.
HeuristicRun simulated_deltas(const Algorithm& algorithm,
                              const LabeledDataset& labeled,
                              const UnlabeledDataset& unlabeled,
                              std::int64_t n, std::int64_t replicates,
                              double epsilon, Smoothing smoothing,
                              double bandwidth, Seed master, SeedMode mode,
                              int workers = 1);

}  // namespace stabcert
