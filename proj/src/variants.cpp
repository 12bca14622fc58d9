#include "stabcert/variants.hpp"

#include <algorithm>
#include <cmath>

#include "stabcert/parallel.hpp"

namespace stabcert {

namespace {

void validate_heuristic_args(const LabeledDataset& labeled, std::int64_t n,
                             std::int64_t replicates, double epsilon) {
  require(labeled.size() >= 1, ErrorCode::insufficient_data,
          "resampling needs at least one labeled point");
  require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
  require(replicates >= 1, ErrorCode::invalid_argument,
          "replicates must be >= 1");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::invalid_argument,
          "epsilon must be finite and >= 0");
}

void finish(HeuristicRun& run) {
  run.exceed_count = static_cast<std::int64_t>(
      std::count_if(run.deltas.begin(), run.deltas.end(),
                    [&](double d) { return d > run.epsilon; }));
  run.exceed_rate = static_cast<double>(run.exceed_count) /
                    static_cast<double>(run.replicates);
  run.certified = false;
}

}  // namespace

HeuristicRun bootstrap_deltas(const Algorithm& algorithm,
                              const LabeledDataset& labeled,
                              const UnlabeledDataset& probe_pool,
                              std::int64_t n, std::int64_t replicates,
                              double epsilon, Seed master, SeedMode mode,
                              int workers) {
  validate_heuristic_args(labeled, n, replicates, epsilon);
  require(probe_pool.size() >= 1, ErrorCode::insufficient_data,
          "bootstrap needs at least one probe point");
  if (probe_pool.size() > 0 && labeled.size() > 0)
    require(probe_pool.dim() == labeled.dim(), ErrorCode::dimension_mismatch,
            "probe pool dimension does not match labeled data");

  HeuristicRun run;
  run.method = HeuristicMethod::bootstrap;
  run.replicates = replicates;
  run.epsilon = epsilon;
  run.deltas.assign(static_cast<std::size_t>(replicates), 0.0);
  parallel_for(replicates, workers, [&](std::int64_t r) {
    const Seed rep = derive_seed(master, "rep", static_cast<std::uint64_t>(r + 1));
    // Index draws live on their own stream so resampling stays aligned with
    // the simulated variant regardless of smoothing draws.
    RandomStream idx(derive_seed(rep, "idx", 0));
    Fold fold;
    fold.train = LabeledDataset(labeled.dim());
    for (std::int64_t i = 0; i < n; ++i)
      fold.train.add(labeled[static_cast<std::int64_t>(
          idx.next_below(static_cast<std::uint64_t>(labeled.size())))]);
    fold.probe_x = probe_pool[static_cast<std::int64_t>(
        idx.next_below(static_cast<std::uint64_t>(probe_pool.size())))];
    fold.xi = derive_seed(rep, "fold-xi", 1);
    fold.index = r + 1;
    run.deltas[static_cast<std::size_t>(r)] = fold_delta(algorithm, fold, mode);
  });
  finish(run);
  return run;
}

HeuristicRun simulated_deltas(const Algorithm& algorithm,
                              const LabeledDataset& labeled,
                              const UnlabeledDataset& unlabeled,
                              std::int64_t n, std::int64_t replicates,
                              double epsilon, Smoothing smoothing,
                              double bandwidth, Seed master, SeedMode mode,
                              int workers) {
  validate_heuristic_args(labeled, n, replicates, epsilon);
  if (unlabeled.size() > 0)
    require(unlabeled.dim() == labeled.dim(), ErrorCode::dimension_mismatch,
            "unlabeled dimension does not match labeled data");
  if (smoothing == Smoothing::gaussian)
    require(std::isfinite(bandwidth) && bandwidth >= 0.0,
            ErrorCode::invalid_argument, "bandwidth must be finite and >= 0");

  // Probe pool: every feature vector we have, labeled rows first.
  std::vector<const FeatureVector*> pool;
  pool.reserve(static_cast<std::size_t>(labeled.size() + unlabeled.size()));
  for (const auto& p : labeled.points()) pool.push_back(&p.x);
  for (const auto& x : unlabeled.points()) pool.push_back(&x);

  const double h = smoothing == Smoothing::gaussian ? bandwidth : 0.0;
  const bool jittered = smoothing == Smoothing::gaussian;

  HeuristicRun run;
  run.method = HeuristicMethod::simulated;
  run.replicates = replicates;
  run.epsilon = epsilon;
  run.smoothing = smoothing;
  run.bandwidth = h;
  run.deltas.assign(static_cast<std::size_t>(replicates), 0.0);
  parallel_for(replicates, workers, [&](std::int64_t r) {
    const Seed rep = derive_seed(master, "rep", static_cast<std::uint64_t>(r + 1));
    RandomStream idx(derive_seed(rep, "idx", 0));
    RandomStream jitter(derive_seed(rep, "jitter", 0));
    Fold fold;
    fold.train = LabeledDataset(labeled.dim());
    for (std::int64_t i = 0; i < n; ++i) {
      LabeledPoint p = labeled[static_cast<std::int64_t>(
          idx.next_below(static_cast<std::uint64_t>(labeled.size())))];
      if (jittered) {
        for (double& c : p.x) c += h * jitter.next_normal();
        p.y += h * jitter.next_normal();
      }
      fold.train.add(std::move(p));
    }
    FeatureVector probe = *pool[static_cast<std::size_t>(
        idx.next_below(static_cast<std::uint64_t>(pool.size())))];
    if (jittered)
      for (double& c : probe) c += h * jitter.next_normal();
    fold.probe_x = std::move(probe);
    fold.xi = derive_seed(rep, "fold-xi", 1);
    fold.index = r + 1;
    run.deltas[static_cast<std::size_t>(r)] = fold_delta(algorithm, fold, mode);
  });
  finish(run);
  return run;
}

}  // namespace stabcert
