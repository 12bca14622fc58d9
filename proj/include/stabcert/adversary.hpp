#pragma once

#include <cstdint>
#include <span>

#include "stabcert/harness.hpp"
#include "stabcert/sampler.hpp"

namespace stabcert {

/// The two ways the adversarial construction hides a trigger in the data:
/// a sentinel label value y*, or a sentinel feature vector x*.
enum class SentinelKind { label, feature };

struct Sentinel {
  SentinelKind kind = SentinelKind::label;
  double y_star = 0.0;      // meaningful when kind == label
  FeatureVector x_star;     // meaningful when kind == feature
};

/// A value outside everything observed: drawn uniformly from a window of
/// width w starting 1000 widths beyond the observed maximum (w = observed
/// range, at least 1), redrawn on the measure-zero chance of an exact
/// collision.  Exact floating-point comparison is then a sound trigger.
double pick_sentinel_label(std::span<const double> observed, Seed seed);
FeatureVector pick_sentinel_feature(std::span<const FeatureVector> observed,
                                    std::int64_t dim, Seed seed);

/// Draws `pilot_draws` points from the sampler to estimate the observed
/// range, then picks a sentinel of the requested kind.
Sentinel make_sentinel(const Sampler& sampler, SentinelKind kind, Seed seed,
                       std::int64_t pilot_draws = 256);

/// The spiked algorithm: behaves exactly like `base` unless it is fitted on
/// exactly n points whose data contains the sentinel (or, for a feature
/// sentinel, unless it is asked to predict at x* after an n-point fit).
/// When triggered it predicts 1 + epsilon + the maximum over the n
/// drop-one-point base fits, which forces the fold difference above epsilon
/// with certainty while remaining deterministic and symmetric.
AlgorithmPtr perturbed_algorithm(AlgorithmPtr base, const Sentinel& sentinel,
                                 double epsilon, std::int64_t n);

/// One draw from the contaminated distribution (1-c) P + c P1, coupled with
/// the clean draw it replaces.  P1 pins the sentinel coordinate (the label
/// to y*, or the features to x*) and keeps the other coordinate's marginal.
struct CoupledPair {
  LabeledPoint original;
  LabeledPoint perturbed;
  bool replaced = false;
};

CoupledPair coupled_pair(const Sampler& base, double c,
                         const Sentinel& sentinel, Seed seed);

/// Sampler view of the contaminated distribution (marginal of coupled_pair).
SamplerPtr perturbed_sampler(SamplerPtr base, double c,
                             const Sentinel& sentinel);

/// Monte Carlo check that the spiked pair (algorithm', distribution')
/// reaches its predicted instability rate
///   1 - (1 - base_rate) (1 - c)^n      (label sentinel)
///   1 - (1 - base_rate) (1 - c)^(n+1)  (feature sentinel)
/// where base_rate is the base algorithm's own exceedance rate at epsilon.
/// Fold seeds are shared between fit and refit (the certified notion).
struct AdversaryDemo {
  SentinelKind kind = SentinelKind::label;
  Sentinel sentinel;
  std::int64_t n = 0;
  double c = 0.0;
  double base_rate = 0.0;
  ProportionEstimate empirical;
  double predicted = 0.0;
  bool within_3se = false;
};

AdversaryDemo demo_instability(AlgorithmPtr base_algorithm,
                               const Sampler& base_sampler, SentinelKind kind,
                               std::int64_t n, double c, double epsilon,
                               double base_rate, const MCConfig& mc);

/// Monte Carlo check of how often an entire dataset drawn from the
/// contaminated distribution can be coupled to equal the clean one:
///   (1 - c)^(N_labeled)               (label sentinel: features unchanged)
///   (1 - c)^(N_labeled + N_unlabeled) (feature sentinel)
/// This is the quantity that limits certification under distribution shift.
struct CouplingDemo {
  SentinelKind kind = SentinelKind::label;
  Sentinel sentinel;
  std::int64_t n_labeled = 0;
  std::int64_t n_unlabeled = 0;
  double c = 0.0;
  ProportionEstimate empirical;
  double predicted = 0.0;
  bool within_3se = false;
};

CouplingDemo demo_coupling(const Sampler& base_sampler, SentinelKind kind,
                           std::int64_t n_labeled, std::int64_t n_unlabeled,
                           double c, const MCConfig& mc);

}  // namespace stabcert
