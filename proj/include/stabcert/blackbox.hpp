#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "stabcert/rng.hpp"
#include "stabcert/types.hpp"

namespace stabcert {

/// Fitted predictor returned by Algorithm::fit.  Implementations must be
/// immutable after fit so predict can be called from several threads.
class Model {
 public:
  virtual ~Model() = default;
  virtual double predict(const FeatureVector& x) const = 0;
};

using ModelPtr = std::shared_ptr<const Model>;

/// The black box under test.  The certification machinery only ever calls
/// fit(data, seed) and predict(x); it never inspects internals.  Contract on
/// implementors (not checkable from outside):
///   - deterministic: same data and seed give a model with identical
///     predictions;
///   - symmetric: permuting the training points changes nothing.
/// The built-in reference algorithms satisfy both bit-for-bit.
class Algorithm {
 public:
  virtual ~Algorithm() = default;
  virtual std::string name() const = 0;
  virtual ModelPtr fit(const LabeledDataset& data, Seed seed) const = 0;
};

using AlgorithmPtr = std::shared_ptr<const Algorithm>;

using ParamMap = std::map<std::string, double>;

// Reference algorithms with analytically known stability behaviour.

/// Predicts 0 everywhere; perfectly stable.
AlgorithmPtr zero_algorithm();

/// k-nearest-neighbour mean label.  Euclidean distance; ties broken by the
/// canonical (coordinates, label) order, so refits under permutation are
/// bit-identical.  Requires at least k training points.
AlgorithmPtr knn_algorithm(std::int64_t k);

/// Ridge regression without intercept: beta = (X'X + lambda I)^-1 X'y.
/// Accumulation runs over canonically sorted points, making the fit exactly
/// permutation-invariant.  lambda must be > 0.
AlgorithmPtr ridge_algorithm(double lambda);

/// Predicts jump * 1{max y_i > threshold}: a worst-case-style algorithm whose
/// instability rate is known in closed form (see threshold_max_delta_star).
AlgorithmPtr threshold_max_algorithm(double jump, double threshold);

/// Ignores the data; predicts jump * 1{first uniform of the seed stream <= q}.
/// Under a shared refit seed the two predictions always agree; under
/// independent seeds they differ with probability 2q(1-q).
AlgorithmPtr coin_algorithm(double q, double jump);

/// Factory by name: "zero", "knn" (k), "ridge" (lambda),
/// "threshold_max" (jump, threshold), "coin" (q, jump).
AlgorithmPtr make_algorithm(const std::string& name, const ParamMap& params);

// Ground truth helpers for the reference algorithms (used by tests and the
// simulation harness to compare measured rates against exact values).

/// Instability rate of threshold_max for any epsilon < jump, when labels are
/// iid with p = P(Y > threshold): the full fit and the drop-one refit differ
/// exactly when the max sits on the dropped point and no other point clears
/// the threshold, which has probability p * (1-p)^(n-1).
double threshold_max_delta_star(std::int64_t n, double p);

/// Disagreement rate of coin under independent refit seeds: 2 q (1-q).
double coin_independent_delta_star(double q);

}  // namespace stabcert
