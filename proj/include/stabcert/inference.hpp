#pragma once

#include <cstdint>
#include <span>

#include "stabcert/binom_test.hpp"

namespace stabcert {

enum class DeltaMethod { randomized_inversion, conservative_cp };

/// One-sided upper confidence bound for the exceedance probability at a
/// fixed threshold, from B exceedances in m folds at level alpha:
///
///   randomized_inversion -- smallest delta the level-alpha randomized test
///     certifies, sharing a single tiebreak draw zeta across the whole
///     family (the acceptance region is an up-set in delta, so the infimum
///     is found by grid scan plus bisection, resolved to 1e-10);
///   conservative_cp -- smallest delta with P(Bin(m, delta) <= B) <= alpha,
///     the classical deterministic bound; never uses zeta and always
///     dominates the randomized value.
///
/// Both return 1 when m = 0 (no folds, no information) and satisfy
/// P(estimate < true rate) <= alpha under the usual sampling assumptions.
double estimate_delta(std::int64_t exceed_count, std::int64_t fold_count,
                      double alpha, DeltaMethod method, double zeta);

/// Upper confidence bound for the threshold itself at a fixed target rate
/// delta.  With b = k* when zeta <= a* and k* - 1 otherwise:
///   b >= m  ->  0 (even the largest difference is tolerated),
///   b <  0  ->  +infinity (no finite threshold certifiable),
///   else the (b+1)-th largest fold difference.
/// Equals the infimum over thresholds t of those the randomized test
/// certifies at (t, delta) with the same zeta.
double estimate_eps(std::span<const double> deltas, double delta, double alpha,
                    double zeta);

/// Decision consistency wrappers: certify at (epsilon, delta) exactly when
/// the corresponding estimate clears the target.
int test_from_delta_estimate(double delta_estimate, double delta);
int test_from_eps_estimate(double eps_estimate, double epsilon);

}  // namespace stabcert
