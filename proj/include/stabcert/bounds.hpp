#pragma once

#include <cstdint>
#include <string>

#include "stabcert/rational.hpp"

namespace stabcert {

/// Universal ceilings on the acceptance probability of ANY valid
/// certification procedure against an unstable algorithm, each for a
/// different class of procedures.  The exponent is what changes:
///   full_black_box      min(N_l/n, (N_l+N_u)/(n+1))   (the kappa ratio)
///   labeled_only        N_l/n     (procedures ignoring the unlabeled pool)
///   unlabeled_only      (N_l+N_u)/(n+1)
///   transparent_models  N_l/n     (procedure may inspect fitted models)
///   constrained_models  N_l/n     (algorithm promises bounded outputs)
///   indep_seeds         kappa, with delta measured under independent refit
///                       seeds (caller supplies that rate)
///   coupled_seeds       kappa, with delta measured under the best seed
///                       coupling
enum class BoundKind {
  full_black_box,
  labeled_only,
  unlabeled_only,
  transparent_models,
  constrained_models,
  indep_seeds,
  coupled_seeds,
};

const char* bound_kind_name(BoundKind kind);
BoundKind bound_kind_from_name(const std::string& name);

struct BoundReport {
  BoundKind kind = BoundKind::full_black_box;
  Rational exponent;       // exact rational exponent
  double value = 0.0;      // min(alpha * ratio^exponent, 1)
  bool capped = false;     // true when the raw value reached 1
  std::int64_t n = 0;
  std::int64_t n_labeled = 0;
  std::int64_t n_unlabeled = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double delta_star = 0.0;
};

/// alpha * ((1 - delta_star) / (1 - delta))^exponent, capped at 1, with the
/// exponent picked by kind.  No procedure in the covered class can accept an
/// algorithm whose true exceedance rate is delta_star with probability above
/// this value while keeping level alpha.
BoundReport power_bound(BoundKind kind, std::int64_t n, std::int64_t n_labeled,
                        std::int64_t n_unlabeled, double alpha, double delta,
                        double delta_star);

/// The exact binomial test's acceptance probability (closed form, exponent
/// floor(kappa)) side by side with the universal ceiling (exponent kappa).
/// achieved <= bound always; they coincide exactly when kappa is an integer
/// and the closed form is exact in that regime.
struct BoundComparison {
  Rational kappa;
  std::int64_t fold_count = 0;
  double achieved = 0.0;
  bool regime_asserted = false;
  double bound = 0.0;
  double ratio = 0.0;   // achieved / bound (1 when both are equal or zero)
  bool optimal = false; // achieved == bound
};

BoundComparison binomial_vs_bound(std::int64_t n, std::int64_t n_labeled,
                                  std::int64_t n_unlabeled, double alpha,
                                  double delta, double delta_star);

}  // namespace stabcert
