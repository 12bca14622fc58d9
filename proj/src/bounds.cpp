#include "stabcert/bounds.hpp"

#include <cmath>

#include "stabcert/binom_test.hpp"

namespace stabcert {

const char* bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::full_black_box: return "full_black_box";
    case BoundKind::labeled_only: return "labeled_only";
    case BoundKind::unlabeled_only: return "unlabeled_only";
    case BoundKind::transparent_models: return "transparent_models";
    case BoundKind::constrained_models: return "constrained_models";
    case BoundKind::indep_seeds: return "indep_seeds";
    case BoundKind::coupled_seeds: return "coupled_seeds";
  }
  return "unknown";
}

BoundKind bound_kind_from_name(const std::string& name) {
  for (BoundKind k :
       {BoundKind::full_black_box, BoundKind::labeled_only,
        BoundKind::unlabeled_only, BoundKind::transparent_models,
        BoundKind::constrained_models, BoundKind::indep_seeds,
        BoundKind::coupled_seeds}) {
    if (name == bound_kind_name(k)) return k;
  }
  fail(ErrorCode::unknown_name, "unknown bound kind '" + name + "'");
}

namespace {

Rational bound_exponent(BoundKind kind, std::int64_t n, std::int64_t n_labeled,
                        std::int64_t n_unlabeled) {
  switch (kind) {
    case BoundKind::labeled_only:
    case BoundKind::transparent_models:
    case BoundKind::constrained_models:
      return Rational(n_labeled, n);
    case BoundKind::unlabeled_only:
      return Rational(n_labeled + n_unlabeled, n + 1);
    case BoundKind::full_black_box:
    case BoundKind::indep_seeds:
    case BoundKind::coupled_seeds:
      return compute_kappa(n, n_labeled, n_unlabeled).kappa;
  }
  fail(ErrorCode::invalid_argument, "unknown bound kind");
}

}  // namespace

BoundReport power_bound(BoundKind kind, std::int64_t n, std::int64_t n_labeled,
                        std::int64_t n_unlabeled, double alpha, double delta,
                        double delta_star) {
  require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
  require(n_labeled >= 0 && n_unlabeled >= 0, ErrorCode::invalid_argument,
          "dataset sizes must be >= 0");
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
          ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0,
          ErrorCode::invalid_argument, "delta must lie in [0, 1)");
  require(std::isfinite(delta_star) && delta_star >= 0.0 && delta_star <= 1.0,
          ErrorCode::invalid_argument, "delta_star must lie in [0, 1]");

  BoundReport out;
  out.kind = kind;
  out.n = n;
  out.n_labeled = n_labeled;
  out.n_unlabeled = n_unlabeled;
  out.alpha = alpha;
  out.delta = delta;
  out.delta_star = delta_star;
  out.exponent = bound_exponent(kind, n, n_labeled, n_unlabeled);
  const double ratio = (1.0 - delta_star) / (1.0 - delta);
  const double raw = alpha * std::pow(ratio, out.exponent.value());
  out.capped = raw >= 1.0;
  out.value = std::min(raw, 1.0);
  return out;
}

BoundComparison binomial_vs_bound(std::int64_t n, std::int64_t n_labeled,
                                  std::int64_t n_unlabeled, double alpha,
                                  double delta, double delta_star) {
  const BoundReport bound = power_bound(BoundKind::full_black_box, n, n_labeled,
                                        n_unlabeled, alpha, delta, delta_star);
  const auto kr = compute_kappa(n, n_labeled, n_unlabeled);
  const auto formula = power_formula(kr.fold_count, delta, delta_star, alpha);

  BoundComparison out;
  out.kappa = kr.kappa;
  out.fold_count = kr.fold_count;
  out.achieved = formula.power;
  out.regime_asserted = formula.regime_asserted;
  out.bound = bound.value;
  out.optimal = out.achieved == out.bound;
  out.ratio = out.achieved == out.bound
                  ? 1.0
                  : (out.bound > 0.0 ? out.achieved / out.bound : 1.0);
  return out;
}

}  // namespace stabcert
