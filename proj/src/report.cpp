#include "stabcert/report.hpp"

#include <cmath>

namespace stabcert {

const char* library_version() { return "0.1.0"; }

namespace {

constexpr int kSchemaVersion = 1;

Json shell(const char* kind) {
  Json j;
  j["kind"] = kind;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = {{"name", "stabcert"}, {"version", library_version()}};
  return j;
}

// infinity is not representable in JSON; report it as null + flag.
void put_maybe_infinite(Json& j, const char* key, double v) {
  if (std::isinf(v)) {
    j[key] = nullptr;
    j[std::string(key) + "_infinite"] = true;
  } else {
    j[key] = v;
    j[std::string(key) + "_infinite"] = false;
  }
}

const char* seed_mode_name(SeedMode mode) {
  return mode == SeedMode::same_seed ? "same" : "independent";
}

const char* delta_method_name(DeltaMethod method) {
  return method == DeltaMethod::randomized_inversion ? "randomized"
                                                     : "conservative";
}

}  // namespace

Json seed_mode_json(SeedMode mode) { return Json(seed_mode_name(mode)); }

SeedMode seed_mode_from_name(const std::string& name) {
  if (name == "same") return SeedMode::same_seed;
  if (name == "independent") return SeedMode::independent_seeds;
  fail(ErrorCode::unknown_name,
       "unknown seed mode '" + name + "' (expected same|independent)");
}

const char* sentinel_kind_name(SentinelKind kind) {
  return kind == SentinelKind::label ? "label" : "feature";
}

SentinelKind sentinel_kind_from_name(const std::string& name) {
  if (name == "label") return SentinelKind::label;
  if (name == "feature") return SentinelKind::feature;
  fail(ErrorCode::unknown_name,
       "unknown sentinel kind '" + name + "' (expected label|feature)");
}

Json proportion_json(const ProportionEstimate& est) {
  Json j;
  j["p_hat"] = est.p_hat;
  j["std_error"] = est.std_error;
  j["ci95"] = {est.ci95[0], est.ci95[1]};
  j["hits"] = est.hits;
  j["replicates"] = est.replicates;
  return j;
}

Json certificate_json(const TestOutcome& outcome, const StabilityParams& params,
                      const std::string& algorithm_name,
                      const std::string& labeled_digest_str,
                      const std::string& unlabeled_digest_str) {
  Json j = shell("certificate");
  j["algorithm"] = algorithm_name;
  j["params"] = {{"epsilon", params.epsilon},
                 {"delta", params.delta},
                 {"alpha", params.alpha},
                 {"n", params.n}};
  j["seed"] = {{"master", outcome.master.value},
               {"mode", seed_mode_name(outcome.seed_mode)},
               {"shuffled", outcome.shuffled}};
  if (outcome.shuffled) j["seed"]["shuffle_seed"] = outcome.shuffle_seed.value;
  j["data"] = {{"labeled_digest", labeled_digest_str},
               {"unlabeled_digest", unlabeled_digest_str}};
  j["kappa"] = {{"rational", outcome.kappa.str()},
                {"value", outcome.kappa.value()},
                {"fold_count", outcome.fold_count}};
  j["folds"] = Json::object();
  j["folds"]["deltas"] = outcome.deltas;
  Json seeds = Json::array();
  for (const Seed& s : outcome.fold_seeds) seeds.push_back(s.value);
  j["folds"]["xi_seeds"] = seeds;
  j["test"] = {{"exceed_count", outcome.exceed_count},
               {"k_star", outcome.critical.k_star},
               {"a_star", outcome.critical.a_star},
               {"zeta", outcome.zeta},
               {"decision", outcome.decision},
               {"degenerate", outcome.degenerate}};
  Json warnings = Json::array();
  if (outcome.degenerate)
    warnings.push_back(
        "no folds available: the decision is a coin flip at level alpha and "
        "carries no evidence about the algorithm");
  j["warnings"] = warnings;
  return j;
}

Json delta_estimate_json(double value, DeltaMethod method,
                         std::int64_t exceed_count, std::int64_t fold_count,
                         double alpha, double epsilon, double zeta,
                         bool degenerate) {
  Json j = shell("estimate");
  j["target"] = "delta";
  j["method"] = delta_method_name(method);
  j["value"] = value;
  j["inputs"] = {{"exceed_count", exceed_count},
                 {"fold_count", fold_count},
                 {"alpha", alpha},
                 {"epsilon", epsilon}};
  j["zeta"] = zeta;
  Json warnings = Json::array();
  if (degenerate)
    warnings.push_back("no folds available: estimate is the vacuous bound 1");
  j["warnings"] = warnings;
  return j;
}

Json eps_estimate_json(double value, const std::vector<double>& deltas,
                       double delta, double alpha, double zeta,
                       bool degenerate) {
  Json j = shell("estimate");
  j["target"] = "eps";
  j["method"] = "order_statistic";
  put_maybe_infinite(j, "value", value);
  j["inputs"] = {{"fold_count", static_cast<std::int64_t>(deltas.size())},
                 {"deltas", deltas},
                 {"alpha", alpha},
                 {"delta", delta}};
  j["zeta"] = zeta;
  Json warnings = Json::array();
  if (degenerate)
    warnings.push_back(
        "no folds available: estimate degenerates to 0 or infinity by the "
        "tiebreak draw alone");
  j["warnings"] = warnings;
  return j;
}

Json oracle_json(const ProportionEstimate& est, std::int64_t n, double epsilon,
                 SeedMode mode, const std::string& algorithm_name,
                 const std::string& sampler_name) {
  Json j = shell("oracle");
  j["algorithm"] = algorithm_name;
  j["sampler"] = sampler_name;
  j["n"] = n;
  j["epsilon"] = epsilon;
  j["seed_mode"] = seed_mode_name(mode);
  j["estimate"] = proportion_json(est);
  return j;
}

Json power_json(const ProportionEstimate& est, const Rational& kappa,
                std::int64_t fold_count, const StabilityParams& params,
                SeedMode mode, const std::string& algorithm_name,
                const std::string& sampler_name, bool have_delta_star,
                double delta_star, const PowerFormulaResult& formula,
                double bound_value) {
  Json j = shell("power");
  j["algorithm"] = algorithm_name;
  j["sampler"] = sampler_name;
  j["params"] = {{"epsilon", params.epsilon},
                 {"delta", params.delta},
                 {"alpha", params.alpha},
                 {"n", params.n}};
  j["seed_mode"] = seed_mode_name(mode);
  j["kappa"] = {{"rational", kappa.str()},
                {"value", kappa.value()},
                {"fold_count", fold_count}};
  j["acceptance"] = proportion_json(est);
  if (have_delta_star) {
    j["delta_star"] = delta_star;
    j["formula"] = {{"value", formula.power},
                    {"regime_asserted", formula.regime_asserted}};
    j["bound"] = bound_value;
  } else {
    j["delta_star"] = nullptr;
    j["formula"] = nullptr;
    j["bound"] = nullptr;
  }
  return j;
}

Json bound_json(const BoundReport& report) {
  Json j = shell("bound");
  j["bound_kind"] = bound_kind_name(report.kind);
  j["exponent"] = {{"rational", report.exponent.str()},
                   {"value", report.exponent.value()}};
  j["value"] = report.value;
  j["capped"] = report.capped;
  j["inputs"] = {{"n", report.n},
                 {"n_labeled", report.n_labeled},
                 {"n_unlabeled", report.n_unlabeled},
                 {"alpha", report.alpha},
                 {"delta", report.delta},
                 {"delta_star", report.delta_star}};
  return j;
}

Json bound_comparison_json(const BoundComparison& cmp, std::int64_t n,
                           std::int64_t n_labeled, std::int64_t n_unlabeled,
                           double alpha, double delta, double delta_star) {
  Json j = shell("bound_comparison");
  j["kappa"] = {{"rational", cmp.kappa.str()},
                {"value", cmp.kappa.value()},
                {"fold_count", cmp.fold_count}};
  j["achieved"] = cmp.achieved;
  j["regime_asserted"] = cmp.regime_asserted;
  j["bound"] = cmp.bound;
  j["ratio"] = cmp.ratio;
  j["optimal"] = cmp.optimal;
  j["inputs"] = {{"n", n},
                 {"n_labeled", n_labeled},
                 {"n_unlabeled", n_unlabeled},
                 {"alpha", alpha},
                 {"delta", delta},
                 {"delta_star", delta_star}};
  return j;
}

Json gof_json(const GofReport& report, double epsilon, SeedMode mode,
              const std::string& algorithm_name,
              const std::string& sampler_name) {
  Json j = shell("gof");
  j["algorithm"] = algorithm_name;
  j["sampler"] = sampler_name;
  j["epsilon"] = epsilon;
  j["seed_mode"] = seed_mode_name(mode);
  j["fold_count"] = report.fold_count;
  j["delta_star"] = report.delta_star;
  j["replicates"] = report.replicates;
  j["observed"] = report.observed;
  j["statistic"] = report.statistic;
  j["dof"] = report.dof;
  j["p_value"] = report.p_value;
  return j;
}

namespace {
Json sentinel_json(const Sentinel& s) {
  Json j;
  j["kind"] = sentinel_kind_name(s.kind);
  if (s.kind == SentinelKind::label)
    j["y_star"] = s.y_star;
  else
    j["x_star"] = s.x_star;
  return j;
}
}  // namespace

Json adversary_instability_json(const AdversaryDemo& demo, double epsilon) {
  Json j = shell("adversary");
  j["demo"] = "instability";
  j["sentinel"] = sentinel_json(demo.sentinel);
  j["n"] = demo.n;
  j["c"] = demo.c;
  j["epsilon"] = epsilon;
  j["base_rate"] = demo.base_rate;
  j["empirical"] = proportion_json(demo.empirical);
  j["predicted"] = demo.predicted;
  j["within_3se"] = demo.within_3se;
  return j;
}

Json adversary_coupling_json(const CouplingDemo& demo) {
  Json j = shell("adversary");
  j["demo"] = "coupling";
  j["sentinel"] = sentinel_json(demo.sentinel);
  j["n_labeled"] = demo.n_labeled;
  j["n_unlabeled"] = demo.n_unlabeled;
  j["c"] = demo.c;
  j["empirical"] = proportion_json(demo.empirical);
  j["predicted"] = demo.predicted;
  j["within_3se"] = demo.within_3se;
  return j;
}

Json heuristic_json(const HeuristicRun& run, const std::string& algorithm_name,
                    SeedMode mode) {
  Json j = shell("heuristic");
  j["method"] =
      run.method == HeuristicMethod::bootstrap ? "bootstrap" : "simulated";
  j["algorithm"] = algorithm_name;
  j["seed_mode"] = seed_mode_name(mode);
  j["replicates"] = run.replicates;
  j["epsilon"] = run.epsilon;
  j["exceed_count"] = run.exceed_count;
  j["exceed_rate"] = run.exceed_rate;
  j["smoothing"] = run.smoothing == Smoothing::gaussian ? "gaussian" : "none";
  j["bandwidth"] = run.bandwidth;
  j["deltas"] = run.deltas;
  j["certified"] = run.certified;
  j["note"] =
      "resampling heuristic: reuses data across replicates, no finite-sample "
      "guarantee attaches to these numbers";
  return j;
}

}  // namespace stabcert
