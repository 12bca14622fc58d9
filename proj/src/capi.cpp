#include "stabcert.h"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "stabcert/adversary.hpp"
#include "stabcert/bounds.hpp"
#include "stabcert/csv.hpp"
#include "stabcert/harness.hpp"
#include "stabcert/inference.hpp"
#include "stabcert/report.hpp"
#include "stabcert/variants.hpp"

struct stab_labeled {
  stabcert::LabeledDataset data;
};
struct stab_unlabeled {
  stabcert::UnlabeledDataset data;
};
struct stab_algorithm {
  stabcert::AlgorithmPtr algorithm;
};
struct stab_sampler {
  stabcert::SamplerPtr sampler;
};
struct stab_report {
  std::string json;
};

namespace {

using namespace stabcert;

thread_local std::string g_last_error;

stab_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return STAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse: return STAB_ERR_PARSE;
    case ErrorCode::io: return STAB_ERR_IO;
    case ErrorCode::dimension_mismatch: return STAB_ERR_DIMENSION_MISMATCH;
    case ErrorCode::insufficient_data: return STAB_ERR_INSUFFICIENT_DATA;
    case ErrorCode::unknown_name: return STAB_ERR_UNKNOWN_NAME;
    case ErrorCode::algorithm_failure: return STAB_ERR_ALGORITHM_FAILURE;
    case ErrorCode::internal: return STAB_ERR_INTERNAL;
  }
  return STAB_ERR_INTERNAL;
}

template <class F>
stab_status guarded(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return STAB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STAB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return STAB_ERR_INTERNAL;
  }
}

void check_ptr(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::invalid_argument,
          std::string(what) + " must not be NULL");
}

std::string nonnull_str(const char* s, const char* what) {
  check_ptr(s, what);
  return std::string(s);
}

ParamMap parse_params(const char* params_json) {
  if (params_json == nullptr || *params_json == '\0') return {};
  Json j;
  try {
    j = Json::parse(params_json);
  } catch (const std::exception& e) {
    fail(ErrorCode::parse, std::string("params_json: ") + e.what());
  }
  require(j.is_object(), ErrorCode::parse,
          "params_json must be a JSON object");
  ParamMap out;
  for (const auto& [key, value] : j.items()) {
    require(value.is_number(), ErrorCode::parse,
            "params_json: parameter '" + key + "' must be a number");
    out[key] = value.get<double>();
  }
  return out;
}

void emit(stab_report** out, Json j) {
  *out = new stab_report{j.dump(2) + "\n"};
}

// The CLI and reports quote the master seed and derived settings for every
// run so a report file alone reproduces the computation.
Json run_section(std::uint64_t seed) {
  Json j;
  j["seed"] = {{"master", seed}};
  return j;
}

UnlabeledDataset unlabeled_or_empty(const stab_unlabeled* unlabeled,
                                    std::int64_t dim) {
  return unlabeled == nullptr ? UnlabeledDataset(dim) : unlabeled->data;
}

DeltaMethod delta_method_from_name(const std::string& name) {
  if (name == "randomized") return DeltaMethod::randomized_inversion;
  if (name == "conservative") return DeltaMethod::conservative_cp;
  fail(ErrorCode::unknown_name, "unknown estimator method '" + name +
                                    "' (expected randomized|conservative)");
}

Smoothing smoothing_from_name(const std::string& name) {
  if (name == "none") return Smoothing::none;
  if (name == "gaussian") return Smoothing::gaussian;
  fail(ErrorCode::unknown_name,
       "unknown smoothing '" + name + "' (expected none|gaussian)");
}

void check_workers(int workers) {
  require(workers >= 1, ErrorCode::invalid_argument, "workers must be >= 1");
}

// ---- user-supplied algorithms ----------------------------------------

class CallbackModel : public Model {
 public:
  CallbackModel(void* model, stab_predict_fn predict,
                stab_model_free_fn model_free, void* ctx)
      : model_(model), predict_(predict), model_free_(model_free), ctx_(ctx) {}
  ~CallbackModel() override {
    if (model_free_ != nullptr) model_free_(ctx_, model_);
  }
  double predict(const FeatureVector& x) const override {
    double value = 0.0;
    const stab_status st =
        predict_(ctx_, model_, x.data(), static_cast<int64_t>(x.size()), &value);
    require(st == STAB_OK, ErrorCode::algorithm_failure,
            std::string("user predict callback failed: ") +
                stab_status_name(st));
    require(std::isfinite(value), ErrorCode::algorithm_failure,
            "user predict callback produced a non-finite value");
    return value;
  }

 private:
  void* model_;
  stab_predict_fn predict_;
  stab_model_free_fn model_free_;
  void* ctx_;
};

class CallbackAlgorithm : public Algorithm {
 public:
  CallbackAlgorithm(std::string name, stab_fit_fn fit, stab_predict_fn predict,
                    stab_model_free_fn model_free, void* ctx)
      : name_(std::move(name)),
        fit_(fit),
        predict_(predict),
        model_free_(model_free),
        ctx_(ctx) {}

  std::string name() const override { return name_; }

  ModelPtr fit(const LabeledDataset& data, Seed seed) const override {
    const std::size_t count = static_cast<std::size_t>(data.size());
    const std::size_t dim = static_cast<std::size_t>(data.dim());
    std::vector<double> features(count * dim);
    std::vector<double> labels(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& p = data[static_cast<std::int64_t>(i)];
      for (std::size_t j = 0; j < dim; ++j) features[i * dim + j] = p.x[j];
      labels[i] = p.y;
    }
    void* model = nullptr;
    const stab_status st =
        fit_(ctx_, features.data(), labels.data(), data.size(), data.dim(),
             seed.value, &model);
    require(st == STAB_OK, ErrorCode::algorithm_failure,
            std::string("user fit callback failed: ") + stab_status_name(st));
    require(model != nullptr, ErrorCode::algorithm_failure,
            "user fit callback returned no model");
    return std::make_shared<CallbackModel>(model, predict_, model_free_, ctx_);
  }

 private:
  std::string name_;
  stab_fit_fn fit_;
  stab_predict_fn predict_;
  stab_model_free_fn model_free_;
  void* ctx_;
};

}  // namespace

extern "C" {

const char* stab_version(void) { return library_version(); }

const char* stab_status_name(stab_status status) {
  switch (status) {
    case STAB_OK: return "ok";
    case STAB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case STAB_ERR_PARSE: return "parse";
    case STAB_ERR_IO: return "io";
    case STAB_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case STAB_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case STAB_ERR_UNKNOWN_NAME: return "unknown_name";
    case STAB_ERR_ALGORITHM_FAILURE: return "algorithm_failure";
    case STAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* stab_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets ---- */

stab_status stab_labeled_load_csv(const char* path, stab_labeled** out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = new stab_labeled{load_labeled_csv(nonnull_str(path, "path"))};
  });
}

stab_status stab_unlabeled_load_csv(const char* path, stab_unlabeled** out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = new stab_unlabeled{load_unlabeled_csv(nonnull_str(path, "path"))};
  });
}

stab_status stab_labeled_from_arrays(const double* features,
                                     const double* labels, int64_t count,
                                     int64_t dim, stab_labeled** out) {
  return guarded([&] {
    check_ptr(out, "out");
    require(count >= 0, ErrorCode::invalid_argument, "count must be >= 0");
    if (count > 0) {
      check_ptr(features, "features");
      check_ptr(labels, "labels");
    }
    LabeledDataset data(dim);
    for (int64_t i = 0; i < count; ++i) {
      LabeledPoint p;
      p.x.assign(features + i * dim, features + (i + 1) * dim);
      p.y = labels[i];
      data.add(std::move(p));
    }
    *out = new stab_labeled{std::move(data)};
  });
}

stab_status stab_unlabeled_from_arrays(const double* features, int64_t count,
                                       int64_t dim, stab_unlabeled** out) {
  return guarded([&] {
    check_ptr(out, "out");
    require(count >= 0, ErrorCode::invalid_argument, "count must be >= 0");
    if (count > 0) check_ptr(features, "features");
    UnlabeledDataset data(dim);
    for (int64_t i = 0; i < count; ++i)
      data.add(FeatureVector(features + i * dim, features + (i + 1) * dim));
    *out = new stab_unlabeled{std::move(data)};
  });
}

int64_t stab_labeled_size(const stab_labeled* data) {
  return data == nullptr ? -1 : data->data.size();
}
int64_t stab_labeled_dim(const stab_labeled* data) {
  return data == nullptr ? -1 : data->data.dim();
}
int64_t stab_unlabeled_size(const stab_unlabeled* data) {
  return data == nullptr ? -1 : data->data.size();
}
int64_t stab_unlabeled_dim(const stab_unlabeled* data) {
  return data == nullptr ? -1 : data->data.dim();
}

void stab_labeled_free(stab_labeled* data) { delete data; }
void stab_unlabeled_free(stab_unlabeled* data) { delete data; }

/* ---- algorithms ---- */

stab_status stab_algorithm_builtin(const char* name, const char* params_json,
                                   stab_algorithm** out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = new stab_algorithm{
        make_algorithm(nonnull_str(name, "name"), parse_params(params_json))};
  });
}

stab_status stab_algorithm_custom(const char* name, stab_fit_fn fit,
                                  stab_predict_fn predict,
                                  stab_model_free_fn model_free, void* ctx,
                                  stab_algorithm** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(reinterpret_cast<const void*>(fit), "fit");
    check_ptr(reinterpret_cast<const void*>(predict), "predict");
    *out = new stab_algorithm{std::make_shared<CallbackAlgorithm>(
        nonnull_str(name, "name"), fit, predict, model_free, ctx)};
  });
}

const char* stab_algorithm_name(const stab_algorithm* algorithm) {
  if (algorithm == nullptr) return "";
  thread_local std::string name;
  name = algorithm->algorithm->name();
  return name.c_str();
}

void stab_algorithm_free(stab_algorithm* algorithm) { delete algorithm; }

/* ---- samplers ---- */

stab_status stab_sampler_builtin(const char* name, const char* params_json,
                                 stab_sampler** out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = new stab_sampler{
        builtin_sampler(nonnull_str(name, "name"), parse_params(params_json))};
  });
}

void stab_sampler_free(stab_sampler* sampler) { delete sampler; }

/* ---- numeric one-shots ---- */

stab_status stab_kappa(int64_t n, int64_t n_labeled, int64_t n_unlabeled,
                       int64_t* num, int64_t* den, int64_t* fold_count) {
  return guarded([&] {
    const auto kr = compute_kappa(n, n_labeled, n_unlabeled);
    if (num != nullptr) *num = kr.kappa.num();
    if (den != nullptr) *den = kr.kappa.den();
    if (fold_count != nullptr) *fold_count = kr.fold_count;
  });
}

stab_status stab_critical_values(int64_t m, double delta, double alpha,
                                 int64_t* k_star, double* a_star) {
  return guarded([&] {
    const auto crit = critical_values(m, delta, alpha);
    if (k_star != nullptr) *k_star = crit.k_star;
    if (a_star != nullptr) *a_star = crit.a_star;
  });
}

stab_status stab_decide(int64_t exceed_count, int64_t k_star, double a_star,
                        double zeta, int* decision) {
  return guarded([&] {
    check_ptr(decision, "decision");
    require(a_star > 0.0 && a_star <= 1.0, ErrorCode::invalid_argument,
            "a_star must lie in (0, 1]");
    *decision = decide(exceed_count, CriticalValues{k_star, a_star}, zeta);
  });
}

stab_status stab_binomial_cdf(int64_t m, double p, int64_t k, double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = binomial_cdf(m, p, k);
  });
}

stab_status stab_power_formula(int64_t m, double delta, double delta_star,
                               double alpha, double* value,
                               int* regime_asserted) {
  return guarded([&] {
    const auto r = power_formula(m, delta, delta_star, alpha);
    if (value != nullptr) *value = r.power;
    if (regime_asserted != nullptr) *regime_asserted = r.regime_asserted ? 1 : 0;
  });
}

stab_status stab_estimate_delta(int64_t exceed_count, int64_t fold_count,
                                double alpha, const char* method, double zeta,
                                double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    *out = estimate_delta(exceed_count, fold_count, alpha,
                          delta_method_from_name(nonnull_str(method, "method")),
                          zeta);
  });
}

stab_status stab_estimate_eps(const double* deltas, int64_t fold_count,
                              double delta, double alpha, double zeta,
                              double* out) {
  return guarded([&] {
    check_ptr(out, "out");
    require(fold_count >= 0, ErrorCode::invalid_argument,
            "fold_count must be >= 0");
    if (fold_count > 0) check_ptr(deltas, "deltas");
    *out = estimate_eps(
        std::span<const double>(deltas, static_cast<std::size_t>(fold_count)),
        delta, alpha, zeta);
  });
}

/* ---- workflows ---- */

stab_status stab_run_test(const stab_algorithm* algorithm,
                          const stab_labeled* labeled,
                          const stab_unlabeled* unlabeled, double epsilon,
                          double delta, double alpha, int64_t n, uint64_t seed,
                          const char* seed_mode, int shuffle, int workers,
                          stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(algorithm, "algorithm");
    check_ptr(labeled, "labeled");
    check_workers(workers);
    const SeedMode mode = seed_mode_from_name(nonnull_str(seed_mode, "seed_mode"));
    const StabilityParams params{epsilon, delta, alpha, n};
    const UnlabeledDataset u = unlabeled_or_empty(unlabeled, labeled->data.dim());
    TestSettings settings;
    settings.shuffle = shuffle != 0;
    settings.workers = workers;
    const TestOutcome outcome = binomial_test(
        *algorithm->algorithm, labeled->data, u, params, Seed{seed}, mode,
        settings);
    emit(out, certificate_json(outcome, params, algorithm->algorithm->name(),
                               labeled_digest(labeled->data),
                               unlabeled_digest(u)));
  });
}

} /* extern "C" */

namespace {

// Shared plumbing for the two estimate workflows: run the folds once and
// come back with the outcome plus report skeleton.
stabcert::TestOutcome run_fold_pipeline(const stab_algorithm* algorithm,
                                        const stab_labeled* labeled,
                                        const stab_unlabeled* unlabeled,
                                        const stabcert::StabilityParams& params,
                                        uint64_t seed, const char* seed_mode,
                                        int shuffle, int workers,
                                        stabcert::SeedMode* mode_out,
                                        stabcert::UnlabeledDataset* u_out) {
  check_ptr(algorithm, "algorithm");
  check_ptr(labeled, "labeled");
  check_workers(workers);
  *mode_out = seed_mode_from_name(nonnull_str(seed_mode, "seed_mode"));
  *u_out = unlabeled_or_empty(unlabeled, labeled->data.dim());
  TestSettings settings;
  settings.shuffle = shuffle != 0;
  settings.workers = workers;
  return binomial_test(*algorithm->algorithm, labeled->data, *u_out, params,
                       Seed{seed}, *mode_out, settings);
}

Json estimate_run_section(const stab_algorithm* algorithm,
                          const stab_labeled* labeled,
                          const UnlabeledDataset& u, uint64_t seed,
                          SeedMode mode, const TestOutcome& outcome) {
  Json j;
  j["algorithm"] = algorithm->algorithm->name();
  j["labeled_digest"] = labeled_digest(labeled->data);
  j["unlabeled_digest"] = unlabeled_digest(u);
  j["seed"] = {{"master", seed},
               {"mode", seed_mode_json(mode)},
               {"shuffled", outcome.shuffled}};
  if (outcome.shuffled) j["seed"]["shuffle_seed"] = outcome.shuffle_seed.value;
  return j;
}

}  // namespace

extern "C" {

stab_status stab_run_estimate_delta(const stab_algorithm* algorithm,
                                    const stab_labeled* labeled,
                                    const stab_unlabeled* unlabeled,
                                    double epsilon, double alpha, int64_t n,
                                    uint64_t seed, const char* seed_mode,
                                    const char* method, int shuffle,
                                    int workers, stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    const DeltaMethod dm =
        delta_method_from_name(nonnull_str(method, "method"));
    SeedMode mode{};
    UnlabeledDataset u;
    // delta plays no role in the fold computation; 0 is a placeholder.
    const StabilityParams params{epsilon, 0.0, alpha, n};
    const TestOutcome outcome = run_fold_pipeline(
        algorithm, labeled, unlabeled, params, seed, seed_mode, shuffle,
        workers, &mode, &u);
    const double value = estimate_delta(outcome.exceed_count,
                                        outcome.fold_count, alpha, dm,
                                        outcome.zeta);
    Json j = delta_estimate_json(value, dm, outcome.exceed_count,
                                 outcome.fold_count, alpha, epsilon,
                                 outcome.zeta, outcome.degenerate);
    j["run"] = estimate_run_section(algorithm, labeled, u, seed, mode, outcome);
    emit(out, std::move(j));
  });
}

stab_status stab_run_estimate_eps(const stab_algorithm* algorithm,
                                  const stab_labeled* labeled,
                                  const stab_unlabeled* unlabeled,
                                  double delta, double alpha, int64_t n,
                                  uint64_t seed, const char* seed_mode,
                                  int shuffle, int workers,
                                  stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    SeedMode mode{};
    UnlabeledDataset u;
    // epsilon plays no role here; only the fold differences matter.
    const StabilityParams params{0.0, delta, alpha, n};
    const TestOutcome outcome = run_fold_pipeline(
        algorithm, labeled, unlabeled, params, seed, seed_mode, shuffle,
        workers, &mode, &u);
    const double value =
        estimate_eps(outcome.deltas, delta, alpha, outcome.zeta);
    Json j = eps_estimate_json(value, outcome.deltas, delta, alpha,
                               outcome.zeta, outcome.degenerate);
    j["run"] = estimate_run_section(algorithm, labeled, u, seed, mode, outcome);
    emit(out, std::move(j));
  });
}

stab_status stab_run_oracle(const stab_algorithm* algorithm,
                            const stab_sampler* sampler, int64_t n,
                            double epsilon, const char* seed_mode,
                            int64_t replicates, uint64_t seed, int workers,
                            stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(algorithm, "algorithm");
    check_ptr(sampler, "sampler");
    const SeedMode mode = seed_mode_from_name(nonnull_str(seed_mode, "seed_mode"));
    const MCConfig mc{replicates, Seed{seed}, workers};
    const ProportionEstimate est = oracle_delta_star(
        *algorithm->algorithm, *sampler->sampler, n, epsilon, mode, mc);
    Json j = oracle_json(est, n, epsilon, mode, algorithm->algorithm->name(),
                         sampler->sampler->name());
    j["run"] = run_section(seed);
    emit(out, std::move(j));
  });
}

stab_status stab_run_power(const stab_algorithm* algorithm,
                           const stab_sampler* sampler, int64_t n_labeled,
                           int64_t n_unlabeled, double epsilon, double delta,
                           double alpha, int64_t n, const char* seed_mode,
                           int64_t replicates, uint64_t seed, int workers,
                           int have_delta_star, double delta_star,
                           stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(algorithm, "algorithm");
    check_ptr(sampler, "sampler");
    const SeedMode mode = seed_mode_from_name(nonnull_str(seed_mode, "seed_mode"));
    const StabilityParams params{epsilon, delta, alpha, n};
    const MCConfig mc{replicates, Seed{seed}, workers};
    const ProportionEstimate est =
        empirical_power(*algorithm->algorithm, *sampler->sampler, n_labeled,
                        n_unlabeled, params, mode, mc);
    const auto kr = compute_kappa(n, n_labeled, n_unlabeled);
    PowerFormulaResult formula;
    double bound_value = 0.0;
    if (have_delta_star != 0) {
      formula = power_formula(kr.fold_count, delta, delta_star, alpha);
      bound_value = power_bound(BoundKind::full_black_box, n, n_labeled,
                                n_unlabeled, alpha, delta, delta_star)
                        .value;
    }
    Json j = power_json(est, kr.kappa, kr.fold_count, params, mode,
                        algorithm->algorithm->name(), sampler->sampler->name(),
                        have_delta_star != 0, delta_star, formula, bound_value);
    j["run"] = run_section(seed);
    emit(out, std::move(j));
  });
}

stab_status stab_run_gof(const stab_algorithm* algorithm,
                         const stab_sampler* sampler, int64_t n,
                         int64_t n_labeled, int64_t n_unlabeled,
                         double epsilon, double delta_star,
                         const char* seed_mode, int64_t replicates,
                         uint64_t seed, int workers, stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(algorithm, "algorithm");
    check_ptr(sampler, "sampler");
    const SeedMode mode = seed_mode_from_name(nonnull_str(seed_mode, "seed_mode"));
    const MCConfig mc{replicates, Seed{seed}, workers};
    const GofReport report =
        gof_binomial_B(*algorithm->algorithm, *sampler->sampler, n, n_labeled,
                       n_unlabeled, epsilon, delta_star, mode, mc);
    Json j = gof_json(report, epsilon, mode, algorithm->algorithm->name(),
                      sampler->sampler->name());
    j["run"] = run_section(seed);
    emit(out, std::move(j));
  });
}

stab_status stab_power_bound(const char* kind, int64_t n, int64_t n_labeled,
                             int64_t n_unlabeled, double alpha, double delta,
                             double delta_star, stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    const BoundReport report =
        power_bound(bound_kind_from_name(nonnull_str(kind, "kind")), n,
                    n_labeled, n_unlabeled, alpha, delta, delta_star);
    emit(out, bound_json(report));
  });
}

stab_status stab_bound_comparison(int64_t n, int64_t n_labeled,
                                  int64_t n_unlabeled, double alpha,
                                  double delta, double delta_star,
                                  stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    const BoundComparison cmp =
        binomial_vs_bound(n, n_labeled, n_unlabeled, alpha, delta, delta_star);
    emit(out, bound_comparison_json(cmp, n, n_labeled, n_unlabeled, alpha,
                                    delta, delta_star));
  });
}

stab_status stab_run_adversary_instability(const stab_algorithm* base,
                                           const stab_sampler* base_sampler,
                                           const char* sentinel_kind,
                                           int64_t n, double c, double epsilon,
                                           double base_rate,
                                           int64_t replicates, uint64_t seed,
                                           int workers, stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(base, "base");
    check_ptr(base_sampler, "base_sampler");
    const SentinelKind kind =
        sentinel_kind_from_name(nonnull_str(sentinel_kind, "sentinel_kind"));
    const MCConfig mc{replicates, Seed{seed}, workers};
    const AdversaryDemo demo =
        demo_instability(base->algorithm, *base_sampler->sampler, kind, n, c,
                         epsilon, base_rate, mc);
    Json j = adversary_instability_json(demo, epsilon);
    j["run"] = run_section(seed);
    emit(out, std::move(j));
  });
}

stab_status stab_run_adversary_coupling(const stab_sampler* base_sampler,
                                        const char* sentinel_kind,
                                        int64_t n_labeled, int64_t n_unlabeled,
                                        double c, int64_t replicates,
                                        uint64_t seed, int workers,
                                        stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(base_sampler, "base_sampler");
    const SentinelKind kind =
        sentinel_kind_from_name(nonnull_str(sentinel_kind, "sentinel_kind"));
    const MCConfig mc{replicates, Seed{seed}, workers};
    const CouplingDemo demo = demo_coupling(*base_sampler->sampler, kind,
                                            n_labeled, n_unlabeled, c, mc);
    Json j = adversary_coupling_json(demo);
    j["run"] = run_section(seed);
    emit(out, std::move(j));
  });
}

stab_status stab_run_heuristic(const stab_algorithm* algorithm,
                               const stab_labeled* labeled,
                               const stab_unlabeled* unlabeled,
                               const char* method, int64_t n,
                               int64_t replicates, double epsilon,
                               const char* smoothing, double bandwidth,
                               const char* seed_mode, uint64_t seed,
                               int workers, stab_report** out) {
  return guarded([&] {
    check_ptr(out, "out");
    check_ptr(algorithm, "algorithm");
    check_ptr(labeled, "labeled");
    check_workers(workers);
    const SeedMode mode = seed_mode_from_name(nonnull_str(seed_mode, "seed_mode"));
    const std::string method_name = nonnull_str(method, "method");
    const UnlabeledDataset u = unlabeled_or_empty(unlabeled, labeled->data.dim());
    HeuristicRun run;
    if (method_name == "bootstrap") {
      // Probes resample from every feature vector available, labeled rows
      // first, so labeled-only data still yields a usable pool.
      UnlabeledDataset pool(labeled->data.dim());
      for (const auto& p : labeled->data.points()) pool.add(p.x);
      for (const auto& x : u.points()) pool.add(x);
      run = bootstrap_deltas(*algorithm->algorithm, labeled->data, pool, n,
                             replicates, epsilon, Seed{seed}, mode, workers);
    } else if (method_name == "simulated") {
      const Smoothing sm = smoothing_from_name(
          smoothing == nullptr ? std::string("none") : std::string(smoothing));
      run = simulated_deltas(*algorithm->algorithm, labeled->data, u, n,
                             replicates, epsilon, sm, bandwidth, Seed{seed},
                             mode, workers);
    } else {
      fail(ErrorCode::unknown_name, "unknown heuristic method '" + method_name +
                                        "' (expected bootstrap|simulated)");
    }
    Json j = heuristic_json(run, algorithm->algorithm->name(), mode);
    j["run"] = run_section(seed);
    j["run"]["labeled_digest"] = labeled_digest(labeled->data);
    j["run"]["unlabeled_digest"] = unlabeled_digest(u);
    emit(out, std::move(j));
  });
}

/* ---- reports ---- */

const char* stab_report_json(const stab_report* report) {
  return report == nullptr ? "" : report->json.c_str();
}

void stab_report_free(stab_report* report) { delete report; }

} /* extern "C" */
