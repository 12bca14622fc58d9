// Exercises the public C surface (stabcert.h + shared library) exactly the
// way an embedding application would: no internal headers, only statuses,
// handles and JSON report strings.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "stabcert.h"

using nlohmann::json;

namespace {

// RAII wrappers so failing CHECKs cannot leak handles.
template <class T, void (*FreeFn)(T*)>
struct Owned {
  T* p = nullptr;
  Owned() = default;
  explicit Owned(T* raw) : p(raw) {}
  ~Owned() { FreeFn(p); }
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  Owned(Owned&& other) noexcept : p(other.p) { other.p = nullptr; }
  Owned& operator=(Owned&& other) noexcept {
    if (this != &other) {
      FreeFn(p);
      p = other.p;
      other.p = nullptr;
    }
    return *this;
  }
  T** out() { return &p; }
  operator T*() const { return p; }
};

using LabeledH = Owned<stab_labeled, stab_labeled_free>;
using UnlabeledH = Owned<stab_unlabeled, stab_unlabeled_free>;
using AlgorithmH = Owned<stab_algorithm, stab_algorithm_free>;
using SamplerH = Owned<stab_sampler, stab_sampler_free>;
using ReportH = Owned<stab_report, stab_report_free>;

std::filesystem::path temp_file(const char* stem) {
  return std::filesystem::temp_directory_path() /
         (std::string("stabcert_capi_") + stem);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// 30 labeled points on a 1-d grid plus labels; enough for three folds of
// size 10 together with the 3-point unlabeled pool below.
LabeledH grid_labeled(std::int64_t count) {
  std::vector<double> xs, ys;
  for (std::int64_t i = 0; i < count; ++i) {
    xs.push_back(0.01 * static_cast<double>(i));
    ys.push_back(1.0 + 0.1 * static_cast<double>(i % 7));
  }
  LabeledH h;
  REQUIRE(stab_labeled_from_arrays(xs.data(), ys.data(), count, 1, h.out()) ==
          STAB_OK);
  return h;
}

UnlabeledH grid_unlabeled(std::int64_t count) {
  std::vector<double> xs;
  for (std::int64_t i = 0; i < count; ++i)
    xs.push_back(0.5 + 0.03 * static_cast<double>(i));
  UnlabeledH h;
  REQUIRE(stab_unlabeled_from_arrays(xs.data(), count, 1, h.out()) == STAB_OK);
  return h;
}

json parse_report(const stab_report* r) {
  REQUIRE(r != nullptr);
  return json::parse(std::string(stab_report_json(r)));
}

// ---- callbacks for the custom-algorithm tests -------------------------

struct MeanCtx {
  std::atomic<int> fits{0};
  std::atomic<int> frees{0};
};

stab_status mean_fit(void* ctx, const double*, const double* labels,
                     int64_t count, int64_t, uint64_t, void** model_out) {
  auto* c = static_cast<MeanCtx*>(ctx);
  c->fits.fetch_add(1);
  double sum = 0.0;
  for (int64_t i = 0; i < count; ++i) sum += labels[i];
  *model_out = new double(count == 0 ? 0.0 : sum / static_cast<double>(count));
  return STAB_OK;
}

stab_status mean_predict(void*, const void* model, const double*, int64_t,
                         double* prediction_out) {
  *prediction_out = *static_cast<const double*>(model);
  return STAB_OK;
}

void mean_model_free(void* ctx, void* model) {
  static_cast<MeanCtx*>(ctx)->frees.fetch_add(1);
  delete static_cast<double*>(model);
}

stab_status failing_fit(void*, const double*, const double*, int64_t, int64_t,
                        uint64_t, void** model_out) {
  (void)model_out;
  return STAB_ERR_INTERNAL;
}

stab_status nan_predict(void*, const void* model, const double*, int64_t,
                        double* prediction_out) {
  (void)model;
  *prediction_out = std::nan("");
  return STAB_OK;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(stab_version()) == "0.1.0");
  CHECK(std::string(stab_status_name(STAB_OK)) == "ok");
  CHECK(std::string(stab_status_name(STAB_ERR_INVALID_ARGUMENT)) ==
        "invalid_argument");
  CHECK(std::string(stab_status_name(STAB_ERR_PARSE)) == "parse");
  CHECK(std::string(stab_status_name(STAB_ERR_IO)) == "io");
  CHECK(std::string(stab_status_name(STAB_ERR_DIMENSION_MISMATCH)) ==
        "dimension_mismatch");
  CHECK(std::string(stab_status_name(STAB_ERR_INSUFFICIENT_DATA)) ==
        "insufficient_data");
  CHECK(std::string(stab_status_name(STAB_ERR_UNKNOWN_NAME)) == "unknown_name");
  CHECK(std::string(stab_status_name(STAB_ERR_ALGORITHM_FAILURE)) ==
        "algorithm_failure");
  CHECK(std::string(stab_status_name(STAB_ERR_INTERNAL)) == "internal");
}

TEST_CASE("datasets from arrays") {
  const double xs[] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const double ys[] = {10.0, 20.0, 30.0};
  LabeledH l;
  REQUIRE(stab_labeled_from_arrays(xs, ys, 3, 2, l.out()) == STAB_OK);
  CHECK(stab_labeled_size(l) == 3);
  CHECK(stab_labeled_dim(l) == 2);
  CHECK(std::string(stab_last_error()).empty());

  UnlabeledH u;
  REQUIRE(stab_unlabeled_from_arrays(xs, 3, 2, u.out()) == STAB_OK);
  CHECK(stab_unlabeled_size(u) == 3);
  CHECK(stab_unlabeled_dim(u) == 2);

  SUBCASE("empty datasets are allowed") {
    LabeledH e;
    REQUIRE(stab_labeled_from_arrays(nullptr, nullptr, 0, 2, e.out()) ==
            STAB_OK);
    CHECK(stab_labeled_size(e) == 0);
    CHECK(stab_labeled_dim(e) == 2);
  }

  SUBCASE("validation failures") {
    stab_labeled* h = nullptr;
    CHECK(stab_labeled_from_arrays(xs, ys, -1, 2, &h) ==
          STAB_ERR_INVALID_ARGUMENT);
    CHECK(h == nullptr);  // out-parameter untouched on failure

    const double bad[] = {1.0, std::nan("")};
    const double y1[] = {0.0};
    CHECK(stab_labeled_from_arrays(bad, y1, 1, 2, &h) ==
          STAB_ERR_INVALID_ARGUMENT);
    CHECK(h == nullptr);
    CHECK_FALSE(std::string(stab_last_error()).empty());

    CHECK(stab_labeled_from_arrays(xs, ys, 3, 2, nullptr) ==
          STAB_ERR_INVALID_ARGUMENT);
    CHECK(std::string(stab_last_error()).find("out") != std::string::npos);
  }

  SUBCASE("null handle accessors degrade gracefully") {
    CHECK(stab_labeled_size(nullptr) == -1);
    CHECK(stab_labeled_dim(nullptr) == -1);
    CHECK(stab_unlabeled_size(nullptr) == -1);
    CHECK(stab_unlabeled_dim(nullptr) == -1);
    stab_labeled_free(nullptr);  // no-op by contract
    stab_unlabeled_free(nullptr);
  }
}

TEST_CASE("datasets from CSV files") {
  const auto lpath = temp_file("l.csv");
  const auto upath = temp_file("u.csv");
  write_file(lpath, "x1,y\n1,2\n-0.5,3.25\n");
  write_file(upath, "x1\n0.5\n");

  LabeledH l;
  REQUIRE(stab_labeled_load_csv(lpath.c_str(), l.out()) == STAB_OK);
  CHECK(stab_labeled_size(l) == 2);
  CHECK(stab_labeled_dim(l) == 1);

  UnlabeledH u;
  REQUIRE(stab_unlabeled_load_csv(upath.c_str(), u.out()) == STAB_OK);
  CHECK(stab_unlabeled_size(u) == 1);

  SUBCASE("missing file reports io") {
    stab_labeled* h = nullptr;
    CHECK(stab_labeled_load_csv("/no/such/file.csv", &h) == STAB_ERR_IO);
    CHECK(h == nullptr);
  }

  SUBCASE("malformed cell reports parse with the line number") {
    const auto bpath = temp_file("bad.csv");
    write_file(bpath, "x1,y\n1,2\n1,banana\n");
    stab_labeled* h = nullptr;
    CHECK(stab_labeled_load_csv(bpath.c_str(), &h) == STAB_ERR_PARSE);
    CHECK(h == nullptr);
    CHECK(std::string(stab_last_error()).find(":3") != std::string::npos);
    std::filesystem::remove(bpath);
  }

  std::filesystem::remove(lpath);
  std::filesystem::remove(upath);
}

TEST_CASE("builtin algorithms and samplers") {
  AlgorithmH zero;
  REQUIRE(stab_algorithm_builtin("zero", nullptr, zero.out()) == STAB_OK);
  CHECK(std::string(stab_algorithm_name(zero)) == "zero");

  AlgorithmH knn;
  REQUIRE(stab_algorithm_builtin("knn", "{\"k\": 3}", knn.out()) == STAB_OK);
  CHECK(std::string(stab_algorithm_name(knn)) == "knn(k=3)");

  CHECK(std::string(stab_algorithm_name(nullptr)).empty());

  stab_algorithm* a = nullptr;
  CHECK(stab_algorithm_builtin("nope", nullptr, &a) == STAB_ERR_UNKNOWN_NAME);
  CHECK(stab_algorithm_builtin("knn", "not json", &a) == STAB_ERR_PARSE);
  CHECK(stab_algorithm_builtin("knn", "[1,2]", &a) == STAB_ERR_PARSE);
  CHECK(stab_algorithm_builtin("knn", "{\"k\": \"three\"}", &a) ==
        STAB_ERR_PARSE);
  CHECK(stab_algorithm_builtin("knn", "{\"k\": 3, \"zzz\": 1}", &a) ==
        STAB_ERR_INVALID_ARGUMENT);
  CHECK(a == nullptr);

  SamplerH s;
  REQUIRE(stab_sampler_builtin("uniform_threshold", "{\"d\": 1}", s.out()) ==
          STAB_OK);
  stab_sampler* sp = nullptr;
  CHECK(stab_sampler_builtin("nope", nullptr, &sp) == STAB_ERR_UNKNOWN_NAME);
  CHECK(sp == nullptr);
}

TEST_CASE("numeric one-shots") {
  SUBCASE("kappa") {
    int64_t num = 0, den = 0, folds = 0;
    REQUIRE(stab_kappa(11, 100, 10, &num, &den, &folds) == STAB_OK);
    CHECK(num == 100);
    CHECK(den == 11);
    CHECK(folds == 9);
    REQUIRE(stab_kappa(10, 100, 10, &num, &den, &folds) == STAB_OK);
    CHECK(num == 10);
    CHECK(den == 1);
    CHECK(folds == 10);
    // Output pointers are individually optional.
    CHECK(stab_kappa(10, 100, 10, nullptr, nullptr, &folds) == STAB_OK);
    CHECK(stab_kappa(0, 100, 10, &num, &den, &folds) ==
          STAB_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("critical values and decisions") {
    int64_t k = -1;
    double a = 0.0;
    REQUIRE(stab_critical_values(10, 0.005, 0.1, &k, &a) == STAB_OK);
    CHECK(k == 0);
    CHECK(a == doctest::Approx(0.10514029532103565).epsilon(1e-14));
    REQUIRE(stab_critical_values(1, 0.1, 0.1, &k, &a) == STAB_OK);
    CHECK(k == 0);
    CHECK(a == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    REQUIRE(stab_critical_values(0, 0.3, 0.07, &k, &a) == STAB_OK);
    CHECK(k == 0);
    CHECK(a == doctest::Approx(0.07));
    CHECK(stab_critical_values(5, 0.5, 0.0, &k, &a) ==
          STAB_ERR_INVALID_ARGUMENT);

    int d = -1;
    REQUIRE(stab_decide(0, 1, 0.5, 0.99, &d) == STAB_OK);
    CHECK(d == 1);
    REQUIRE(stab_decide(1, 1, 0.5, 0.5, &d) == STAB_OK);
    CHECK(d == 1);  // at the boundary the tiebreak zeta <= a* certifies
    REQUIRE(stab_decide(1, 1, 0.5, 0.6, &d) == STAB_OK);
    CHECK(d == 0);
    REQUIRE(stab_decide(2, 1, 0.5, 0.0, &d) == STAB_OK);
    CHECK(d == 0);
    CHECK(stab_decide(1, 1, 0.0, 0.5, &d) == STAB_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("binomial cdf") {
    double v = -1.0;
    REQUIRE(stab_binomial_cdf(10, 0.5, 5, &v) == STAB_OK);
    CHECK(v == doctest::Approx(0.623046875).epsilon(1e-14));
    REQUIRE(stab_binomial_cdf(10, 0.5, -1, &v) == STAB_OK);
    CHECK(v == 0.0);
    REQUIRE(stab_binomial_cdf(10, 0.5, 10, &v) == STAB_OK);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(stab_binomial_cdf(10, 1.5, 5, &v) == STAB_ERR_INVALID_ARGUMENT);
  }

  SUBCASE("power formula") {
    double v = -1.0;
    int asserted = -1;
    REQUIRE(stab_power_formula(3, 0.5, 0.0, 0.1, &v, &asserted) == STAB_OK);
    CHECK(v == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(asserted == 1);
    REQUIRE(stab_power_formula(1, 0.9, 0.0, 0.5, &v, &asserted) == STAB_OK);
    CHECK(v == 1.0);  // capped
    CHECK(asserted == 1);  // delta_star = 0 is always exact
    REQUIRE(stab_power_formula(1, 0.9, 0.1, 0.5, &v, &asserted) == STAB_OK);
    CHECK(asserted == 0);  // delta above 1 - alpha^(1/m)
  }

  SUBCASE("delta estimators") {
    double v = -1.0;
    REQUIRE(stab_estimate_delta(0, 10, 0.1, "conservative", 0.5, &v) ==
            STAB_OK);
    CHECK(v == doctest::Approx(0.20567176531767473).epsilon(1e-12));
    REQUIRE(stab_estimate_delta(0, 1, 0.1, "randomized", 0.5, &v) == STAB_OK);
    CHECK(v == doctest::Approx(0.8).epsilon(1e-7));
    REQUIRE(stab_estimate_delta(10, 10, 0.1, "conservative", 0.5, &v) ==
            STAB_OK);
    CHECK(v == 1.0);
    REQUIRE(stab_estimate_delta(0, 0, 0.1, "conservative", 0.5, &v) == STAB_OK);
    CHECK(v == 1.0);  // no folds: only the vacuous bound
    double rand_v = -1.0, cons_v = -1.0;
    REQUIRE(stab_estimate_delta(2, 10, 0.05, "randomized", 0.3, &rand_v) ==
            STAB_OK);
    REQUIRE(stab_estimate_delta(2, 10, 0.05, "conservative", 0.3, &cons_v) ==
            STAB_OK);
    CHECK(rand_v <= cons_v);
    CHECK(stab_estimate_delta(0, 10, 0.1, "magic", 0.5, &v) ==
          STAB_ERR_UNKNOWN_NAME);
  }

  SUBCASE("eps estimator") {
    const double deltas[] = {1.2, 0.1, 0.5};
    double v = -1.0;
    REQUIRE(stab_estimate_eps(deltas, 3, 0.5, 0.5, 1.0, &v) == STAB_OK);
    CHECK(v == doctest::Approx(0.5).epsilon(1e-14));
    const double one[] = {0.7};
    REQUIRE(stab_estimate_eps(one, 1, 0.1, 0.05, 0.9, &v) == STAB_OK);
    CHECK(std::isinf(v));  // nothing certifiable at these settings
    CHECK(stab_estimate_eps(nullptr, 3, 0.5, 0.5, 1.0, &v) ==
          STAB_ERR_INVALID_ARGUMENT);
  }
}

TEST_CASE("certification workflow") {
  LabeledH l = grid_labeled(30);
  UnlabeledH u = grid_unlabeled(3);
  AlgorithmH zero;
  REQUIRE(stab_algorithm_builtin("zero", nullptr, zero.out()) == STAB_OK);

  ReportH r;
  REQUIRE(stab_run_test(zero, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 1,
                        r.out()) == STAB_OK);
  const json j = parse_report(r);
  CHECK(j["kind"] == "certificate");
  CHECK(j["schema_version"] == 1);
  CHECK(j["algorithm"] == "zero");
  CHECK(j["params"]["epsilon"] == 0.5);
  CHECK(j["params"]["n"] == 10);
  CHECK(j["seed"]["master"] == 42);
  CHECK(j["seed"]["mode"] == "same");
  CHECK(j["seed"]["shuffled"] == false);
  CHECK(j["kappa"]["rational"] == "3");
  CHECK(j["kappa"]["fold_count"] == 3);
  CHECK(j["folds"]["deltas"] == json::array({0.0, 0.0, 0.0}));
  CHECK(j["folds"]["xi_seeds"].size() == 3);
  CHECK(j["test"]["exceed_count"] == 0);
  CHECK(j["test"]["k_star"] == 2);  // Bin(3, 0.9) puts little mass below 2
  CHECK(j["test"]["decision"] == 1);
  CHECK(j["test"]["degenerate"] == false);
  CHECK(j["warnings"].empty());
  const std::string ld = j["data"]["labeled_digest"].get<std::string>();
  CHECK(ld.rfind("fnv1a64:", 0) == 0);

  SUBCASE("byte-identical across worker counts") {
    ReportH r4;
    REQUIRE(stab_run_test(zero, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 4,
                          r4.out()) == STAB_OK);
    CHECK(std::string(stab_report_json(r)) ==
          std::string(stab_report_json(r4)));
  }

  SUBCASE("unlabeled pool is optional") {
    ReportH r2;
    REQUIRE(stab_run_test(zero, l, nullptr, 0.5, 0.9, 0.1, 10, 42, "same", 0,
                          1, r2.out()) == STAB_OK);
    const json j2 = parse_report(r2);
    CHECK(j2["kappa"]["rational"] == "30/11");
    CHECK(j2["kappa"]["fold_count"] == 2);
  }

  SUBCASE("argument validation") {
    stab_report* raw = nullptr;
    CHECK(stab_run_test(zero, l, u, 0.5, 0.9, 0.1, 10, 42, "weird", 0, 1,
                        &raw) == STAB_ERR_UNKNOWN_NAME);
    CHECK(stab_run_test(zero, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 0,
                        &raw) == STAB_ERR_INVALID_ARGUMENT);
    CHECK(stab_run_test(nullptr, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 1,
                        &raw) == STAB_ERR_INVALID_ARGUMENT);
    CHECK(raw == nullptr);
  }
}

TEST_CASE("estimate workflows") {
  LabeledH l = grid_labeled(30);
  UnlabeledH u = grid_unlabeled(3);
  AlgorithmH zero;
  REQUIRE(stab_algorithm_builtin("zero", nullptr, zero.out()) == STAB_OK);

  ReportH rd;
  REQUIRE(stab_run_estimate_delta(zero, l, u, 0.5, 0.1, 10, 42, "same",
                                  "conservative", 0, 2, rd.out()) == STAB_OK);
  const json jd = parse_report(rd);
  CHECK(jd["kind"] == "estimate");
  CHECK(jd["target"] == "delta");
  CHECK(jd["method"] == "conservative");
  CHECK(jd["inputs"]["exceed_count"] == 0);
  CHECK(jd["inputs"]["fold_count"] == 3);
  CHECK(jd["run"]["seed"]["master"] == 42);
  // B = 0 in m = 3 folds: the exact binomial upper bound is 1 - alpha^(1/3),
  // recovered by the solver to its bisection tolerance.
  const double expect = 1.0 - std::pow(0.1, 1.0 / 3.0);
  CHECK(std::fabs(jd["value"].get<double>() - expect) < 1e-9);

  ReportH re;
  REQUIRE(stab_run_estimate_eps(zero, l, u, 0.9, 0.1, 10, 42, "same", 0, 2,
                                re.out()) == STAB_OK);
  const json je = parse_report(re);
  CHECK(je["kind"] == "estimate");
  CHECK(je["target"] == "eps");
  CHECK(je["method"] == "order_statistic");
  CHECK(je["value"] == 0.0);  // the zero algorithm never moves
  CHECK(je["value_infinite"] == false);
  CHECK(je["inputs"]["deltas"] == json::array({0.0, 0.0, 0.0}));
}

TEST_CASE("custom algorithm callbacks") {
  LabeledH l = grid_labeled(30);
  UnlabeledH u = grid_unlabeled(3);

  SUBCASE("mean predictor round trip, every model freed") {
    MeanCtx ctx;
    AlgorithmH mean;
    REQUIRE(stab_algorithm_custom("mean", mean_fit, mean_predict,
                                  mean_model_free, &ctx, mean.out()) ==
            STAB_OK);
    CHECK(std::string(stab_algorithm_name(mean)) == "mean");
    ReportH r;
    REQUIRE(stab_run_test(mean, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 2,
                          r.out()) == STAB_OK);
    const json j = parse_report(r);
    CHECK(j["algorithm"] == "mean");
    CHECK(j["kappa"]["fold_count"] == 3);
    // Two fits per fold (n and n-1 points).
    CHECK(ctx.fits.load() == 6);
    CHECK(ctx.frees.load() == ctx.fits.load());
  }

  SUBCASE("fit failure aborts the run") {
    AlgorithmH bad;
    REQUIRE(stab_algorithm_custom("bad", failing_fit, mean_predict, nullptr,
                                  nullptr, bad.out()) == STAB_OK);
    stab_report* raw = nullptr;
    CHECK(stab_run_test(bad, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 1,
                        &raw) == STAB_ERR_ALGORITHM_FAILURE);
    CHECK(raw == nullptr);
    CHECK(std::string(stab_last_error()).find("fit callback") !=
          std::string::npos);
  }

  SUBCASE("non-finite prediction aborts the run") {
    MeanCtx ctx;
    AlgorithmH bad;
    REQUIRE(stab_algorithm_custom("nanny", mean_fit, nan_predict,
                                  mean_model_free, &ctx, bad.out()) == STAB_OK);
    stab_report* raw = nullptr;
    CHECK(stab_run_test(bad, l, u, 0.5, 0.9, 0.1, 10, 42, "same", 0, 1,
                        &raw) == STAB_ERR_ALGORITHM_FAILURE);
    CHECK(raw == nullptr);
  }

  SUBCASE("null callbacks are rejected") {
    stab_algorithm* raw = nullptr;
    CHECK(stab_algorithm_custom("x", nullptr, mean_predict, nullptr, nullptr,
                                &raw) == STAB_ERR_INVALID_ARGUMENT);
    CHECK(stab_algorithm_custom("x", mean_fit, nullptr, nullptr, nullptr,
                                &raw) == STAB_ERR_INVALID_ARGUMENT);
    CHECK(raw == nullptr);
  }
}

TEST_CASE("monte carlo workflows") {
  AlgorithmH coin;
  REQUIRE(stab_algorithm_builtin("coin", "{\"q\": 0.3, \"jump\": 1}",
                                 coin.out()) == STAB_OK);
  AlgorithmH zero;
  REQUIRE(stab_algorithm_builtin("zero", nullptr, zero.out()) == STAB_OK);
  SamplerH s;
  REQUIRE(stab_sampler_builtin("uniform_threshold", "{\"d\": 1}", s.out()) ==
          STAB_OK);

  SUBCASE("oracle: a seed-only randomized algorithm is exactly same-seed stable") {
    ReportH r;
    REQUIRE(stab_run_oracle(coin, s, 5, 0.5, "same", 300, 7, 2, r.out()) ==
            STAB_OK);
    const json j = parse_report(r);
    CHECK(j["kind"] == "oracle");
    CHECK(j["estimate"]["hits"] == 0);
    CHECK(j["estimate"]["p_hat"] == 0.0);
    CHECK(j["estimate"]["replicates"] == 300);
    CHECK(j["seed_mode"] == "same");
  }

  SUBCASE("oracle workers do not change the report") {
    ReportH r1, r5;
    REQUIRE(stab_run_oracle(coin, s, 5, 0.5, "independent", 300, 7, 1,
                            r1.out()) == STAB_OK);
    REQUIRE(stab_run_oracle(coin, s, 5, 0.5, "independent", 300, 7, 5,
                            r5.out()) == STAB_OK);
    CHECK(std::string(stab_report_json(r1)) ==
          std::string(stab_report_json(r5)));
  }

  SUBCASE("power: a stable algorithm at generous delta is always accepted") {
    ReportH r;
    REQUIRE(stab_run_power(zero, s, 30, 3, 0.5, 0.9, 0.1, 10, "same", 200, 11,
                           2, 1, 0.0, r.out()) == STAB_OK);
    const json j = parse_report(r);
    CHECK(j["kind"] == "power");
    CHECK(j["kappa"]["fold_count"] == 3);
    CHECK(j["acceptance"]["hits"] == 200);
    CHECK(j["acceptance"]["p_hat"] == 1.0);
    CHECK(j["formula"]["value"] == 1.0);  // 0.1 * 10^3 capped at 1
    CHECK(j["bound"] == 1.0);
    CHECK(j["delta_star"] == 0.0);
  }

  SUBCASE("power without a known true rate omits the closed forms") {
    ReportH r;
    REQUIRE(stab_run_power(zero, s, 30, 3, 0.5, 0.9, 0.1, 10, "same", 50, 11,
                           1, 0, 0.0, r.out()) == STAB_OK);
    const json j = parse_report(r);
    CHECK(j["delta_star"].is_null());
    CHECK(j["formula"].is_null());
    CHECK(j["bound"].is_null());
  }

  SUBCASE("goodness of fit returns a sane chi-square summary") {
    AlgorithmH tm;
    REQUIRE(stab_algorithm_builtin(
                "threshold_max", "{\"jump\": 1, \"threshold\": 0.65}",
                tm.out()) == STAB_OK);
    // True per-fold exceedance rate for this algorithm under the uniform
    // sampler: p (1-p)^(n-1) with p = 0.35.
    const double delta_star = 0.35 * std::pow(0.65, 9);
    ReportH r;
    REQUIRE(stab_run_gof(tm, s, 10, 50, 6, 0.5, delta_star, "same", 400, 13, 2,
                         r.out()) == STAB_OK);
    const json j = parse_report(r);
    CHECK(j["kind"] == "gof");
    CHECK(j["fold_count"] == 5);
    CHECK(j["replicates"] == 400);
    std::int64_t total = 0;
    for (const auto& c : j["observed"]) total += c.get<std::int64_t>();
    CHECK(total == 400);
    CHECK(j["p_value"].get<double>() >= 0.0);
    CHECK(j["p_value"].get<double>() <= 1.0);
  }
}

TEST_CASE("bounds through the C surface") {
  ReportH r;
  REQUIRE(stab_power_bound("labeled_only", 10, 100, 0, 0.05, 0.1, 0.0,
                           r.out()) == STAB_OK);
  const json j = parse_report(r);
  CHECK(j["kind"] == "bound");
  CHECK(j["bound_kind"] == "labeled_only");
  CHECK(j["exponent"]["rational"] == "10");
  CHECK(j["value"].get<double>() ==
        doctest::Approx(0.14339859953962214).epsilon(1e-14));
  CHECK(j["capped"] == false);

  ReportH r2;
  REQUIRE(stab_power_bound("full_black_box", 10, 100, 0, 0.05, 0.1, 0.0,
                           r2.out()) == STAB_OK);
  const json j2 = parse_report(r2);
  CHECK(j2["exponent"]["rational"] == "100/11");
  CHECK(j2["value"].get<double>() ==
        doctest::Approx(0.13030083273874865).epsilon(1e-14));

  stab_report* raw = nullptr;
  CHECK(stab_power_bound("nope", 10, 100, 0, 0.05, 0.1, 0.0, &raw) ==
        STAB_ERR_UNKNOWN_NAME);
  CHECK(stab_power_bound("labeled_only", 10, 100, 0, 0.05, 0.1, 1.5, &raw) ==
        STAB_ERR_INVALID_ARGUMENT);
  CHECK(raw == nullptr);

  SUBCASE("comparison at an integral fold ratio is exactly optimal") {
    ReportH rc;
    REQUIRE(stab_bound_comparison(10, 30, 3, 0.1, 0.3, 0.1, rc.out()) ==
            STAB_OK);
    const json jc = parse_report(rc);
    CHECK(jc["kind"] == "bound_comparison");
    CHECK(jc["kappa"]["rational"] == "3");
    CHECK(jc["achieved"] == jc["bound"]);
    CHECK(jc["ratio"] == 1.0);
    CHECK(jc["optimal"] == true);
    CHECK(jc["regime_asserted"] == true);
  }
}

TEST_CASE("adversary demos through the C surface") {
  AlgorithmH zero;
  REQUIRE(stab_algorithm_builtin("zero", nullptr, zero.out()) == STAB_OK);
  SamplerH s;
  REQUIRE(stab_sampler_builtin("uniform_threshold", "{\"d\": 1}", s.out()) ==
          STAB_OK);

  SUBCASE("instability demo matches its closed-form hit rate") {
    ReportH r;
    REQUIRE(stab_run_adversary_instability(zero, s, "label", 5, 0.2, 0.5, 0.0,
                                           20000, 1, 4, r.out()) == STAB_OK);
    const json j = parse_report(r);
    CHECK(j["kind"] == "adversary");
    CHECK(j["demo"] == "instability");
    CHECK(j["sentinel"]["kind"] == "label");
    CHECK(j["predicted"].get<double>() ==
          doctest::Approx(1.0 - std::pow(0.8, 5)).epsilon(1e-12));
    CHECK(j["within_3se"] == true);
  }

  SUBCASE("coupling demo matches its closed-form collision rate") {
    ReportH r;
    REQUIRE(stab_run_adversary_coupling(s, "label", 3, 0, 0.1, 20000, 2, 4,
                                        r.out()) == STAB_OK);
    const json j = parse_report(r);
    CHECK(j["demo"] == "coupling");
    CHECK(j["predicted"].get<double>() ==
          doctest::Approx(std::pow(0.9, 3)).epsilon(1e-12));
    CHECK(j["within_3se"] == true);
  }
}

TEST_CASE("heuristics are never certificates") {
  LabeledH l = grid_labeled(30);
  AlgorithmH zero;
  REQUIRE(stab_algorithm_builtin("zero", nullptr, zero.out()) == STAB_OK);

  ReportH r;
  REQUIRE(stab_run_heuristic(zero, l, nullptr, "bootstrap", 10, 50, 0.5,
                             nullptr, 0.0, "same", 9, 2, r.out()) == STAB_OK);
  const json j = parse_report(r);
  CHECK(j["kind"] == "heuristic");
  CHECK(j["method"] == "bootstrap");
  CHECK(j["certified"] == false);
  CHECK(j["replicates"] == 50);
  CHECK(j["deltas"].size() == 50);
  CHECK(j["exceed_count"] == 0);

  stab_report* raw = nullptr;
  CHECK(stab_run_heuristic(zero, l, nullptr, "magic", 10, 50, 0.5, nullptr,
                           0.0, "same", 9, 1, &raw) == STAB_ERR_UNKNOWN_NAME);
  CHECK(stab_run_heuristic(zero, l, nullptr, "simulated", 10, 50, 0.5,
                           "gaussian", -1.0, "same", 9, 1,
                           &raw) == STAB_ERR_INVALID_ARGUMENT);
  CHECK(stab_run_heuristic(zero, l, nullptr, "simulated", 10, 50, 0.5,
                           "boxcar", 0.1, "same", 9, 1,
                           &raw) == STAB_ERR_UNKNOWN_NAME);
  CHECK(raw == nullptr);
}

TEST_CASE("report helpers tolerate null") {
  CHECK(std::string(stab_report_json(nullptr)).empty());
  stab_report_free(nullptr);
}
