#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "stabcert/adversary.hpp"
#include "stabcert/bounds.hpp"
#include "stabcert/harness.hpp"
#include "stabcert/inference.hpp"
#include "stabcert/variants.hpp"

namespace stabcert {

// All report builders emit ordered JSON objects with a "kind" discriminator
// and a fixed key order, so serialisation is byte-stable for identical
// inputs.  Seeds are emitted as unsigned integers (lossless in JSON);
// doubles use shortest round-trip decimals.

using Json = nlohmann::ordered_json;

const char* library_version();

Json seed_mode_json(SeedMode mode);
SeedMode seed_mode_from_name(const std::string& name);
const char* sentinel_kind_name(SentinelKind kind);
SentinelKind sentinel_kind_from_name(const std::string& name);

Json proportion_json(const ProportionEstimate& est);

/// kind = "certificate": the audited outcome of one certification run.
Json certificate_json(const TestOutcome& outcome, const StabilityParams& params,
                      const std::string& algorithm_name,
                      const std::string& labeled_digest_str,
                      const std::string& unlabeled_digest_str);

/// kind = "estimate": a confidence bound for delta or for epsilon.
Json delta_estimate_json(double value, DeltaMethod method,
                         std::int64_t exceed_count, std::int64_t fold_count,
                         double alpha, double epsilon, double zeta,
                         bool degenerate);
Json eps_estimate_json(double value, const std::vector<double>& deltas,
                       double delta, double alpha, double zeta,
                       bool degenerate);

/// kind = "oracle": Monte Carlo estimate of the true instability rate.
Json oracle_json(const ProportionEstimate& est, std::int64_t n, double epsilon,
                 SeedMode mode, const std::string& algorithm_name,
                 const std::string& sampler_name);

/// kind = "power": measured acceptance rate with the closed form and the
/// universal ceiling alongside (when a true rate was supplied).
Json power_json(const ProportionEstimate& est, const Rational& kappa,
                std::int64_t fold_count, const StabilityParams& params,
                SeedMode mode, const std::string& algorithm_name,
                const std::string& sampler_name, bool have_delta_star,
                double delta_star, const PowerFormulaResult& formula,
                double bound_value);

/// kind = "bound": one universal ceiling evaluation.
Json bound_json(const BoundReport& report);

/// kind = "bound_comparison": achieved acceptance vs the ceiling.
Json bound_comparison_json(const BoundComparison& cmp, std::int64_t n,
                           std::int64_t n_labeled, std::int64_t n_unlabeled,
                           double alpha, double delta, double delta_star);

/// kind = "gof": exceedance-count histogram against its binomial law.
Json gof_json(const GofReport& report, double epsilon, SeedMode mode,
              const std::string& algorithm_name,
              const std::string& sampler_name);

/// kind = "adversary": the spiked-pair demonstrations.
Json adversary_instability_json(const AdversaryDemo& demo, double epsilon);
Json adversary_coupling_json(const CouplingDemo& demo);

/// kind = "heuristic": resampling runs; never a certificate.
Json heuristic_json(const HeuristicRun& run, const std::string& algorithm_name,
                    SeedMode mode);

}  // namespace stabcert
