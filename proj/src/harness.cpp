#include "stabcert/harness.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "stabcert/parallel.hpp"

namespace stabcert {

namespace {

Seed rep_seed(Seed master, std::int64_t r) {
  return derive_seed(master, "rep", static_cast<std::uint64_t>(r));
}

// Fresh n-pair training block plus one probe point, every point from its own
// derived seed.
LabeledDataset draw_labeled(const Sampler& sampler, Seed seed,
                            const char* label, std::int64_t count) {
  LabeledDataset out(sampler.dim());
  for (std::int64_t i = 1; i <= count; ++i)
    out.add(sampler.draw_pair(
        derive_seed(seed, label, static_cast<std::uint64_t>(i))));
  return out;
}

UnlabeledDataset draw_unlabeled(const Sampler& sampler, Seed seed,
                                const char* label, std::int64_t count) {
  UnlabeledDataset out(sampler.dim());
  for (std::int64_t i = 1; i <= count; ++i)
    out.add(sampler.draw_x(
        derive_seed(seed, label, static_cast<std::uint64_t>(i))));
  return out;
}

}  // namespace

ProportionEstimate make_proportion(std::int64_t hits, std::int64_t replicates) {
  require(replicates >= 1, ErrorCode::invalid_argument,
          "replicates must be >= 1");
  require(hits >= 0 && hits <= replicates, ErrorCode::invalid_argument,
          "hit count out of range");
  ProportionEstimate out;
  out.hits = hits;
  out.replicates = replicates;
  out.p_hat = static_cast<double>(hits) / static_cast<double>(replicates);
  out.std_error = std::sqrt(out.p_hat * (1.0 - out.p_hat) /
                            static_cast<double>(replicates));
  const double half = 1.959963984540054 * out.std_error;
  out.ci95 = {std::max(0.0, out.p_hat - half), std::min(1.0, out.p_hat + half)};
  return out;
}

ProportionEstimate oracle_delta_star(const Algorithm& algorithm,
                                     const Sampler& sampler, std::int64_t n,
                                     double epsilon, SeedMode mode,
                                     const MCConfig& mc) {
  mc.validate();
  require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::invalid_argument,
          "epsilon must be finite and >= 0");
  std::vector<unsigned char> hit(static_cast<std::size_t>(mc.replicates), 0);
  parallel_for(mc.replicates, mc.workers, [&](std::int64_t r) {
    const Seed rep = rep_seed(mc.master, r + 1);
    Fold fold;
    fold.train = draw_labeled(sampler, rep, "pt", n);
    fold.probe_x =
        sampler.draw_x(derive_seed(rep, "pt", static_cast<std::uint64_t>(n + 1)));
    fold.xi = derive_seed(rep, "fold-xi", 1);
    fold.index = 1;
    hit[static_cast<std::size_t>(r)] =
        fold_delta(algorithm, fold, mode) > epsilon ? 1 : 0;
  });
  const std::int64_t hits =
      std::count(hit.begin(), hit.end(), static_cast<unsigned char>(1));
  return make_proportion(hits, mc.replicates);
}

ProportionEstimate empirical_power(const Algorithm& algorithm,
                                   const Sampler& sampler,
                                   std::int64_t n_labeled,
                                   std::int64_t n_unlabeled,
                                   const StabilityParams& params, SeedMode mode,
                                   const MCConfig& mc) {
  mc.validate();
  params.validate();
  require(n_labeled >= 1, ErrorCode::invalid_argument,
          "n_labeled must be >= 1");
  require(n_unlabeled >= 0, ErrorCode::invalid_argument,
          "n_unlabeled must be >= 0");
  std::vector<unsigned char> hit(static_cast<std::size_t>(mc.replicates), 0);
  parallel_for(mc.replicates, mc.workers, [&](std::int64_t r) {
    const Seed rep = rep_seed(mc.master, r + 1);
    const LabeledDataset dl = draw_labeled(sampler, rep, "dl", n_labeled);
    const UnlabeledDataset du = draw_unlabeled(sampler, rep, "du", n_unlabeled);
    const TestOutcome outcome =
        binomial_test(algorithm, dl, du, params, derive_seed(rep, "test", 0),
                      mode, TestSettings{});
    hit[static_cast<std::size_t>(r)] = outcome.decision == 1 ? 1 : 0;
  });
  const std::int64_t hits =
      std::count(hit.begin(), hit.end(), static_cast<unsigned char>(1));
  return make_proportion(hits, mc.replicates);
}

GofReport gof_binomial_B(const Algorithm& algorithm, const Sampler& sampler,
                         std::int64_t n, std::int64_t n_labeled,
                         std::int64_t n_unlabeled, double epsilon,
                         double delta_star, SeedMode mode, const MCConfig& mc) {
  mc.validate();
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::invalid_argument,
          "epsilon must be finite and >= 0");
  require(std::isfinite(delta_star) && delta_star >= 0.0 && delta_star <= 1.0,
          ErrorCode::invalid_argument, "delta_star must lie in [0, 1]");
  const auto kr = compute_kappa(n, n_labeled, n_unlabeled);
  require(kr.fold_count >= 1, ErrorCode::insufficient_data,
          "goodness of fit needs at least one fold");
  const std::int64_t m = kr.fold_count;

  std::vector<std::int64_t> b_of(static_cast<std::size_t>(mc.replicates), 0);
  parallel_for(mc.replicates, mc.workers, [&](std::int64_t r) {
    const Seed rep = rep_seed(mc.master, r + 1);
    const LabeledDataset dl = draw_labeled(sampler, rep, "dl", n_labeled);
    const UnlabeledDataset du = draw_unlabeled(sampler, rep, "du", n_unlabeled);
    const auto folds = build_folds(dl, du, n, derive_seed(rep, "test", 0));
    std::int64_t b = 0;
    for (const auto& fold : folds)
      if (fold_delta(algorithm, fold, mode) > epsilon) ++b;
    b_of[static_cast<std::size_t>(r)] = b;
  });

  GofReport out;
  out.fold_count = m;
  out.delta_star = delta_star;
  out.replicates = mc.replicates;
  out.observed.assign(static_cast<std::size_t>(m) + 1, 0);
  for (std::int64_t b : b_of) ++out.observed[static_cast<std::size_t>(b)];

  // Pool cells from the right until every bin expects at least 5.
  const auto pmf = binomial_pmf_table(m, delta_star);
  std::vector<double> expected;
  std::vector<std::int64_t> observed;
  double exp_acc = 0.0;
  std::int64_t obs_acc = 0;
  for (std::int64_t k = 0; k <= m; ++k) {
    exp_acc += pmf[static_cast<std::size_t>(k)] *
               static_cast<double>(mc.replicates);
    obs_acc += out.observed[static_cast<std::size_t>(k)];
    const double remaining =
        static_cast<double>(mc.replicates) *
        (1.0 - binomial_cdf(m, delta_star, k));
    if (exp_acc >= 5.0 && (remaining >= 5.0 || k == m)) {
      expected.push_back(exp_acc);
      observed.push_back(obs_acc);
      exp_acc = 0.0;
      obs_acc = 0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0) {
    // Remainder too small to stand alone: fold it into the last bin.
    if (expected.empty()) {
      expected.push_back(exp_acc);
      observed.push_back(obs_acc);
    } else {
      expected.back() += exp_acc;
      observed.back() += obs_acc;
    }
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  out.statistic = stat;
  out.dof = static_cast<std::int64_t>(expected.size()) - 1;
  if (out.dof <= 0) {
    out.p_value = 1.0;  // single pooled bin: nothing to contrast
  } else {
    const boost::math::chi_squared dist(static_cast<double>(out.dof));
    out.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  }
  return out;
}

}  // namespace stabcert
