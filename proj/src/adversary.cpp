#include "stabcert/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "stabcert/parallel.hpp"

namespace stabcert {

namespace {

double window_base(std::span<const double> observed, double* width) {
  double lo = 0.0, hi = 1.0;
  if (!observed.empty()) {
    lo = hi = observed[0];
    for (double v : observed) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  *width = std::max(hi - lo, 1.0);
  return hi;
}

}  // namespace

double pick_sentinel_label(std::span<const double> observed, Seed seed) {
  double w = 0.0;
  const double hi = window_base(observed, &w);
  RandomStream stream(seed);
  for (;;) {
    const double cand = hi + 1000.0 * w + stream.next_unit() * w;
    require(std::isfinite(cand), ErrorCode::invalid_argument,
            "observed labels too large to place a sentinel beyond them");
    if (std::find(observed.begin(), observed.end(), cand) == observed.end())
      return cand;
  }
}

FeatureVector pick_sentinel_feature(std::span<const FeatureVector> observed,
                                    std::int64_t dim, Seed seed) {
  require(dim >= 1, ErrorCode::invalid_argument, "dim must be >= 1");
  RandomStream stream(seed);
  for (;;) {
    FeatureVector cand;
    cand.reserve(static_cast<std::size_t>(dim));
    for (std::int64_t j = 0; j < dim; ++j) {
      std::vector<double> coord;
      coord.reserve(observed.size());
      for (const auto& x : observed) coord.push_back(x[static_cast<std::size_t>(j)]);
      double w = 0.0;
      const double hi = window_base(coord, &w);
      const double cj = hi + 1000.0 * w + stream.next_unit() * w;
      require(std::isfinite(cj), ErrorCode::invalid_argument,
              "observed features too large to place a sentinel beyond them");
      cand.push_back(cj);
    }
    // Every coordinate already clears the observed range, so a collision is
    // impossible; the check guards hand-built inputs.
    if (std::find(observed.begin(), observed.end(), cand) == observed.end())
      return cand;
  }
}

Sentinel make_sentinel(const Sampler& sampler, SentinelKind kind, Seed seed,
                       std::int64_t pilot_draws) {
  require(pilot_draws >= 1, ErrorCode::invalid_argument,
          "pilot_draws must be >= 1");
  Sentinel out;
  out.kind = kind;
  if (kind == SentinelKind::label) {
    std::vector<double> ys;
    ys.reserve(static_cast<std::size_t>(pilot_draws));
    for (std::int64_t i = 1; i <= pilot_draws; ++i)
      ys.push_back(
          sampler.draw_pair(derive_seed(seed, "pilot", static_cast<std::uint64_t>(i)))
              .y);
    out.y_star = pick_sentinel_label(ys, derive_seed(seed, "choose", 0));
  } else {
    std::vector<FeatureVector> xs;
    xs.reserve(static_cast<std::size_t>(pilot_draws));
    for (std::int64_t i = 1; i <= pilot_draws; ++i)
      xs.push_back(sampler.draw_x(
          derive_seed(seed, "pilot", static_cast<std::uint64_t>(i))));
    out.x_star =
        pick_sentinel_feature(xs, sampler.dim(), derive_seed(seed, "choose", 0));
  }
  return out;
}

namespace {

bool data_contains_sentinel(const LabeledDataset& data, const Sentinel& s) {
  if (s.kind == SentinelKind::label) {
    for (const auto& p : data.points())
      if (p.y == s.y_star) return true;
  } else {
    for (const auto& p : data.points())
      if (p.x == s.x_star) return true;
  }
  return false;
}

// Predicts 1 + epsilon + max over the stored drop-one fits: by symmetry of
// the base algorithm the maximum over all orderings collapses to the n
// choices of dropped point.
class SpikedModel : public Model {
 public:
  SpikedModel(std::vector<ModelPtr> drop_fits, double epsilon)
      : drop_fits_(std::move(drop_fits)), epsilon_(epsilon) {}
  double predict(const FeatureVector& x) const override {
    double best = drop_fits_.front()->predict(x);
    for (std::size_t j = 1; j < drop_fits_.size(); ++j)
      best = std::max(best, drop_fits_[j]->predict(x));
    return 1.0 + epsilon_ + best;
  }

 private:
  std::vector<ModelPtr> drop_fits_;
  double epsilon_;
};

// Base model everywhere except at the sentinel feature vector.
class FeatureTriggerModel : public Model {
 public:
  FeatureTriggerModel(ModelPtr base, ModelPtr spiked, FeatureVector x_star)
      : base_(std::move(base)),
        spiked_(std::move(spiked)),
        x_star_(std::move(x_star)) {}
  double predict(const FeatureVector& x) const override {
    if (x == x_star_) return spiked_->predict(x);
    return base_->predict(x);
  }

 private:
  ModelPtr base_;
  ModelPtr spiked_;
  FeatureVector x_star_;
};

class PerturbedAlgorithm : public Algorithm {
 public:
  PerturbedAlgorithm(AlgorithmPtr base, Sentinel sentinel, double epsilon,
                     std::int64_t n)
      : base_(std::move(base)),
        sentinel_(std::move(sentinel)),
        epsilon_(epsilon),
        n_(n) {
    require(base_ != nullptr, ErrorCode::invalid_argument,
            "base algorithm must not be null");
    require(std::isfinite(epsilon) && epsilon >= 0.0,
            ErrorCode::invalid_argument, "epsilon must be finite and >= 0");
    require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
  }

  std::string name() const override {
    return "adversarial(" + base_->name() + ")";
  }

  ModelPtr fit(const LabeledDataset& data, Seed seed) const override {
    // The trigger only arms on fits of exactly n points; every other size
    // (in particular the n-1 point refit) is the base algorithm untouched.
    if (data.size() != n_) return base_->fit(data, seed);
    const bool triggered = data_contains_sentinel(data, sentinel_);
    if (sentinel_.kind == SentinelKind::label) {
      if (!triggered) return base_->fit(data, seed);
      return std::make_shared<SpikedModel>(drop_one_fits(data, seed), epsilon_);
    }
    auto spiked =
        std::make_shared<SpikedModel>(drop_one_fits(data, seed), epsilon_);
    if (triggered) return spiked;
    return std::make_shared<FeatureTriggerModel>(base_->fit(data, seed),
                                                 std::move(spiked),
                                                 sentinel_.x_star);
  }

 private:
  std::vector<ModelPtr> drop_one_fits(const LabeledDataset& data,
                                      Seed seed) const {
    std::vector<ModelPtr> fits;
    fits.reserve(static_cast<std::size_t>(data.size()));
    for (std::int64_t j = 0; j < data.size(); ++j)
      fits.push_back(base_->fit(data.without(j), seed));
    return fits;
  }

  AlgorithmPtr base_;
  Sentinel sentinel_;
  double epsilon_;
  std::int64_t n_;
};

LabeledPoint apply_sentinel(LabeledPoint p, const Sentinel& s) {
  if (s.kind == SentinelKind::label)
    p.y = s.y_star;
  else
    p.x = s.x_star;
  return p;
}

class PerturbedSampler : public Sampler {
 public:
  PerturbedSampler(SamplerPtr base, double c, Sentinel sentinel)
      : base_(std::move(base)), c_(c), sentinel_(std::move(sentinel)) {
    require(base_ != nullptr, ErrorCode::invalid_argument,
            "base sampler must not be null");
    require(std::isfinite(c) && c >= 0.0 && c <= 1.0,
            ErrorCode::invalid_argument, "c must lie in [0, 1]");
  }
  std::string name() const override {
    return "contaminated(" + base_->name() + ")";
  }
  std::int64_t dim() const override { return base_->dim(); }
  LabeledPoint draw_pair(Seed seed) const override {
    return coupled_pair(*base_, c_, sentinel_, seed).perturbed;
  }
  FeatureVector draw_x(Seed seed) const override {
    // Same mix draw as draw_pair, so draw_x(s) == draw_pair(s).x holds.
    if (sentinel_.kind == SentinelKind::feature) {
      const bool replaced =
          RandomStream(derive_seed(seed, "mix", 0)).next_unit() < c_;
      if (replaced) return sentinel_.x_star;
    }
    return base_->draw_x(derive_seed(seed, "base", 0));
  }

 private:
  SamplerPtr base_;
  double c_;
  Sentinel sentinel_;
};

}  // namespace

AlgorithmPtr perturbed_algorithm(AlgorithmPtr base, const Sentinel& sentinel,
                                 double epsilon, std::int64_t n) {
  return std::make_shared<PerturbedAlgorithm>(std::move(base), sentinel,
                                              epsilon, n);
}

CoupledPair coupled_pair(const Sampler& base, double c,
                         const Sentinel& sentinel, Seed seed) {
  require(std::isfinite(c) && c >= 0.0 && c <= 1.0, ErrorCode::invalid_argument,
          "c must lie in [0, 1]");
  CoupledPair out;
  out.original = base.draw_pair(derive_seed(seed, "base", 0));
  out.replaced = RandomStream(derive_seed(seed, "mix", 0)).next_unit() < c;
  out.perturbed =
      out.replaced ? apply_sentinel(out.original, sentinel) : out.original;
  return out;
}

SamplerPtr perturbed_sampler(SamplerPtr base, double c,
                             const Sentinel& sentinel) {
  return std::make_shared<PerturbedSampler>(std::move(base), c, sentinel);
}

AdversaryDemo demo_instability(AlgorithmPtr base_algorithm,
                               const Sampler& base_sampler, SentinelKind kind,
                               std::int64_t n, double c, double epsilon,
                               double base_rate, const MCConfig& mc) {
  mc.validate();
  require(base_algorithm != nullptr, ErrorCode::invalid_argument,
          "base algorithm must not be null");
  require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
  require(std::isfinite(c) && c >= 0.0 && c <= 1.0, ErrorCode::invalid_argument,
          "c must lie in [0, 1]");
  require(std::isfinite(base_rate) && base_rate >= 0.0 && base_rate <= 1.0,
          ErrorCode::invalid_argument, "base_rate must lie in [0, 1]");
  require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::invalid_argument,
          "epsilon must be finite and >= 0");

  AdversaryDemo out;
  out.kind = kind;
  out.n = n;
  out.c = c;
  out.base_rate = base_rate;
  out.sentinel =
      make_sentinel(base_sampler, kind, derive_seed(mc.master, "sentinel", 0));
  const AlgorithmPtr spiked =
      perturbed_algorithm(std::move(base_algorithm), out.sentinel, epsilon, n);

  std::vector<unsigned char> hit(static_cast<std::size_t>(mc.replicates), 0);
  parallel_for(mc.replicates, mc.workers, [&](std::int64_t r) {
    const Seed rep = derive_seed(mc.master, "rep", static_cast<std::uint64_t>(r + 1));
    Fold fold;
    fold.train = LabeledDataset(base_sampler.dim());
    for (std::int64_t i = 1; i <= n; ++i)
      fold.train.add(coupled_pair(base_sampler, c, out.sentinel,
                                  derive_seed(rep, "pt", static_cast<std::uint64_t>(i)))
                         .perturbed);
    fold.probe_x = coupled_pair(base_sampler, c, out.sentinel,
                                derive_seed(rep, "pt", static_cast<std::uint64_t>(n + 1)))
                       .perturbed.x;
    fold.xi = derive_seed(rep, "fold-xi", 1);
    fold.index = 1;
    hit[static_cast<std::size_t>(r)] =
        fold_delta(*spiked, fold, SeedMode::same_seed) > epsilon ? 1 : 0;
  });
  const std::int64_t hits =
      std::count(hit.begin(), hit.end(), static_cast<unsigned char>(1));
  out.empirical = make_proportion(hits, mc.replicates);
  const double exponent =
      kind == SentinelKind::label ? static_cast<double>(n)
                                  : static_cast<double>(n + 1);
  out.predicted = 1.0 - (1.0 - base_rate) * std::pow(1.0 - c, exponent);
  const double se = std::sqrt(out.predicted * (1.0 - out.predicted) /
                              static_cast<double>(mc.replicates));
  out.within_3se = std::abs(out.empirical.p_hat - out.predicted) <= 3.0 * se;
  return out;
}

CouplingDemo demo_coupling(const Sampler& base_sampler, SentinelKind kind,
                           std::int64_t n_labeled, std::int64_t n_unlabeled,
                           double c, const MCConfig& mc) {
  mc.validate();
  require(n_labeled >= 0 && n_unlabeled >= 0, ErrorCode::invalid_argument,
          "dataset sizes must be >= 0");
  require(std::isfinite(c) && c >= 0.0 && c <= 1.0, ErrorCode::invalid_argument,
          "c must lie in [0, 1]");

  CouplingDemo out;
  out.kind = kind;
  out.n_labeled = n_labeled;
  out.n_unlabeled = n_unlabeled;
  out.c = c;
  out.sentinel =
      make_sentinel(base_sampler, kind, derive_seed(mc.master, "sentinel", 0));

  std::vector<unsigned char> hit(static_cast<std::size_t>(mc.replicates), 0);
  parallel_for(mc.replicates, mc.workers, [&](std::int64_t r) {
    const Seed rep = derive_seed(mc.master, "rep", static_cast<std::uint64_t>(r + 1));
    bool equal = true;
    for (std::int64_t i = 1; i <= n_labeled && equal; ++i) {
      const CoupledPair cp = coupled_pair(
          base_sampler, c, out.sentinel,
          derive_seed(rep, "pt", static_cast<std::uint64_t>(i)));
      equal = cp.original == cp.perturbed;
    }
    for (std::int64_t j = 1; j <= n_unlabeled && equal; ++j) {
      const CoupledPair cp = coupled_pair(
          base_sampler, c, out.sentinel,
          derive_seed(rep, "pt", static_cast<std::uint64_t>(n_labeled + j)));
      // Only the features matter for an unlabeled row.
      equal = cp.original.x == cp.perturbed.x;
    }
    hit[static_cast<std::size_t>(r)] = equal ? 1 : 0;
  });
  const std::int64_t hits =
      std::count(hit.begin(), hit.end(), static_cast<unsigned char>(1));
  out.empirical = make_proportion(hits, mc.replicates);
  const double exponent = kind == SentinelKind::label
                              ? static_cast<double>(n_labeled)
                              : static_cast<double>(n_labeled + n_unlabeled);
  out.predicted = std::pow(1.0 - c, exponent);
  const double se = std::sqrt(out.predicted * (1.0 - out.predicted) /
                              static_cast<double>(mc.replicates));
  out.within_3se = std::abs(out.empirical.p_hat - out.predicted) <= 3.0 * se;
  return out;
}

}  // namespace stabcert
