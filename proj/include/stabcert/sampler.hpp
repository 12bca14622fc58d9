#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "stabcert/blackbox.hpp"  // ParamMap
#include "stabcert/rng.hpp"
#include "stabcert/types.hpp"

namespace stabcert {

/// A data-generating distribution the simulation harness can draw from.
/// Draws are pure functions of the seed handed in, so replicates built from
/// derived per-point seeds are reproducible and order-independent.
/// draw_x must follow the feature marginal of draw_pair: for any seed,
/// draw_pair(s).x == draw_x(s).
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::string name() const = 0;
  virtual std::int64_t dim() const = 0;
  virtual LabeledPoint draw_pair(Seed seed) const = 0;
  virtual FeatureVector draw_x(Seed seed) const = 0;
};

using SamplerPtr = std::shared_ptr<const Sampler>;

/// Built-in distributions:
///   uniform_threshold (d)            X ~ U[0,1]^d, Y ~ U[0,1], independent
///   gaussian_linear (d, beta, sigma) X ~ N(0,I_d), Y = beta * sum(X) + sigma Z
///   heavy_tail (d, beta, nu)         X ~ N(0,I_d), Y = beta * sum(X) + t_nu
/// Parameters default to d=1, beta=1, sigma=1, nu=3; nu must be an integer.
SamplerPtr builtin_sampler(const std::string& name, const ParamMap& params);

}  // namespace stabcert
