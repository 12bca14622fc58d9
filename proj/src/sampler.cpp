#include "stabcert/sampler.hpp"

#include <cmath>
#include <sstream>

namespace stabcert {

namespace {

double opt_param(const ParamMap& params, const std::string& name,
                 double fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

std::int64_t opt_int_param(const ParamMap& params, const std::string& name,
                           std::int64_t fallback, const std::string& who) {
  const auto it = params.find(name);
  if (it == params.end()) return fallback;
  const std::int64_t i = static_cast<std::int64_t>(it->second);
  require(static_cast<double>(i) == it->second, ErrorCode::invalid_argument,
          who + ": parameter '" + name + "' must be an integer");
  return i;
}

std::string format_param(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

// X ~ U[0,1]^d, Y ~ U[0,1] independent of X.  Under threshold_max with
// threshold t this gives the exactly computable p = 1 - t.
class UniformThresholdSampler : public Sampler {
 public:
  explicit UniformThresholdSampler(std::int64_t d) : d_(d) {
    require(d >= 1, ErrorCode::invalid_argument,
            "uniform_threshold: d must be >= 1");
  }
  std::string name() const override {
    return "uniform_threshold(d=" + std::to_string(d_) + ")";
  }
  std::int64_t dim() const override { return d_; }
  LabeledPoint draw_pair(Seed seed) const override {
    RandomStream stream(seed);
    LabeledPoint p;
    p.x.reserve(static_cast<std::size_t>(d_));
    for (std::int64_t j = 0; j < d_; ++j) p.x.push_back(stream.next_unit());
    p.y = stream.next_unit();
    return p;
  }
  FeatureVector draw_x(Seed seed) const override {
    RandomStream stream(seed);
    FeatureVector x;
    x.reserve(static_cast<std::size_t>(d_));
    for (std::int64_t j = 0; j < d_; ++j) x.push_back(stream.next_unit());
    return x;
  }

 private:
  std::int64_t d_;
};

// X ~ N(0, I_d), Y = beta * sum(X) + sigma * Z.
class GaussianLinearSampler : public Sampler {
 public:
  GaussianLinearSampler(std::int64_t d, double beta, double sigma)
      : d_(d), beta_(beta), sigma_(sigma) {
    require(d >= 1, ErrorCode::invalid_argument,
            "gaussian_linear: d must be >= 1");
    require(std::isfinite(beta), ErrorCode::invalid_argument,
            "gaussian_linear: beta must be finite");
    require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::invalid_argument,
            "gaussian_linear: sigma must be finite and >= 0");
  }
  std::string name() const override {
    return "gaussian_linear(d=" + std::to_string(d_) +
           ",beta=" + format_param(beta_) + ",sigma=" + format_param(sigma_) +
           ")";
  }
  std::int64_t dim() const override { return d_; }
  LabeledPoint draw_pair(Seed seed) const override {
    RandomStream stream(seed);
    LabeledPoint p;
    p.x.reserve(static_cast<std::size_t>(d_));
    double sum = 0.0;
    for (std::int64_t j = 0; j < d_; ++j) {
      const double xj = stream.next_normal();
      p.x.push_back(xj);
      sum += xj;
    }
    p.y = beta_ * sum + sigma_ * stream.next_normal();
    return p;
  }
  FeatureVector draw_x(Seed seed) const override {
    RandomStream stream(seed);
    FeatureVector x;
    x.reserve(static_cast<std::size_t>(d_));
    for (std::int64_t j = 0; j < d_; ++j) x.push_back(stream.next_normal());
    return x;
  }

 private:
  std::int64_t d_;
  double beta_;
  double sigma_;
};

// X ~ N(0, I_d), Y = beta * sum(X) + t_nu noise: same mean structure as
// gaussian_linear but with heavy-tailed residuals.
class HeavyTailSampler : public Sampler {
 public:
  HeavyTailSampler(std::int64_t d, double beta, std::int64_t nu)
      : d_(d), beta_(beta), nu_(nu) {
    require(d >= 1, ErrorCode::invalid_argument, "heavy_tail: d must be >= 1");
    require(std::isfinite(beta), ErrorCode::invalid_argument,
            "heavy_tail: beta must be finite");
    require(nu >= 1, ErrorCode::invalid_argument, "heavy_tail: nu must be >= 1");
  }
  std::string name() const override {
    return "heavy_tail(d=" + std::to_string(d_) + ",beta=" +
           format_param(beta_) + ",nu=" + std::to_string(nu_) + ")";
  }
  std::int64_t dim() const override { return d_; }
  LabeledPoint draw_pair(Seed seed) const override {
    RandomStream stream(seed);
    LabeledPoint p;
    p.x.reserve(static_cast<std::size_t>(d_));
    double sum = 0.0;
    for (std::int64_t j = 0; j < d_; ++j) {
      const double xj = stream.next_normal();
      p.x.push_back(xj);
      sum += xj;
    }
    p.y = beta_ * sum + stream.next_student_t(nu_);
    return p;
  }
  FeatureVector draw_x(Seed seed) const override {
    RandomStream stream(seed);
    FeatureVector x;
    x.reserve(static_cast<std::size_t>(d_));
    for (std::int64_t j = 0; j < d_; ++j) x.push_back(stream.next_normal());
    return x;
  }

 private:
  std::int64_t d_;
  double beta_;
  std::int64_t nu_;
};

}  // namespace

SamplerPtr builtin_sampler(const std::string& name, const ParamMap& params) {
  // Unknown keys are config typos; refuse them rather than ignore them.
  const auto only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      require(ok, ErrorCode::invalid_argument,
              name + ": unknown parameter '" + key + "'");
    }
  };
  if (name == "uniform_threshold") {
    only({"d"});
    return std::make_shared<UniformThresholdSampler>(
        opt_int_param(params, "d", 1, name));
  }
  if (name == "gaussian_linear") {
    only({"d", "beta", "sigma"});
    return std::make_shared<GaussianLinearSampler>(
        opt_int_param(params, "d", 1, name), opt_param(params, "beta", 1.0),
        opt_param(params, "sigma", 1.0));
  }
  if (name == "heavy_tail") {
    only({"d", "beta", "nu"});
    return std::make_shared<HeavyTailSampler>(
        opt_int_param(params, "d", 1, name), opt_param(params, "beta", 1.0),
        opt_int_param(params, "nu", 3, name));
  }
  fail(ErrorCode::unknown_name, "unknown sampler '" + name + "'");
}

}  // namespace stabcert
