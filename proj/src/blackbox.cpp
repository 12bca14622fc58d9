#include "stabcert/blackbox.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace stabcert {

namespace {

// Canonical order: lexicographic on coordinates, then label.  Sorting into
// this order before any arithmetic makes fits exactly permutation-invariant:
// two permutations of the same multiset accumulate in the same sequence.
bool canonical_less(const LabeledPoint& a, const LabeledPoint& b) {
  if (a.x != b.x) return std::lexicographical_compare(a.x.begin(), a.x.end(),
                                                      b.x.begin(), b.x.end());
  return a.y < b.y;
}

std::vector<LabeledPoint> canonical_points(const LabeledDataset& data) {
  std::vector<LabeledPoint> pts = data.points();
  std::sort(pts.begin(), pts.end(), canonical_less);
  return pts;
}

void check_dim(std::int64_t model_dim, const FeatureVector& x) {
  require(static_cast<std::int64_t>(x.size()) == model_dim,
          ErrorCode::dimension_mismatch,
          "predict: point has dimension " + std::to_string(x.size()) +
              ", model expects " + std::to_string(model_dim));
}

std::string format_param(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

// --- zero --------------------------------------------------------------

class ConstantModel : public Model {
 public:
  ConstantModel(double value, std::int64_t dim) : value_(value), dim_(dim) {}
  double predict(const FeatureVector& x) const override {
    if (dim_ > 0) check_dim(dim_, x);
    return value_;
  }

 private:
  double value_;
  std::int64_t dim_;  // 0 means "accept any dimension"
};

class ZeroAlgorithm : public Algorithm {
 public:
  std::string name() const override { return "zero"; }
  ModelPtr fit(const LabeledDataset& data, Seed) const override {
    return std::make_shared<ConstantModel>(0.0, data.dim());
  }
};

// --- knn ---------------------------------------------------------------

class KnnModel : public Model {
 public:
  KnnModel(std::vector<LabeledPoint> pts, std::int64_t k, std::int64_t dim)
      : pts_(std::move(pts)), k_(k), dim_(dim) {}

  double predict(const FeatureVector& x) const override {
    check_dim(dim_, x);
    // (squared distance, canonical position); ties fall back on position,
    // which is permutation-invariant because pts_ is canonically sorted.
    std::vector<std::pair<double, std::size_t>> order(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = pts_[i].x[j] - x[j];
        d2 += diff * diff;
      }
      order[i] = {d2, i};
    }
    std::sort(order.begin(), order.end());
    double sum = 0.0;
    for (std::int64_t i = 0; i < k_; ++i)
      sum += pts_[order[static_cast<std::size_t>(i)].second].y;
    return sum / static_cast<double>(k_);
  }

 private:
  std::vector<LabeledPoint> pts_;  // canonically sorted
  std::int64_t k_;
  std::int64_t dim_;
};

class KnnAlgorithm : public Algorithm {
 public:
  explicit KnnAlgorithm(std::int64_t k) : k_(k) {
    require(k >= 1, ErrorCode::invalid_argument, "knn: k must be >= 1");
  }
  std::string name() const override {
    return "knn(k=" + std::to_string(k_) + ")";
  }
  ModelPtr fit(const LabeledDataset& data, Seed) const override {
    require(data.size() >= k_, ErrorCode::insufficient_data,
            "knn: need at least k=" + std::to_string(k_) +
                " training points, got " + std::to_string(data.size()));
    return std::make_shared<KnnModel>(canonical_points(data), k_, data.dim());
  }

 private:
  std::int64_t k_;
};

// --- ridge -------------------------------------------------------------

class LinearModel : public Model {
 public:
  LinearModel(std::vector<double> beta) : beta_(std::move(beta)) {}
  double predict(const FeatureVector& x) const override {
    check_dim(static_cast<std::int64_t>(beta_.size()), x);
    double out = 0.0;
    for (std::size_t j = 0; j < beta_.size(); ++j) out += beta_[j] * x[j];
    return out;
  }

 private:
  std::vector<double> beta_;
};

class RidgeAlgorithm : public Algorithm {
 public:
  explicit RidgeAlgorithm(double lambda) : lambda_(lambda) {
    require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::invalid_argument,
            "ridge: lambda must be finite and > 0");
  }
  std::string name() const override {
    return "ridge(lambda=" + format_param(lambda_) + ")";
  }

  ModelPtr fit(const LabeledDataset& data, Seed) const override {
    const std::size_t d = static_cast<std::size_t>(data.dim());
    const auto pts = canonical_points(data);
    // G = X'X + lambda I and b = X'y, accumulated in canonical order.
    std::vector<double> G(d * d, 0.0), b(d, 0.0);
    for (const auto& p : pts) {
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) G[i * d + j] += p.x[i] * p.x[j];
        b[i] += p.x[i] * p.y;
      }
    }
    for (std::size_t i = 0; i < d; ++i) G[i * d + i] += lambda_;

    // Cholesky G = L L'; G is positive definite for lambda > 0.
    std::vector<double> L(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = G[i * d + j];
        for (std::size_t k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
        if (i == j) {
          require(s > 0.0, ErrorCode::algorithm_failure,
                  "ridge: normal matrix lost positive definiteness");
          L[i * d + i] = std::sqrt(s);
        } else {
          L[i * d + j] = s / L[j * d + j];
        }
      }
    }
    // Solve L z = b, then L' beta = z.
    std::vector<double> z(d, 0.0), beta(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      double s = b[i];
      for (std::size_t k = 0; k < i; ++k) s -= L[i * d + k] * z[k];
      z[i] = s / L[i * d + i];
    }
    for (std::size_t ii = d; ii-- > 0;) {
      double s = z[ii];
      for (std::size_t k = ii + 1; k < d; ++k) s -= L[k * d + ii] * beta[k];
      beta[ii] = s / L[ii * d + ii];
    }
    return std::make_shared<LinearModel>(std::move(beta));
  }

 private:
  double lambda_;
};

// --- threshold_max -----------------------------------------------------

class ThresholdMaxAlgorithm : public Algorithm {
 public:
  ThresholdMaxAlgorithm(double jump, double threshold)
      : jump_(jump), threshold_(threshold) {
    require(std::isfinite(jump) && jump > 0.0, ErrorCode::invalid_argument,
            "threshold_max: jump must be finite and > 0");
    require(std::isfinite(threshold), ErrorCode::invalid_argument,
            "threshold_max: threshold must be finite");
  }
  std::string name() const override {
    return "threshold_max(jump=" + format_param(jump_) +
           ",threshold=" + format_param(threshold_) + ")";
  }
  ModelPtr fit(const LabeledDataset& data, Seed) const override {
    require(data.size() >= 1, ErrorCode::insufficient_data,
            "threshold_max: empty training set");
    double max_y = data[0].y;
    for (const auto& p : data.points()) max_y = std::max(max_y, p.y);
    return std::make_shared<ConstantModel>(max_y > threshold_ ? jump_ : 0.0,
                                           data.dim());
  }

 private:
  double jump_;
  double threshold_;
};

// --- coin --------------------------------------------------------------

class CoinAlgorithm : public Algorithm {
 public:
  CoinAlgorithm(double q, double jump) : q_(q), jump_(jump) {
    require(std::isfinite(q) && q >= 0.0 && q <= 1.0,
            ErrorCode::invalid_argument, "coin: q must lie in [0, 1]");
    require(std::isfinite(jump) && jump > 0.0, ErrorCode::invalid_argument,
            "coin: jump must be finite and > 0");
  }
  std::string name() const override {
    return "coin(q=" + format_param(q_) + ",jump=" + format_param(jump_) + ")";
  }
  ModelPtr fit(const LabeledDataset& data, Seed seed) const override {
    // Data is ignored; the prediction depends on the seed alone.
    const double u = RandomStream(seed).next_unit();
    return std::make_shared<ConstantModel>(u <= q_ ? jump_ : 0.0, data.dim());
  }

 private:
  double q_;
  double jump_;
};

double get_param(const ParamMap& params, const std::string& name,
                 const std::string& algo) {
  const auto it = params.find(name);
  require(it != params.end(), ErrorCode::invalid_argument,
          algo + ": missing parameter '" + name + "'");
  return it->second;
}

std::int64_t get_int_param(const ParamMap& params, const std::string& name,
                           const std::string& algo) {
  const double v = get_param(params, name, algo);
  const std::int64_t i = static_cast<std::int64_t>(v);
  require(static_cast<double>(i) == v, ErrorCode::invalid_argument,
          algo + ": parameter '" + name + "' must be an integer");
  return i;
}

}  // namespace

AlgorithmPtr zero_algorithm() { return std::make_shared<ZeroAlgorithm>(); }

AlgorithmPtr knn_algorithm(std::int64_t k) {
  return std::make_shared<KnnAlgorithm>(k);
}

AlgorithmPtr ridge_algorithm(double lambda) {
  return std::make_shared<RidgeAlgorithm>(lambda);
}

AlgorithmPtr threshold_max_algorithm(double jump, double threshold) {
  return std::make_shared<ThresholdMaxAlgorithm>(jump, threshold);
}

AlgorithmPtr coin_algorithm(double q, double jump) {
  return std::make_shared<CoinAlgorithm>(q, jump);
}

AlgorithmPtr make_algorithm(const std::string& name, const ParamMap& params) {
  // Reject unrecognized parameters up front so config typos fail loudly
  // instead of silently falling back to nothing.
  const auto only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      require(ok, ErrorCode::invalid_argument,
              name + ": unknown parameter '" + key + "'");
    }
  };
  if (name == "zero") {
    only({});
    return zero_algorithm();
  }
  if (name == "knn") {
    only({"k"});
    return knn_algorithm(get_int_param(params, "k", name));
  }
  if (name == "ridge") {
    only({"lambda"});
    return ridge_algorithm(get_param(params, "lambda", name));
  }
  if (name == "threshold_max") {
    only({"jump", "threshold"});
    return threshold_max_algorithm(get_param(params, "jump", name),
                                   get_param(params, "threshold", name));
  }
  if (name == "coin") {
    only({"q", "jump"});
    return coin_algorithm(get_param(params, "q", name),
                          get_param(params, "jump", name));
  }
  fail(ErrorCode::unknown_name, "unknown algorithm '" + name + "'");
}

double threshold_max_delta_star(std::int64_t n, double p) {
  require(n >= 1, ErrorCode::invalid_argument, "n must be >= 1");
  require(p >= 0.0 && p <= 1.0, ErrorCode::invalid_argument,
          "p must lie in [0, 1]");
  return p * std::pow(1.0 - p, static_cast<double>(n - 1));
}

double coin_independent_delta_star(double q) {
  require(q >= 0.0 && q <= 1.0, ErrorCode::invalid_argument,
          "q must lie in [0, 1]");
  return 2.0 * q * (1.0 - q);
}

}  // namespace stabcert
