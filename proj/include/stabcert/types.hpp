#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stabcert {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  invalid_argument,
  parse,
  io,
  dimension_mismatch,
  insufficient_data,
  unknown_name,
  algorithm_failure,
  internal,
};

const char* error_code_name(ErrorCode code);

/// All failures in the library surface as Error.  The code gives callers a
/// machine-checkable category; what() carries the human-readable detail
/// (file/line context for parse errors, fold index for algorithm failures).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// ---------------------------------------------------------------------------
// Data containers
// ---------------------------------------------------------------------------

using FeatureVector = std::vector<double>;

struct LabeledPoint {
  FeatureVector x;
  double y = 0.0;
  bool operator==(const LabeledPoint&) const = default;
};

namespace detail {
inline bool all_finite(const FeatureVector& v) {
  for (double c : v)
    if (!std::isfinite(c)) return false;
  return true;
}
}  // namespace detail

/// Ordered list of (x, y) pairs with a fixed feature dimension.  Order is
/// significant: fold construction slices by position.  Entries are checked
/// finite on insertion; NaN or infinity is rejected.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  explicit LabeledDataset(std::int64_t dim) : dim_(dim) {
    require(dim >= 1, ErrorCode::invalid_argument,
            "feature dimension must be >= 1");
  }
  LabeledDataset(std::int64_t dim, std::vector<LabeledPoint> points)
      : LabeledDataset(dim) {
    points_.reserve(points.size());
    for (auto& p : points) add(std::move(p));
  }

  void add(LabeledPoint p) {
    require(static_cast<std::int64_t>(p.x.size()) == dim_,
            ErrorCode::dimension_mismatch,
            "labeled point has dimension " + std::to_string(p.x.size()) +
                ", dataset expects " + std::to_string(dim_));
    require(detail::all_finite(p.x) && std::isfinite(p.y),
            ErrorCode::invalid_argument,
            "labeled point contains a non-finite value");
    points_.push_back(std::move(p));
  }

  std::int64_t size() const { return static_cast<std::int64_t>(points_.size()); }
  std::int64_t dim() const { return dim_; }
  const std::vector<LabeledPoint>& points() const { return points_; }
  const LabeledPoint& operator[](std::int64_t i) const {
    return points_[static_cast<std::size_t>(i)];
  }

  /// First `count` points, in order (used to form the n-1 point refit).
  LabeledDataset prefix(std::int64_t count) const {
    require(count >= 0 && count <= size(), ErrorCode::invalid_argument,
            "prefix length out of range");
    LabeledDataset out(dim_);
    out.points_.assign(points_.begin(), points_.begin() + count);
    return out;
  }

  /// Contiguous slice [first, first+count), used to cut disjoint folds.
  LabeledDataset slice(std::int64_t first, std::int64_t count) const {
    require(first >= 0 && count >= 0 && first + count <= size(),
            ErrorCode::invalid_argument, "slice out of range");
    LabeledDataset out(dim_);
    out.points_.assign(points_.begin() + first, points_.begin() + first + count);
    return out;
  }

  /// Copy with position `drop` removed (adversarial refits).
  LabeledDataset without(std::int64_t drop) const {
    require(drop >= 0 && drop < size(), ErrorCode::invalid_argument,
            "drop index out of range");
    LabeledDataset out(dim_);
    out.points_.reserve(points_.size() - 1);
    for (std::int64_t i = 0; i < size(); ++i)
      if (i != drop) out.points_.push_back(points_[static_cast<std::size_t>(i)]);
    return out;
  }

  bool operator==(const LabeledDataset&) const = default;

 private:
  std::int64_t dim_ = 1;
  std::vector<LabeledPoint> points_;
};

/// Ordered list of feature vectors (no labels), same finiteness rules.
class UnlabeledDataset {
 public:
  UnlabeledDataset() = default;
  explicit UnlabeledDataset(std::int64_t dim) : dim_(dim) {
    require(dim >= 1, ErrorCode::invalid_argument,
            "feature dimension must be >= 1");
  }
  UnlabeledDataset(std::int64_t dim, std::vector<FeatureVector> points)
      : UnlabeledDataset(dim) {
    points_.reserve(points.size());
    for (auto& p : points) add(std::move(p));
  }

  void add(FeatureVector x) {
    require(static_cast<std::int64_t>(x.size()) == dim_,
            ErrorCode::dimension_mismatch,
            "unlabeled point has dimension " + std::to_string(x.size()) +
                ", dataset expects " + std::to_string(dim_));
    require(detail::all_finite(x), ErrorCode::invalid_argument,
            "unlabeled point contains a non-finite value");
    points_.push_back(std::move(x));
  }

  std::int64_t size() const { return static_cast<std::int64_t>(points_.size()); }
  std::int64_t dim() const { return dim_; }
  const std::vector<FeatureVector>& points() const { return points_; }
  const FeatureVector& operator[](std::int64_t i) const {
    return points_[static_cast<std::size_t>(i)];
  }

  bool operator==(const UnlabeledDataset&) const = default;

 private:
  std::int64_t dim_ = 1;
  std::vector<FeatureVector> points_;
};

// ---------------------------------------------------------------------------
// Stability parameters
// ---------------------------------------------------------------------------

/// The tuple (epsilon, delta, alpha, n) every certification run is about:
/// prediction-difference threshold, tolerated exceedance probability,
/// test level, and training-set size.
struct StabilityParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.05;
  std::int64_t n = 2;

  void validate() const {
    require(std::isfinite(epsilon) && epsilon >= 0.0,
            ErrorCode::invalid_argument, "epsilon must be finite and >= 0");
    require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0,
            ErrorCode::invalid_argument, "delta must lie in [0, 1)");
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
            ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
    require(n >= 2, ErrorCode::invalid_argument, "n must be >= 2");
  }
};

}  // namespace stabcert
