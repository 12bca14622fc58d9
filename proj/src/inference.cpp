#include "stabcert/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace stabcert {

namespace {

constexpr double kBisectionTol = 1e-10;

void validate_common(std::int64_t exceed_count, std::int64_t fold_count,
                     double alpha, double zeta) {
  require(fold_count >= 0, ErrorCode::invalid_argument,
          "fold count must be >= 0");
  require(exceed_count >= 0 && exceed_count <= fold_count,
          ErrorCode::invalid_argument,
          "exceed count must lie in [0, fold count]");
  require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
          ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  require(std::isfinite(zeta) && zeta >= 0.0 && zeta <= 1.0,
          ErrorCode::invalid_argument, "zeta must lie in [0, 1]");
}

double invert_randomized(std::int64_t b, std::int64_t m, double alpha,
                         double zeta) {
  const auto accepts = [&](double delta) {
    return decide(b, critical_values(m, delta, alpha), zeta) == 1;
  };
  // Scan a coarse grid first.  The acceptance region is an up-set in delta
  // (the acceptance functional is decreasing), so once accepted it must stay
  // accepted; the scan doubles as a cheap check of that invariant.
  std::vector<double> grid;
  grid.reserve(1009);
  for (int i = 0; i < 1000; ++i) grid.push_back(i / 1000.0);
  for (int k = 4; k <= 12; ++k) grid.push_back(1.0 - std::pow(10.0, -k));
  std::int64_t first_accept = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool acc = accepts(grid[i]);
    if (acc && first_accept < 0) first_accept = static_cast<std::int64_t>(i);
    require(!(first_accept >= 0 && !acc), ErrorCode::internal,
            "randomized acceptance region is not monotone in delta");
  }
  if (first_accept < 0) return 1.0;
  if (first_accept == 0) return 0.0;
  double lo = grid[static_cast<std::size_t>(first_accept - 1)];  // rejected
  double hi = grid[static_cast<std::size_t>(first_accept)];      // accepted
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (accepts(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;  // smallest certified delta found, always inside the region
}

double invert_conservative(std::int64_t b, std::int64_t m, double alpha) {
  if (b >= m) return 1.0;  // covers m = 0 as well: nothing to learn from
  // Smallest delta with P(Bin(m, delta) <= b) <= alpha; the cdf is strictly
  // decreasing in delta, so plain bisection applies.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_cdf(m, mid, b) <= alpha)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

double estimate_delta(std::int64_t exceed_count, std::int64_t fold_count,
                      double alpha, DeltaMethod method, double zeta) {
  validate_common(exceed_count, fold_count, alpha, zeta);
  if (fold_count == 0) return 1.0;
  switch (method) {
    case DeltaMethod::randomized_inversion:
      return invert_randomized(exceed_count, fold_count, alpha, zeta);
    case DeltaMethod::conservative_cp:
      return invert_conservative(exceed_count, fold_count, alpha);
  }
  fail(ErrorCode::invalid_argument, "unknown delta estimation method");
}

double estimate_eps(std::span<const double> deltas, double delta, double alpha,
                    double zeta) {
  const std::int64_t m = static_cast<std::int64_t>(deltas.size());
  for (double d : deltas)
    require(std::isfinite(d) && d >= 0.0, ErrorCode::invalid_argument,
            "fold differences must be finite and >= 0");
  const CriticalValues crit = critical_values(m, delta, alpha);
  require(std::isfinite(zeta) && zeta >= 0.0 && zeta <= 1.0,
          ErrorCode::invalid_argument, "zeta must lie in [0, 1]");
  // Largest exceedance count the test certifies, given this tiebreak draw.
  const std::int64_t b = zeta <= crit.a_star ? crit.k_star : crit.k_star - 1;
  if (b >= m) return 0.0;
  if (b < 0) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  return sorted[static_cast<std::size_t>(b)];  // (b+1)-th largest
}

int test_from_delta_estimate(double delta_estimate, double delta) {
  return delta_estimate <= delta ? 1 : 0;
}

int test_from_eps_estimate(double eps_estimate, double epsilon) {
  return eps_estimate <= epsilon ? 1 : 0;
}

}  // namespace stabcert
