#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "stabcert/bounds.hpp"
#include "stabcert/rng.hpp"

using namespace stabcert;

TEST_CASE("bound kinds map to the documented exponents") {
  // n = 10, N_l = 30, N_u = 14: N_l/n = 3, (N_l+N_u)/(n+1) = 4
  const struct {
    BoundKind kind;
    const char* exponent;
  } cases[] = {
      {BoundKind::full_black_box, "3"},        // min of the two
      {BoundKind::labeled_only, "3"},          // N_l / n
      {BoundKind::unlabeled_only, "4"},        // (N_l + N_u) / (n + 1)
      {BoundKind::transparent_models, "3"},
      {BoundKind::constrained_models, "3"},
      {BoundKind::indep_seeds, "3"},
      {BoundKind::coupled_seeds, "3"},
  };
  for (const auto& c : cases) {
    const BoundReport r = power_bound(c.kind, 10, 30, 14, 0.05, 0.1, 0.0);
    CHECK(r.exponent.str() == c.exponent);
    CHECK(r.kind == c.kind);
  }
}

TEST_CASE("bound value is alpha times the likelihood ratio power") {
  const BoundReport r =
      power_bound(BoundKind::full_black_box, 10, 100, 0, 0.05, 0.1, 0.0);
  CHECK(r.exponent.str() == "100/11");
  CHECK(r.value == doctest::Approx(0.13030083273874865).epsilon(1e-14));
  CHECK_FALSE(r.capped);

  // integral exponent sanity: 0.05 / 0.9^10
  const BoundReport s =
      power_bound(BoundKind::labeled_only, 10, 100, 0, 0.05, 0.1, 0.0);
  CHECK(s.exponent.str() == "10");
  CHECK(s.value == doctest::Approx(0.05 / std::pow(0.9, 10)).epsilon(1e-14));
  CHECK(s.value == doctest::Approx(0.14339859953962214).epsilon(1e-12));

  // delta_star above delta: ratio below one, bound below alpha
  const BoundReport t =
      power_bound(BoundKind::full_black_box, 10, 100, 0, 0.05, 0.1, 0.3);
  CHECK(t.value < 0.05);

  // enough data pushes the raw value past one: capped
  const BoundReport u =
      power_bound(BoundKind::full_black_box, 2, 2000, 0, 0.05, 0.5, 0.0);
  CHECK(u.capped);
  CHECK(u.value == 1.0);
}

TEST_CASE("bound input validation") {
  CHECK_THROWS_AS(power_bound(BoundKind::full_black_box, 1, 10, 0, 0.05, 0.1,
                              0.0),
                  Error);
  CHECK_THROWS_AS(power_bound(BoundKind::full_black_box, 10, -1, 0, 0.05, 0.1,
                              0.0),
                  Error);
  CHECK_THROWS_AS(power_bound(BoundKind::full_black_box, 10, 10, 0, 0.0, 0.1,
                              0.0),
                  Error);
  CHECK_THROWS_AS(power_bound(BoundKind::full_black_box, 10, 10, 0, 0.05, 1.0,
                              0.0),
                  Error);
  CHECK_THROWS_AS(power_bound(BoundKind::full_black_box, 10, 10, 0, 0.05, 0.1,
                              -0.1),
                  Error);
}

TEST_CASE("kind names round-trip") {
  for (const BoundKind k :
       {BoundKind::full_black_box, BoundKind::labeled_only,
        BoundKind::unlabeled_only, BoundKind::transparent_models,
        BoundKind::constrained_models, BoundKind::indep_seeds,
        BoundKind::coupled_seeds}) {
    CHECK(bound_kind_from_name(bound_kind_name(k)) == k);
  }
  CHECK_THROWS_AS(bound_kind_from_name("nope"), Error);
}

TEST_CASE("achieved power meets the ceiling exactly when kappa is integral") {
  // integral kappa: the fold count equals kappa, so the achieved acceptance
  // rate IS the ceiling, bit for bit
  const BoundComparison a = binomial_vs_bound(10, 30, 3, 0.1, 0.1, 0.0);
  CHECK(a.kappa.str() == "3");
  CHECK(a.fold_count == 3);
  CHECK(a.achieved == a.bound);
  CHECK(a.optimal);
  CHECK(a.ratio == 1.0);
  CHECK(a.achieved == doctest::Approx(0.1 / std::pow(0.9, 3)).epsilon(1e-14));

  // fractional kappa: flooring the fold count gives away real power
  const BoundComparison b = binomial_vs_bound(10, 35, 4, 0.1, 0.1, 0.0);
  CHECK(b.kappa.str() == "7/2");
  CHECK(b.fold_count == 3);
  CHECK(b.achieved < b.bound);
  CHECK_FALSE(b.optimal);
  CHECK(b.ratio < 1.0);
  CHECK(b.ratio > 0.9);  // but not by much at these sizes

  SUBCASE("random sweep inside the asserted regime") {
    RandomStream s(Seed{404});
    int integral_hits = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      const std::int64_t n = 2 + static_cast<std::int64_t>(s.next_below(11));
      const std::int64_t m = 1 + static_cast<std::int64_t>(s.next_below(8));
      std::int64_t nl, nu;
      if (trial % 2 == 0) {  // engineered integral kappa
        nl = m * n;
        nu = m;
      } else {
        nl = m * n + 1 + static_cast<std::int64_t>(
                             s.next_below(static_cast<std::uint64_t>(n)));
        nu = static_cast<std::int64_t>(s.next_below(static_cast<std::uint64_t>(
            2 * n)));
      }
      const double alpha = 0.01 + 0.09 * s.next_unit();
      const double delta = 0.05 + 0.15 * s.next_unit();
      const double delta_star = 0.8 * delta * s.next_unit();
      const BoundComparison c =
          binomial_vs_bound(n, nl, nu, alpha, delta, delta_star);
      if (c.fold_count == 0) continue;
      CHECK(c.achieved <= c.bound);
      CHECK(c.optimal == (c.kappa.is_integer() && c.regime_asserted));
      CHECK(c.optimal == (c.achieved == c.bound));
      if (c.kappa.is_integer()) ++integral_hits;
    }
    CHECK(integral_hits > 500);  // both branches genuinely exercised
  }
}
