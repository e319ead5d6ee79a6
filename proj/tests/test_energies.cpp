#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "convex.hpp"
#include "energies.hpp"
#include "mat2.hpp"
#include "rng.hpp"

using namespace polyhom;

namespace {

std::vector<double> entries_of(const Mat2& m) {
  return {m.a11, m.a12, m.a21, m.a22};
}

std::vector<double> minors_of(const Mat2& m) {
  const MinorsVec v = minors(m);
  return {v[0], v[1], v[2], v[3], v[4]};
}

Mat2 random_mat(SplitMix64& rng, double lo, double hi) {
  return {rng.next_in(lo, hi), rng.next_in(lo, hi), rng.next_in(lo, hi),
          rng.next_in(lo, hi)};
}

}  // namespace

TEST_CASE("zero-set energy vanishes exactly on the generators") {
  for (const double p : {2.0, 4.0}) {
    for (const MatrixSet& s : {counterexample::phase1_set(),
                               counterexample::phase2_set()}) {
      const auto e = build_zero_set_energy(s, p);
      CHECK(e->growth_p() == p);
      CHECK(e->generators().size() == s.size());
      CHECK_FALSE(e->label().empty());
      for (const Mat2& g : s.elems) {
        CHECK(e->value(g) == 0.0);
        const Mat2 grad = e->gradient(g);
        CHECK(frobenius_norm(grad) == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(build_zero_set_energy(counterexample::phase1_set(), 1.5),
                  std::invalid_argument);
}

TEST_CASE("zero-set energy value against direct projections") {
  // W(m) = max(dist^p(m, conv a), dist^(p/2)(minors m, conv minors a));
  // rebuild both branches with the standalone projector.
  const MatrixSet& a = counterexample::phase1_set();
  std::vector<std::vector<double>> gens4, gens5;
  for (const Mat2& g : a.elems) {
    gens4.push_back(entries_of(g));
    gens5.push_back(minors_of(g));
  }

  SplitMix64 rng(5);
  for (const double p : {2.0, 4.0}) {
    const auto e = build_zero_set_energy(a, p);
    for (int rep = 0; rep < 30; ++rep) {
      const Mat2 m = random_mat(rng, -3, 3);
      const double d1 = project_convex_hull(entries_of(m), gens4).distance;
      const double d2 = project_convex_hull(minors_of(m), gens5).distance;
      const double expect = std::max(std::pow(d1, p), std::pow(d2, 0.5 * p));
      CHECK(e->value(m) == doctest::Approx(expect).epsilon(1e-12));
    }
    // Frozen spot value at the midpoint of the paired averages.
    const Mat2 probe = diag(1.0, 1.0);
    const double d1 = project_convex_hull(entries_of(probe), gens4).distance;
    const double d2 = project_convex_hull(minors_of(probe), gens5).distance;
    CHECK(e->value(probe) ==
          doctest::Approx(std::max(std::pow(d1, p), std::pow(d2, 0.5 * p)))
              .epsilon(1e-12));
  }
}

TEST_CASE("zero set on the diagonal grid is exactly the generator set") {
  // 61x61 grid diag(x, y), x, y in [-3, 3] at step 0.1. The grid hits all
  // generators exactly; everywhere else the energy must clear 1e-8.
  for (const double p : {2.0, 4.0}) {
    for (const MatrixSet& s : {counterexample::phase1_set(),
                               counterexample::phase2_set()}) {
      const auto e = build_zero_set_energy(s, p);
      for (int i = 0; i <= 60; ++i) {
        for (int j = 0; j <= 60; ++j) {
          const Mat2 m = diag(-3.0 + 0.1 * i, -3.0 + 0.1 * j);
          const bool on_set = dist_to_set(m, s) <= 1e-12;
          if (on_set)
            CHECK(e->value(m) <= 1e-12);
          else
            CHECK(e->value(m) > 1e-8);
        }
      }
    }
  }
}

TEST_CASE("zero-set energy gradient matches finite differences") {
  const auto e = build_zero_set_energy(counterexample::phase1_set(), 4.0);
  SplitMix64 rng(123);
  const double h = 1e-6;
  int checked = 0;
  while (checked < 100) {
    const Mat2 m = random_mat(rng, -3, 3);
    // Stay away from branch ties where the max kinks.
    Mat2 g;
    const double w = e->value_and_gradient(m, g);
    if (w < 1e-8) continue;
    const double gn = frobenius_norm(g);
    if (gn < 1e-6) continue;
    ++checked;

    const Mat2 dirs[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    const double comps[4] = {g.a11, g.a12, g.a21, g.a22};
    for (int d = 0; d < 4; ++d) {
      const double fd =
          (e->value(m + h * dirs[d]) - e->value(m + (-h) * dirs[d])) / (2.0 * h);
      CHECK(std::fabs(fd - comps[d]) <= 1e-4 * std::max(1.0, gn));
    }
  }
}

TEST_CASE("hull distance energy is zero on the hull and grows with p") {
  const MatrixSet& a = counterexample::phase2_set();
  const auto e2 = convex_hull_distance_energy(a, 2.0);
  const auto e4 = convex_hull_distance_energy(a, 4.0);

  // Convex combinations of generators are zeros.
  const Mat2 mid = 0.5 * (a.elems[1] + a.elems[2]);
  CHECK(e2->value(mid) <= 1e-20);
  CHECK(e4->value(mid) <= 1e-20);

  // Away from the hull the value is dist^p.
  const Mat2 far = diag(-2.0, -2.0);
  const double d =
      project_convex_hull(entries_of(far),
                          {entries_of(a.elems[0]), entries_of(a.elems[1]),
                           entries_of(a.elems[2])})
          .distance;
  CHECK(e2->value(far) == doctest::Approx(d * d).epsilon(1e-12));
  CHECK(e4->value(far) == doctest::Approx(d * d * d * d).epsilon(1e-12));

  // The zero-set energy on the same generators is positive at the midpoint.
  const auto ez = build_zero_set_energy(a, 2.0);
  CHECK(ez->value(mid) > 1e-3);
}

TEST_CASE("polyconvex exclusion functional") {
  CHECK(sverak_V(diag(1.0, 1.0)) == 1.0);
  CHECK(sverak_V(diag(-1.0, 1.0)) == 0.0);
  CHECK(sverak_V(diag(2.0, 3.0)) == 6.0);
  CHECK(sverak_V(counterexample::zero_mat()) == 0.0);

  // Depends on the symmetric part only.
  SplitMix64 rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    const Mat2 m = random_mat(rng, -2, 2);
    CHECK(sverak_V(m) == sverak_V(sym_part(m)));
  }

  // Continuous across the cone boundary: values decay linearly to zero.
  for (const double eps : {1e-2, 1e-4, 1e-8}) {
    CHECK(sverak_V(diag(eps, 1.0)) == doctest::Approx(eps).epsilon(1e-12));
    CHECK(sverak_V(diag(-eps, 1.0)) == 0.0);
  }
}

TEST_CASE("distance integrand routes by phase") {
  const PartitionSpec part = vertical_halves();
  const std::vector<MatrixSet> sets{counterexample::phase1_set(),
                                    counterexample::phase2_set()};

  CHECK(part.phase_at(0.25, 0.5) == 0);
  CHECK(part.phase_at(0.75, 0.5) == 1);
  CHECK(part.phase_at(0.0, 0.0) == 0);
  CHECK(part.phase_at(0.5, 0.0) == 1);
  CHECK_THROWS_AS(part.phase_at(1.0, 0.5), std::invalid_argument);

  const Mat2 m = counterexample::phase1_a();
  CHECK(distance_integrand(0.25, 0.5, m, part, sets) == 0.0);
  // In the second phase, the nearest element of its set is the zero matrix.
  CHECK(distance_integrand(0.75, 0.5, m, part, sets) ==
        doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
  CHECK(distance_integrand(0.75, 0.5, counterexample::zero_mat(), part, sets) ==
        0.0);
  CHECK_THROWS_AS(distance_integrand(1.25, 0.5, m, part, sets),
                  std::invalid_argument);
}

TEST_CASE("composite cell energy routes by phase") {
  const CellEnergy ce = composite_cell_energy(4.0);
  REQUIRE(ce.phases.size() == 2);
  CHECK(ce.phases[0]->growth_p() == 4.0);

  const Mat2 a2 = counterexample::phase2_a();
  CHECK(ce.value(0.75, 0.5, a2) == 0.0);
  CHECK(ce.value(0.25, 0.5, a2) > 1e-3);
  CHECK(ce.value(0.25, 0.5, counterexample::phase1_a()) == 0.0);

  // Fused evaluation agrees with the split calls.
  SplitMix64 rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const Mat2 m = random_mat(rng, -3, 3);
    const double y1 = rng.next_in(0, 1), y2 = rng.next_in(0, 1);
    Mat2 g;
    const double v = ce.value_and_gradient(y1, y2, m, g);
    CHECK(v == ce.value(y1, y2, m));
    CHECK(frobenius_dist(g, ce.gradient(y1, y2, m)) == 0.0);
    CHECK(&ce.phase_energy(y1, y2) ==
          ce.phases[ce.partition.phase_at(y1, y2)].get());
  }
}

TEST_CASE("relaxed-phase variant differs exactly on the hull interior") {
  const CellEnergy std_ce = composite_cell_energy(4.0);
  const CellEnergy cvx_ce = composite_cell_energy_convex_phase2(4.0);

  const Mat2 mid = 0.5 * (counterexample::phase2_a() + counterexample::phase2_b());
  // Both live in the second phase region.
  CHECK(cvx_ce.value(0.75, 0.5, mid) <= 1e-20);
  CHECK(std_ce.value(0.75, 0.5, mid) > 1e-3);

  // Generators stay zeros of both, and the first phase is shared.
  for (const Mat2& g : counterexample::phase2_set().elems) {
    CHECK(std_ce.value(0.75, 0.5, g) == 0.0);
    CHECK(cvx_ce.value(0.75, 0.5, g) <= 1e-20);
  }
  SplitMix64 rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat2 m = random_mat(rng, -3, 3);
    CHECK(std_ce.value(0.2, 0.3, m) == cvx_ce.value(0.2, 0.3, m));
  }
}

TEST_CASE("coercivity certification") {
  // dist^2 to the zero matrix is |m|^2: the bounds are exact.
  const auto e0 = convex_hull_distance_energy(
      make_set({counterexample::zero_mat()}), 2.0);
  const CoercivityBounds b0 = coercivity_check(*e0, 10.0, 25);
  // c1 divides the exact squared norm by its sqrt-then-square round trip,
  // so it can sit one ulp below 1.
  CHECK(b0.c1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b0.c1 <= 1.0);
  CHECK(b0.c2 == 0.0);
  CHECK(b0.c3 == 1.0);

  // The composite phase energies certify on a radius-10 ball.
  for (const double p : {2.0, 4.0}) {
    const auto e = build_zero_set_energy(counterexample::phase1_set(), p);
    const CoercivityBounds b = coercivity_check(*e, 10.0, 25);
    CHECK(b.c1 > 0.0);
    CHECK(b.c2 >= 0.0);
    CHECK(b.c3 >= b.c1);
  }

  CHECK_THROWS_AS(coercivity_check(*e0, -1.0, 25), std::invalid_argument);
  CHECK_THROWS_AS(coercivity_check(*e0, 10.0, 1), std::invalid_argument);
}
