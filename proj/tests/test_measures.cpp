#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "berkres/berkovich.hpp"
#include "berkres/forms.hpp"
#include "berkres/measures.hpp"
#include "berkres/padic.hpp"
#include "berkres/puiseux.hpp"
#include "berkres/reduction.hpp"

using namespace berkres;

namespace {

using S = Puiseux<Rat>;

S scl(const std::string& text, long ram = 2) { return parse_puiseux<Rat>(text, Rat(0), ram); }

BinaryForm<S> form(const std::vector<std::string>& descending, long ram = 2) {
  std::vector<S> cs;
  cs.reserve(descending.size());
  for (const auto& s : descending) cs.push_back(scl(s, ram));
  return BinaryForm<S>::from_descending(cs, scl("0", ram));
}

HomogeneousPair<S> pair(const std::vector<std::string>& f, const std::vector<std::string>& g, long ram = 2) {
  return HomogeneousPair<S>(form(f, ram), form(g, ram));
}

/** Deterministic map [X^3 - X*Y^2 : t*Y^3]. */
HomogeneousPair<S> cubic_example() { return pair({"1", "0", "-1", "0"}, {"0", "0", "0", "t"}); }

/** Deterministic map [t*X^2 : X^2 + t*Y^2]. */
HomogeneousPair<S> quadratic_example() { return pair({"t", "0", "0"}, {"1", "0", "t"}); }

/** Good-reduction squaring map [X^2 : Y^2]. */
HomogeneousPair<S> squaring_example() { return pair({"1", "0", "0"}, {"0", "0", "1"}); }

/** [X^3 : X*Y^2 + t*Y^3]: one hole at 0, residue map z^2 with rational
 *  preimage chains staying at 0. */
HomogeneousPair<S> chain_example() { return pair({"1", "0", "0", "0"}, {"0", "0", "1", "t"}); }

/** [X^3 + X^2*Y : X*Y^2 + Y^3 + t*X^3]: one hole at -1, residue map z^2;
 *  the preimages of -1 are not rational over the residue field. */
HomogeneousPair<S> escaping_example() {
  return pair({"1", "1", "0", "0"}, {"t", "0", "1", "1"});
}

ResiduePoint<Rat> fin(long v) { return ResiduePoint<Rat>::finite(Rat(v)); }
ResiduePoint<Rat> inf() { return ResiduePoint<Rat>::at_infinity(Rat(0)); }

}  // namespace

TEST_CASE("direction counts: squaring map") {
  auto phi = squaring_example();
  CHECK(direction_preimage_count(phi, fin(0), fin(0)) == 2);
  CHECK(direction_preimage_count(phi, fin(0), fin(1)) == 0);
  CHECK(direction_preimage_count(phi, fin(0), inf()) == 0);
  // Preimages of infinity both sit in the infinite direction.
  CHECK(direction_preimage_count(phi, inf(), inf()) == 2);
  CHECK(direction_preimage_count(phi, inf(), fin(0)) == 0);
}

TEST_CASE("direction counts: cubic with three unit-depth holes") {
  auto phi = cubic_example();
  // Fiber form of any finite target reduces to x^3 - x.
  for (long y : {0L, 1L, 5L}) {
    CHECK(direction_preimage_count(phi, fin(y), fin(0)) == 1);
    CHECK(direction_preimage_count(phi, fin(y), fin(1)) == 1);
    CHECK(direction_preimage_count(phi, fin(y), fin(-1)) == 1);
    CHECK(direction_preimage_count(phi, fin(y), fin(2)) == 0);
    CHECK(direction_preimage_count(phi, fin(y), inf()) == 0);
  }
}

TEST_CASE("direction counts: quadratic with a depth-two hole; resample error") {
  auto phi = quadratic_example();
  // Fiber of a unit target reduces to -X^2: everything lands toward 0.
  CHECK(direction_preimage_count(phi, fin(1), fin(0)) == 2);
  CHECK(direction_preimage_count(phi, fin(1), inf()) == 0);
  // The constant value of the reduction is a non-generic target.
  CHECK_THROWS_AS(direction_preimage_count(phi, fin(0), fin(0)), std::domain_error);
  // Normalization is required.
  CHECK_THROWS_AS(direction_preimage_count(phi.shifted(Rat(1)), fin(1), fin(0)),
                  std::invalid_argument);
}

TEST_CASE("direction counts sum to the degree over a splitting residue field") {
  using SF = Puiseux<Fp>;
  const Fp zero5 = Fp::from_long(0, 5);
  const SF proto = SF::constant(zero5);
  auto c = [&](long v, long e = 0) { return SF::monomial(Fp::from_long(v, 5), Rat(e), zero5); };

  // [X^5 - X*Y^4 : t*Y^5] over Puiseux series with residue field F_5.
  BinaryForm<SF> f(5, proto), g(5, proto);
  f.set_coeff(5, c(1));
  f.set_coeff(1, c(-1));
  g.set_coeff(0, c(1, 1));
  HomogeneousPair<SF> phi(f, g);

  const ResiduePoint<Fp> target = ResiduePoint<Fp>::finite(Fp::from_long(2, 5));
  long total = direction_preimage_count(phi, target, ResiduePoint<Fp>::at_infinity(zero5));
  for (long v = 0; v < 5; ++v)
    total += direction_preimage_count(phi, target, ResiduePoint<Fp>::finite(Fp::from_long(v, 5)));
  CHECK(total == 5);  // degree conservation across all residue directions
}

TEST_CASE("surplus counts: zero for good reduction, hole depths otherwise") {
  auto sq = squaring_example();
  CHECK(surplus_multiplicity(sq, fin(0)) == 0);
  CHECK(surplus_multiplicity(sq, fin(1)) == 0);
  CHECK(surplus_multiplicity(sq, inf()) == 0);

  auto phi1 = cubic_example();
  CHECK(surplus_multiplicity(phi1, fin(0)) == 1);
  CHECK(surplus_multiplicity(phi1, fin(1)) == 1);
  CHECK(surplus_multiplicity(phi1, fin(-1)) == 1);
  CHECK(surplus_multiplicity(phi1, fin(2)) == 0);
  CHECK(surplus_multiplicity(phi1, inf()) == 0);

  auto phi2 = quadratic_example();
  CHECK(surplus_multiplicity(phi2, fin(0)) == 2);
  CHECK(surplus_multiplicity(phi2, fin(1)) == 0);
  CHECK(surplus_multiplicity(phi2, inf()) == 0);
}

TEST_CASE("surplus is independent of the admissible target") {
  auto phi1 = cubic_example();
  // The image of every direction is the constant infinity; any finite
  // target is admissible and gives the same count.
  for (long dir : {0L, 1L, -1L}) {
    const long s = surplus_multiplicity(phi1, fin(dir));
    CHECK(direction_preimage_count(phi1, fin(0), fin(dir)) == s);
    CHECK(direction_preimage_count(phi1, fin(7), fin(dir)) == s);
  }
}

TEST_CASE("surplus totals equal the common factor degree") {
  // Directions outside the hole locus contribute zero, so summing over the
  // holes suffices.
  auto phi1 = cubic_example();
  auto rep1 = reduce_pair(phi1);
  long sum1 = 0;
  for (long dir : {0L, 1L, -1L}) sum1 += surplus_multiplicity(phi1, fin(dir));
  CHECK(sum1 == rep1.common_degree);

  auto chain = chain_example();
  auto repc = reduce_pair(chain);
  CHECK(surplus_multiplicity(chain, fin(0)) == repc.common_degree);
}

TEST_CASE("residue measure: good reduction gives the zero measure") {
  auto m = residue_measure(squaring_example(), 4);
  CHECK(m.zero_measure);
  CHECK(m.directions.empty());
  CHECK(m.unlocated_tail == Rat(0));
  CHECK(barycenter_contains_gauss(m) == BarycenterVerdict::yes);
}

TEST_CASE("residue measure: constant reduction spreads hole depths exactly") {
  auto m = residue_measure(cubic_example(), 5);
  REQUIRE(m.directions.size() == 3);
  CHECK(m.unlocated_tail == Rat(0));
  // Sorted: -1, 0, 1; each mass exactly 1/3.
  CHECK(m.directions[0].direction == fin(-1));
  CHECK(m.directions[1].direction == fin(0));
  CHECK(m.directions[2].direction == fin(1));
  for (const auto& dm : m.directions) {
    CHECK(dm.mass_lower == Rat(1, 3));
    CHECK(dm.mass_upper == Rat(1, 3));
  }
  CHECK(barycenter_contains_gauss(m) == BarycenterVerdict::yes);
}

TEST_CASE("residue measure refuses indeterminate reductions") {
  CHECK_THROWS_AS(residue_measure(quadratic_example(), 3), std::domain_error);
}

TEST_CASE("residue measure: geometric accumulation along a rational preimage chain") {
  // Hole at 0 with depth 1 (d = 3), residue map z^2: level n adds
  // (1/3)(2/3)^n at direction 0.
  auto chain = chain_example();

  auto m0 = residue_measure(chain, 0);
  REQUIRE(m0.directions.size() == 1);
  CHECK(m0.directions[0].direction == fin(0));
  CHECK(m0.directions[0].mass_lower == Rat(1, 3));
  CHECK(m0.unlocated_tail == Rat(2, 3));
  CHECK(m0.directions[0].mass_upper == Rat(1));
  CHECK(barycenter_contains_gauss(m0) == BarycenterVerdict::unknown);

  auto m3 = residue_measure(chain, 3);
  REQUIRE(m3.directions.size() == 1);
  CHECK(m3.directions[0].mass_lower == Rat(65, 81));
  CHECK(m3.unlocated_tail == Rat(16, 81));
  CHECK(m3.directions[0].mass_upper == Rat(1));
  // More than half the mass provably sits in one direction.
  CHECK(barycenter_contains_gauss(m3) == BarycenterVerdict::no);
}

TEST_CASE("residue measure: irrational preimages stay in the tail") {
  // Hole at -1, residue map z^2; the preimages of -1 are not rational, so
  // deeper levels add nothing and the tail stays at 2/3.
  auto m = residue_measure(escaping_example(), 4);
  REQUIRE(m.directions.size() == 1);
  CHECK(m.directions[0].direction == fin(-1));
  CHECK(m.directions[0].mass_lower == Rat(1, 3));
  CHECK(m.directions[0].mass_upper == Rat(1));
  CHECK(m.unlocated_tail == Rat(2, 3));
  CHECK(barycenter_contains_gauss(m) == BarycenterVerdict::unknown);
}

TEST_CASE("residue measure: unlocated holes leave everything in the tail") {
  // [X^2 + Y^2 : t*Y^2]: the holes are the two square roots of -1, absent
  // from the rational residue field.
  auto phi = pair({"1", "0", "1"}, {"0", "0", "t"});
  auto m = residue_measure(phi, 2);
  CHECK(!m.zero_measure);
  CHECK(m.directions.empty());
  CHECK(m.unlocated_tail == Rat(1));
  CHECK(barycenter_contains_gauss(m) == BarycenterVerdict::unknown);
}

TEST_CASE("residue measure over the 5-adics: five unit holes under a constant reduction") {
  using P = Padic;
  const P zero = P(Rat(0), 5);
  auto c = [&](long v) { return P(Rat(v), 5); };
  BinaryForm<P> f(5, zero), g(5, zero);
  f.set_coeff(5, c(1));
  f.set_coeff(1, c(-1));
  g.set_coeff(0, c(5));
  HomogeneousPair<P> phi(f, g);

  auto m = residue_measure(phi, 3);
  REQUIRE(m.directions.size() == 5);
  CHECK(m.unlocated_tail == Rat(0));
  for (const auto& dm : m.directions) {
    CHECK(dm.mass_lower == Rat(1, 5));
    CHECK(dm.mass_upper == Rat(1, 5));
  }
  CHECK(barycenter_contains_gauss(m) == BarycenterVerdict::yes);
}

TEST_CASE("mass bookkeeping: located lower masses and tail sum to one") {
  std::vector<HomogeneousPair<S>> maps = {cubic_example(), chain_example(), escaping_example(),
                                          pair({"1", "0", "1"}, {"0", "0", "t"})};
  for (const auto& phi : maps) {
    for (long nmax : {0L, 1L, 4L}) {
      auto m = residue_measure(phi, nmax);
      Rat total = m.unlocated_tail;
      for (const auto& dm : m.directions) {
        total = total + dm.mass_lower;
        CHECK(dm.mass_upper == dm.mass_lower + m.unlocated_tail);
        CHECK(Rat(0) <= dm.mass_lower);
        CHECK(dm.mass_lower <= dm.mass_upper);
        CHECK(dm.mass_upper <= Rat(1));
      }
      CHECK(total == Rat(1));
    }
  }
}

TEST_CASE("barycenter verdicts on hand-built measures") {
  using M = ResidueMeasure<Rat>;
  M even;
  even.directions = {DirectionMass<Rat>{fin(0), Rat(1, 3), Rat(1, 3)},
                     DirectionMass<Rat>{fin(1), Rat(1, 3), Rat(1, 3)},
                     DirectionMass<Rat>{fin(-1), Rat(1, 3), Rat(1, 3)}};
  CHECK(barycenter_contains_gauss(even) == BarycenterVerdict::yes);

  M loaded;
  loaded.directions = {DirectionMass<Rat>{fin(0), Rat(1), Rat(1)}};
  CHECK(barycenter_contains_gauss(loaded) == BarycenterVerdict::no);

  M straddling;
  straddling.directions = {DirectionMass<Rat>{fin(0), Rat(1, 5), Rat(3, 5)}};
  straddling.unlocated_tail = Rat(2, 5);
  CHECK(barycenter_contains_gauss(straddling) == BarycenterVerdict::unknown);
}

TEST_CASE("combined criterion at a type-II point") {
  auto gauss = TypeIIPoint<S>::gauss(scl("0"));

  auto good = condition_C_check(cubic_example(), gauss, 4);
  CHECK(good.verdict == ConditionCVerdict::yes);
  REQUIRE(good.measure.has_value());
  CHECK(good.measure->directions.size() == 3);
  CHECK(good.reduction.semistable);

  auto blocked = condition_C_check(quadratic_example(), gauss, 4);
  CHECK(blocked.verdict == ConditionCVerdict::failed_precondition);
  CHECK(!blocked.measure.has_value());
  CHECK(blocked.note.find("hole") != std::string::npos);

  // At the better point 1/2 the quadratic example is no longer
  // indeterminate, but its holes are irrational: verdict unknown.
  auto moved = condition_C_check(quadratic_example(), TypeIIPoint<S>{scl("0"), Rat(1, 2)}, 4);
  CHECK(moved.verdict == ConditionCVerdict::unknown);
  REQUIRE(moved.measure.has_value());
  CHECK(moved.measure->unlocated_tail == Rat(1));

  auto shifted_input = condition_C_check(cubic_example().shifted(Rat(2)), gauss, 4);
  CHECK(shifted_input.verdict == ConditionCVerdict::yes);
}
