#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "berkres/forms.hpp"
#include "berkres/padic.hpp"
#include "berkres/puiseux.hpp"
#include "berkres/reduction.hpp"
#include "berkres/resultant.hpp"

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

/** [X^3 - X*Y^2 : t*Y^3], the (z^3 - z)/t example. */
HomogeneousPair<S> cubic_example() { return pair({"1", "0", "-1", "0"}, {"0", "0", "0", "t"}); }

/** [t*X^2 : X^2 + t*Y^2], the t*z^2/(z^2 + t) example. */
HomogeneousPair<S> quadratic_example() { return pair({"t", "0", "0"}, {"1", "0", "t"}); }

bool has_finite_hole(const ReductionReport<Rat>& rep, const Rat& v, unsigned long depth) {
  for (const auto& b : rep.holes) {
    if (b.at_infinity || b.depth != depth) continue;
    for (const auto& r : b.located_roots)
      if (r == v) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("cubic example: constant reduction to infinity with three unit holes") {
  auto rep = reduce_pair(cubic_example());
  CHECK(rep.degree == 3);
  CHECK(rep.common_degree == 3);
  CHECK_FALSE(rep.good_reduction);
  CHECK(rep.residue_degree == 0);
  CHECK(rep.map_constant);
  CHECK(rep.constant_value.infinite);
  CHECK(rep.total_hole_depth() == 3);
  CHECK(has_finite_hole(rep, Rat(0), 1));
  CHECK(has_finite_hole(rep, Rat(1), 1));
  CHECK(has_finite_hole(rep, Rat(-1), 1));
  for (const auto& b : rep.holes) CHECK(b.fully_rational);
  // d = 3: threshold (d+1)/2 = 2, all depths 1; constant value inf is not a hole.
  CHECK(rep.depth_threshold() == 2);
  CHECK(rep.semistable);
  CHECK(rep.semistable_reason.empty());
  CHECK_FALSE(rep.in_indeterminacy);
  CHECK(rep.normalization_shift == Rat(0));
}

TEST_CASE("quadratic example: collapsing constant reduction inside its own hole") {
  auto rep = reduce_pair(quadratic_example());
  CHECK(rep.degree == 2);
  CHECK(rep.common_degree == 2);
  CHECK(rep.residue_degree == 0);
  CHECK(rep.map_constant);
  CHECK_FALSE(rep.constant_value.infinite);
  CHECK(rep.constant_value.value == Rat(0));
  REQUIRE(rep.holes.size() == 1);
  CHECK_FALSE(rep.holes[0].at_infinity);
  CHECK(rep.holes[0].depth == 2);
  REQUIRE(rep.holes[0].located_roots.size() == 1);
  CHECK(rep.holes[0].located_roots[0] == Rat(0));
  // Depth 2 exceeds the even-degree threshold d/2 = 1.
  CHECK(rep.depth_threshold() == 1);
  CHECK_FALSE(rep.semistable);
  CHECK(rep.semistable_reason.find("depth 2") != std::string::npos);
  // The constant value 0 is a hole: iteration is indeterminate here.
  CHECK(rep.in_indeterminacy);
}

TEST_CASE("z^2 has good reduction; residue map evaluation works") {
  auto rep = reduce_pair(pair({"1", "0", "0"}, {"0", "0", "1"}));
  CHECK(rep.good_reduction);
  CHECK(rep.common_degree == 0);
  CHECK(rep.residue_degree == 2);
  CHECK(rep.holes.empty());
  CHECK(rep.semistable);
  CHECK_FALSE(rep.in_indeterminacy);
  CHECK_FALSE(rep.map_constant);

  auto img = residue_map_apply(rep, ResiduePoint<Rat>::finite(Rat(3)));
  CHECK_FALSE(img.infinite);
  CHECK(img.value == Rat(9));
  CHECK(residue_map_apply(rep, ResiduePoint<Rat>::at_infinity(Rat(0))).infinite);
  auto zero = residue_map_apply(rep, ResiduePoint<Rat>::finite(Rat(0)));
  CHECK_FALSE(zero.infinite);
  CHECK(zero.value == Rat(0));
}

TEST_CASE("numerator reducing to zero: constant zero map with irrational holes") {
  // The quadratic example conjugated to the point rho = 1/2 and normalized.
  auto rep = reduce_pair(pair({"t^(1/2)", "0", "0"}, {"1", "0", "1"}));
  CHECK(rep.common_degree == 2);
  CHECK(rep.map_constant);
  CHECK_FALSE(rep.constant_value.infinite);
  CHECK(rep.constant_value.value == Rat(0));
  REQUIRE(rep.holes.size() == 1);
  const auto& b = rep.holes[0];
  CHECK_FALSE(b.at_infinity);
  CHECK(b.depth == 1);
  CHECK(b.factor.to_string() == "x^2 + 1");
  CHECK(b.located_roots.empty());
  CHECK_FALSE(b.fully_rational);
  CHECK(b.hole_count() == 2);
  // Depth 1 holes sit at the threshold but are moved by the constant map.
  CHECK(rep.semistable);
  CHECK_FALSE(rep.in_indeterminacy);
}

TEST_CASE("denominator dominating: hole at infinity breaks semistability") {
  // z^2 conjugated to rho = 1/4 (ramification 4) and normalized.
  auto rep = reduce_pair(pair({"t^(1/4)", "0", "0"}, {"0", "0", "1"}, 4));
  CHECK(rep.common_degree == 2);
  CHECK(rep.map_constant);
  CHECK(rep.constant_value.value == Rat(0));
  REQUIRE(rep.holes.size() == 1);
  CHECK(rep.holes[0].at_infinity);
  CHECK(rep.holes[0].depth == 2);
  CHECK(rep.holes[0].hole_count() == 1);
  CHECK_FALSE(rep.semistable);
  // Constant value 0 is not the infinite hole: not in the indeterminacy locus.
  CHECK_FALSE(rep.in_indeterminacy);
}

TEST_CASE("threshold-depth hole: fixed by the residue map vs moved") {
  // A = x, residue map z + 1 moves the hole at 0: tolerated.
  auto moved = reduce_pair(pair({"1", "1", "0"}, {"0", "1", "t"}));
  CHECK(moved.common_degree == 1);
  CHECK(moved.residue_degree == 1);
  REQUIRE(moved.holes.size() == 1);
  CHECK(moved.holes[0].depth == 1);
  CHECK(moved.depth_threshold() == 1);
  CHECK(moved.semistable);

  // A = x, residue map z/(z+1) fixes 0: rejected at threshold depth.
  auto fixed = reduce_pair(pair({"1", "0", "0"}, {"1", "1", "t"}));
  CHECK(fixed.common_degree == 1);
  REQUIRE(fixed.holes.size() == 1);
  CHECK(fixed.holes[0].depth == 1);
  CHECK_FALSE(fixed.semistable);
  CHECK(fixed.semistable_reason.find("fixed") != std::string::npos);
}

TEST_CASE("threshold-depth hole at infinity: fixed vs moved") {
  // A = Y, residue map z + 1 fixes infinity: rejected.
  auto fixed = reduce_pair(pair({"t", "1", "1"}, {"0", "0", "1"}));
  CHECK(fixed.common_degree == 1);
  REQUIRE(fixed.holes.size() == 1);
  CHECK(fixed.holes[0].at_infinity);
  CHECK_FALSE(fixed.semistable);

  // A = Y, residue map (z+1)/z sends infinity to 1: tolerated.
  auto moved = reduce_pair(pair({"0", "1", "1"}, {"0", "1", "t"}));
  CHECK(moved.common_degree == 1);
  REQUIRE(moved.holes.size() == 1);
  CHECK(moved.holes[0].at_infinity);
  CHECK(moved.semistable);
  auto inf_img = residue_map_apply(moved, ResiduePoint<Rat>::at_infinity(Rat(0)));
  CHECK_FALSE(inf_img.infinite);
  CHECK(inf_img.value == Rat(1));
}

TEST_CASE("identity residue map fixes every hole") {
  // [X^2 : XY + tY^2] reduces to A = x with residue map z (identity).
  auto rep = reduce_pair(pair({"1", "0", "0"}, {"0", "1", "t"}));
  CHECK(rep.common_degree == 1);
  CHECK(rep.residue_degree == 1);
  CHECK_FALSE(rep.semistable);
}

TEST_CASE("normalization bookkeeping") {
  auto lifted = quadratic_example().shifted(Rat(3, 2));
  CHECK_THROWS_AS(reduce_pair(lifted), std::invalid_argument);
  auto rep = reduce_normalized(lifted);
  CHECK(rep.normalization_shift == Rat(3, 2));
  CHECK(rep.in_indeterminacy);
  CHECK(rep.common_degree == 2);
}

TEST_CASE("good reduction coincides with vanishing normalized resultant order") {
  auto good = pair({"1", "0", "0"}, {"0", "0", "1"});
  CHECK(reduce_pair(good).good_reduction);
  CHECK(normalized_ord_res(good) == Rat(0));

  auto bad = cubic_example();
  CHECK_FALSE(reduce_pair(bad).good_reduction);
  CHECK(normalized_ord_res(bad) == Rat(3));

  auto bad2 = quadratic_example();
  CHECK_FALSE(reduce_pair(bad2).good_reduction);
  CHECK(normalized_ord_res(bad2) == Rat(4));
}

TEST_CASE("hole depth totals equal the common degree on varied examples") {
  for (const auto& rep : {reduce_pair(cubic_example()), reduce_pair(quadratic_example()),
                          reduce_pair(pair({"t^(1/2)", "0", "0"}, {"1", "0", "1"})),
                          reduce_pair(pair({"0", "1", "1"}, {"0", "1", "t"}))}) {
    CHECK(rep.total_hole_depth() == rep.common_degree);
    CHECK(rep.residue_degree + rep.common_degree == rep.degree);
  }
}

TEST_CASE("prime-field residue backend: quintic with every unit hole") {
  using SF = Puiseux<Fp>;
  const Fp zero(0, 5);
  auto c = [&](long v) { return SF::constant(Fp::from_long(v, 5)); };
  auto t = SF::t_pow(Rat(1), zero, 1);
  // [X^5 - X*Y^4 : t*Y^5] over Laurent series with residue field F_5.
  BinaryForm<SF> f(5, c(0)), g(5, c(0));
  f.set_coeff(5, c(1));
  f.set_coeff(1, c(-1));
  g.set_coeff(0, t);
  auto rep = reduce_pair(HomogeneousPair<SF>(f, g));
  CHECK(rep.common_degree == 5);
  CHECK(rep.map_constant);
  CHECK(rep.constant_value.infinite);
  REQUIRE(rep.holes.size() == 1);
  CHECK(rep.holes[0].depth == 1);
  CHECK(rep.holes[0].located_roots.size() == 5);
  CHECK(rep.holes[0].fully_rational);
  CHECK(rep.depth_threshold() == 3);
  CHECK(rep.semistable);
  CHECK_FALSE(rep.in_indeterminacy);
}

TEST_CASE("p-adic backend: (z^5 - z)/5 reduces like its Laurent analogue") {
  auto c = [&](long v) { return Padic(Rat(v), 5); };
  BinaryForm<Padic> f(5, c(0)), g(5, c(0));
  f.set_coeff(5, c(1));
  f.set_coeff(1, c(-1));
  g.set_coeff(0, c(5));
  HomogeneousPair<Padic> phi(f, g);
  CHECK(normalized_ord_res(phi) == Rat(5));
  auto rep = reduce_pair(phi);
  CHECK(rep.degree == 5);
  CHECK(rep.common_degree == 5);
  CHECK(rep.map_constant);
  CHECK(rep.constant_value.infinite);
  REQUIRE(rep.holes.size() == 1);
  CHECK(rep.holes[0].located_roots.size() == 5);
  CHECK(rep.semistable);
  CHECK_FALSE(rep.in_indeterminacy);
}

TEST_CASE("iterate of the collapsing example stays non-semistable") {
  // Second iterate of [tX^2 : X^2 + tY^2], normalized: the hole deepens to 4.
  auto it2 = quadratic_example().iterate(2);
  CHECK(it2.min_ord() == Ord(Rat(1)));
  auto rep = reduce_normalized(it2);
  CHECK(rep.normalization_shift == Rat(1));
  CHECK(rep.degree == 4);
  CHECK_FALSE(rep.semistable);
  CHECK(rep.in_indeterminacy);
  bool found = false;
  for (const auto& b : rep.holes) {
    if (!b.at_infinity && b.depth == 4) found = true;
  }
  CHECK(found);
}
