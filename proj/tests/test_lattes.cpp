#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "berkres/berkovich.hpp"
#include "berkres/forms.hpp"
#include "berkres/lattes.hpp"
#include "berkres/puiseux.hpp"
#include "berkres/theorem.hpp"

using namespace berkres;

namespace {

using S = Puiseux<Rat>;

S proto() { return S::constant(Rat(0)); }

S rat_const(const Rat& v) { return S::constant(v); }

S lconst(long v) { return S::constant(Rat(v)); }

/** Evaluate a binary form of constants at (x, 1), exactly over the rationals. */
Rat eval_constant_form(const BinaryForm<S>& f, const Rat& x) {
  Rat acc(0);
  for (long i = f.degree(); i >= 0; --i) acc = acc * x + scalar_reduce_at_zero(f.coeff(i));
  return acc;
}

Rat series_coeff(const S& s, long e) { return s.coefficient_at(Rat(e)); }

/** Maps are rebuilt identically across cases; build each once. */
const HomogeneousPair<S>& built_map(long m) {
  static const HomogeneousPair<S> psi2 = lattes_map(LattesSpec<S>(2, proto()));
  static const HomogeneousPair<S> psi3 = lattes_map(LattesSpec<S>(3, proto()));
  static const HomogeneousPair<S> psi4 = lattes_map(LattesSpec<S>(4, proto()));
  switch (m) {
    case 2: return psi2;
    case 3: return psi3;
    default: return psi4;
  }
}

}  // namespace

TEST_CASE("curve coefficient series match their frozen expansions") {
  const TateCoefficients<S> tc = tate_coefficients(proto(), 7);

  const std::vector<long> b2_coeffs = {5, 45, 140, 365, 630, 1260};
  const std::vector<long> b3_coeffs = {1, 23, 154, 647, 1876, 4802};
  CHECK(series_coeff(tc.b2, 0) == Rat(0));
  CHECK(series_coeff(tc.b3, 0) == Rat(0));
  for (long e = 1; e <= 6; ++e) {
    CHECK(series_coeff(tc.b2, e) == Rat(b2_coeffs[static_cast<std::size_t>(e - 1)]));
    CHECK(series_coeff(tc.b3, e) == Rat(b3_coeffs[static_cast<std::size_t>(e - 1)]));
  }
  CHECK(tc.b2.ord() == Ord(Rat(1)));
  CHECK(tc.b3.ord() == Ord(Rat(1)));

  CHECK_THROWS_AS(tate_coefficients(proto(), 1), std::invalid_argument);
  CHECK_THROWS_AS(tate_coefficients(proto(), 0), std::invalid_argument);
}

TEST_CASE("short-form discriminant is the eta-product expansion") {
  const TateCoefficients<S> tc = tate_coefficients(proto(), 7);
  const S inv48 = rat_const(Rat(1, 48));
  const S inv864 = rat_const(Rat(1, 864));
  const S A = S::constant(Rat(0)) - (inv48 + tc.b2);
  const S B = inv864 + tc.b2.scaled(Rat(1, 12)) - tc.b3;

  const S delta = ((A * A * A).scaled(Rat(4)) + (B * B).scaled(Rat(27))).scaled(Rat(-16));
  CHECK(delta.ord() == Ord(Rat(1)));
  const std::vector<long> tau = {1, -24, 252, -1472, 4830, -6048};
  for (long e = 1; e <= 6; ++e)
    CHECK(series_coeff(delta, e) == Rat(tau[static_cast<std::size_t>(e - 1)]));
}

TEST_CASE("duplication map has its closed form for symbolic coefficients") {
  const S A = S::monomial(Rat(1), Rat(1), Rat(0), 1);       // t
  const S B = lconst(1) + S::monomial(Rat(1), Rat(1), Rat(0), 1);  // 1 + t
  const HomogeneousPair<S> two = division_polynomial_lattes(2, A, B);

  CHECK(two.degree() == 4);
  // numerator x^4 - 2A x^2 - 8B x + A^2, ascending
  CHECK(scalar_is_zero(two.numerator().coeff(0) - A * A));
  CHECK(scalar_is_zero(two.numerator().coeff(1) + B.scaled(Rat(8))));
  CHECK(scalar_is_zero(two.numerator().coeff(2) + A.scaled(Rat(2))));
  CHECK(scalar_is_zero(two.numerator().coeff(3)));
  CHECK(scalar_is_zero(two.numerator().coeff(4) - lconst(1)));
  // denominator 4(x^3 + A x + B), homogenized with one extra Y
  CHECK(scalar_is_zero(two.denominator().coeff(0) - B.scaled(Rat(4))));
  CHECK(scalar_is_zero(two.denominator().coeff(1) - A.scaled(Rat(4))));
  CHECK(scalar_is_zero(two.denominator().coeff(2)));
  CHECK(scalar_is_zero(two.denominator().coeff(3) - lconst(4)));
  CHECK(scalar_is_zero(two.denominator().coeff(4)));

  CHECK_THROWS_AS(division_polynomial_lattes(1, A, B), std::invalid_argument);
}

TEST_CASE("the cuspidal curve collapses the duplication map to a degenerate pair") {
  const HomogeneousPair<S> two = division_polynomial_lattes(2, lconst(0), lconst(0));
  // [X^4 : 4 X^3 Y]: a common root at X = 0
  CHECK(scalar_is_zero(two.numerator().coeff(4) - lconst(1)));
  for (long i = 0; i <= 3; ++i) CHECK(scalar_is_zero(two.numerator().coeff(i)));
  CHECK(scalar_is_zero(two.denominator().coeff(3) - lconst(4)));
  CHECK_THROWS_AS(normalized_ord_res(two), std::domain_error);
}

TEST_CASE("multiplication maps reproduce point multiples on y^2 = x^3 - 36x") {
  // P = (-3, 9) lies on the curve; its multiples are classical test values.
  const S A = lconst(-36);
  const S B = lconst(0);
  const Rat x(-3);

  const HomogeneousPair<S> two = division_polynomial_lattes(2, A, B);
  CHECK(eval_constant_form(two.numerator(), x) / eval_constant_form(two.denominator(), x) ==
        Rat(25, 4));

  const HomogeneousPair<S> three = division_polynomial_lattes(3, A, B);
  CHECK(three.degree() == 9);
  CHECK(scalar_is_zero(three.numerator().coeff(9) - lconst(1)));  // monic
  CHECK(eval_constant_form(three.numerator(), x) / eval_constant_form(three.denominator(), x) ==
        Rat(-1587, 1369));

  const HomogeneousPair<S> four = division_polynomial_lattes(4, A, B);
  CHECK(four.degree() == 16);
  CHECK(scalar_is_zero(four.numerator().coeff(16) - lconst(1)));
  CHECK(eval_constant_form(four.numerator(), x) / eval_constant_form(four.denominator(), x) ==
        Rat(1442401, 19600));
}

TEST_CASE("tent fixed points and their closed-form weights") {
  CHECK(tent_fixed_points(2) == std::vector<Rat>{Rat(0), Rat(1, 3)});
  CHECK(tent_fixed_points(3) == std::vector<Rat>{Rat(0), Rat(1, 4), Rat(1, 2)});
  CHECK(tent_fixed_points(4) == std::vector<Rat>{Rat(0), Rat(1, 5), Rat(1, 3), Rat(2, 5)});
  CHECK(tent_fixed_points(5) ==
        std::vector<Rat>{Rat(0), Rat(1, 6), Rat(1, 4), Rat(1, 3), Rat(1, 2)});
  // the constructor cross-checks two derivations; exercise it across a range
  for (long m = 2; m <= 10; ++m) {
    CHECK(tent_fixed_points(m).size() == static_cast<std::size_t>(m));
    Rat total(0);
    for (const auto& [rho, w] : lattes_weights(m)) {
      (void)rho;
      total = total + w;
    }
    CHECK(total == Rat(m * m - 1));
  }
  CHECK(lattes_weights(3) ==
        std::vector<std::pair<Rat, Rat>>{{Rat(0), Rat(2)}, {Rat(1, 4), Rat(4)}, {Rat(1, 2), Rat(2)}});
  CHECK(lattes_weights(4) == std::vector<std::pair<Rat, Rat>>{
                                 {Rat(0), Rat(3)}, {Rat(1, 5), Rat(5)}, {Rat(1, 3), Rat(3)}, {Rat(2, 5), Rat(4)}});
  CHECK_THROWS_AS(tent_fixed_points(1), std::invalid_argument);
  CHECK_THROWS_AS(lattes_weight_at(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(lattes_weight_at(3, 4), std::invalid_argument);
}

TEST_CASE("closed forms agree with each other") {
  CHECK(lattes_gauss_resultant(2) == Rat(2));
  CHECK(lattes_gauss_resultant(3) == Rat(12));
  CHECK(lattes_gauss_resultant(4) == Rat(40));

  CHECK(lattes_minresloc_rho(2) == Rat(1, 3));
  CHECK(lattes_minresloc_rho(3) == Rat(1, 4));
  CHECK(lattes_minresloc_rho(4) == Rat(1, 5));
  CHECK(lattes_minresloc_rho(6) == Rat(2, 7));

  CHECK(lattes_minimal_resultant(2) == Rat(2, 3));
  CHECK(lattes_minimal_resultant(3) == Rat(3));
  CHECK(lattes_minimal_resultant(4) == Rat(56, 5));
  CHECK(lattes_minimal_resultant(9) == Rat(270));

  CHECK(lattes_ghat_star(2) == Rat(-1, 9));
  CHECK(lattes_ghat_star(3) == Rat(-1, 8));
  CHECK(lattes_ghat_star(4) == Rat(-3, 25));

  // minimal resultant = d(d-1) * ghat(minimizer) + resultant at the Gauss point
  for (long m = 2; m <= 6; ++m) {
    const Rat d(m * m);
    CHECK(lattes_minimal_resultant(m) ==
          d * (d - Rat(1)) * lattes_ghat_star(m) + lattes_gauss_resultant(m));
  }
}

TEST_CASE("periodic Bernoulli values and potential minima") {
  CHECK(periodic_bernoulli2(Rat(0)) == Rat(1, 6));
  CHECK(periodic_bernoulli2(Rat(1, 2)) == Rat(-1, 12));
  CHECK(periodic_bernoulli2(Rat(1, 3)) == Rat(-1, 18));
  CHECK(periodic_bernoulli2(Rat(5, 2)) == periodic_bernoulli2(Rat(1, 2)));
  CHECK(periodic_bernoulli2(Rat(-1, 2)) == periodic_bernoulli2(Rat(1, 2)));

  CHECK(elliptic_green_min(Rat(1)) == Rat(1, 24));
  CHECK(elliptic_green_min(Rat(3)) == Rat(1, 8));
  CHECK(lattes2_pair_green_min(Rat(1)) == Rat(1, 12));

  // the map-theoretic minimum matches the elliptic one for ord q = 1
  CHECK(lattes_minimal_resultant(3) / Rat(9 * 8) == elliptic_green_min(Rat(1)));
  CHECK(lattes_minimal_resultant(2) / Rat(4 * 3) == Rat(1, 18));
}

TEST_CASE("built maps carry the predicted Gauss resultant") {
  const HomogeneousPair<S> psi2 = lattes_map(LattesSpec<S>(2, proto()));
  CHECK(psi2.degree() == 4);
  CHECK(normalized_ord_res(psi2) == Rat(2));

  const HomogeneousPair<S> psi3 = lattes_map(LattesSpec<S>(3, proto()));
  CHECK(psi3.degree() == 9);
  CHECK(normalized_ord_res(psi3) == Rat(12));

  CHECK_THROWS_AS(LattesSpec<S>(1, proto()), std::invalid_argument);
  CHECK_THROWS_AS(LattesSpec<S>(3, proto(), -1), std::invalid_argument);
  CHECK(LattesSpec<S>(2, proto()).effective_precision() == 16);
  CHECK(LattesSpec<S>(4, proto()).effective_precision() == 24);
  CHECK(LattesSpec<S>(3, proto(), 20).effective_precision() == 20);
}

TEST_CASE("direct conjugation agrees with the segment profile at interior points") {
  const S zero = proto();
  const HomogeneousPair<S>& psi2 = built_map(2);
  CHECK(ord_res_at(psi2, TypeIIPoint<S>{zero, Rat(1, 3)}) == Rat(2, 3));
  // past the last tent fixed point the even map drifts into its pole:
  // slope d(d+1) = 20, not d(d-1)
  CHECK(ord_res_at(psi2, TypeIIPoint<S>{zero, Rat(5, 12)}) == Rat(7, 3));
  CHECK(ord_res_at(psi2, TypeIIPoint<S>{zero, Rat(1, 2)}) == Rat(4));

  const HomogeneousPair<S>& psi3 = built_map(3);
  CHECK(ord_res_at(psi3, TypeIIPoint<S>{zero, Rat(1, 4)}) == Rat(3));
}

TEST_CASE("quadruplication profile on a grid holding every break") {
  const HomogeneousPair<S>& psi4 = built_map(4);
  const SegmentSpec<S> seg(proto(), Rat(0), Rat(1, 2), 60);
  const OrdResProfile prof = min_res_loc_on_segment(psi4, seg);

  CHECK(prof.min_value == Rat(56, 5));
  CHECK(prof.argmin == std::vector<Rat>{Rat(1, 5)});
  CHECK(prof.samples.front().second == Rat(40));

  auto value_at = [&](const Rat& rho) {
    for (const auto& [r, v] : prof.samples)
      if (r == rho) return v;
    throw std::logic_error("rho not on grid");
  };
  CHECK(value_at(Rat(1, 4)) == Rat(12));
  CHECK(value_at(Rat(1, 3)) == Rat(40, 3));
  CHECK(value_at(Rat(2, 5)) == Rat(104, 5));
  // past 2/5 the map drifts into its pole at the maximal slope 16 * 17
  CHECK(value_at(Rat(1, 2)) == Rat(48));

  // read on the whole segment, the pole drift shows up as a +1/-1 artifact
  // split between the last fixed point and the segment end
  const CrucialWeightReport raw = crucial_weights(prof, 16);
  CHECK(raw.lo_end.one_sided_mass == Rat(3));
  CHECK(raw.hi_end.one_sided_mass == Rat(-1));
  CHECK(raw.interior == std::vector<std::pair<Rat, Rat>>{
                            {Rat(1, 5), Rat(5)}, {Rat(1, 3), Rat(3)}, {Rat(2, 5), Rat(5)}});
  CHECK(raw.full_support_total() == Rat(15));

  // restricted to the support hull [0, 2/5], the one-sided masses are exact
  std::vector<std::pair<Rat, Rat>> hull;
  for (const auto& sample : prof.samples)
    if (!(Rat(2, 5) < sample.first)) hull.push_back(sample);
  const CrucialWeightReport cw = crucial_weights(analyze_profile_samples(hull, 16), 16);
  CHECK(cw.lo_end.one_sided_mass == Rat(3));
  CHECK(cw.hi_end.one_sided_mass == Rat(4));
  CHECK(cw.interior ==
        std::vector<std::pair<Rat, Rat>>{{Rat(1, 5), Rat(5)}, {Rat(1, 3), Rat(3)}});
  CHECK(cw.full_support_total() == Rat(15));
}

TEST_CASE("a too-coarse grid is refused with the offending interval") {
  const HomogeneousPair<S>& psi4 = built_map(4);
  const SegmentSpec<S> seg(proto(), Rat(0), Rat(1, 2), 12);
  const OrdResProfile prof = min_res_loc_on_segment(psi4, seg);
  try {
    (void)crucial_weights(prof, 16);
    FAIL("expected refine_grid_error");
  } catch (const refine_grid_error& e) {
    CHECK(e.interval_lo() == Rat(1, 6));
    CHECK(e.interval_hi() == Rat(1, 4));
  }
}

TEST_CASE("the squared duplication map has the quadruplication profile") {
  const HomogeneousPair<S>& psi2 = built_map(2);
  const HomogeneousPair<S>& psi4 = built_map(4);
  const SegmentSpec<S> seg(proto(), Rat(0), Rat(1, 2), 60);

  const OrdResProfile direct = min_res_loc_on_segment(psi4, seg);

  // the truncating composition agrees with the plain one below the cut
  const HomogeneousPair<S> plain = psi2.iterate(2);
  const HomogeneousPair<S> fast = detail::second_iterate_truncated(psi2, Rat(16));
  CHECK(fast.min_ord() == plain.min_ord());
  CHECK(fast.numerator() == detail::truncated_form(plain.numerator(), Rat(16)));
  CHECK(fast.denominator() == detail::truncated_form(plain.denominator(), Rat(16)));

  const OrdResProfile squared = min_res_loc_on_segment(fast.normalized(), seg);
  CHECK(direct.samples == squared.samples);
}

TEST_CASE("triplication report: all predictions met and the iterate formula holds") {
  const LattesReport rep = lattes_report(LattesSpec<S>(3, proto()), 24);

  CHECK(rep.degree == 9);
  CHECK(rep.precision == 16);
  CHECK(rep.r_gauss.computed == Rat(12));
  CHECK(rep.minresloc_rho.computed == Rat(1, 4));
  CHECK(rep.minresloc_value.computed == Rat(3));
  CHECK(rep.unique_minimizer);
  CHECK(rep.weights.computed ==
        std::vector<std::pair<Rat, Rat>>{{Rat(0), Rat(2)}, {Rat(1, 4), Rat(4)}, {Rat(1, 2), Rat(2)}});
  CHECK(rep.run.weight_total == Rat(8));
  CHECK(rep.ghat_at_star.computed == Rat(-1, 8));
  CHECK(rep.min_green.computed == Rat(1, 24));
  CHECK(rep.run.hull_rho == Rat(1, 2));  // odd m: the whole segment
  CHECK(rep.grid_identity_ok);
  CHECK(rep.pole_drift_ok);

  CHECK(rep.iterate_factor == Rat(90));
  CHECK(rep.iterate_min.computed == Rat(270));
  CHECK(rep.iterate_rho.computed == Rat(1, 4));
  CHECK(rep.iteration_matches);
  CHECK(rep.iteration_predicted);
  CHECK(rep.iteration_verdict == IterationVerdict::holds);

  CHECK(rep.stable);
  CHECK(rep.conclusive);
  CHECK(rep.all_match);
  CHECK(rep.notes.empty());
}

TEST_CASE("duplication report: predictions met but the iterate formula fails") {
  const LattesReport rep = lattes_report(LattesSpec<S>(2, proto()), 12);

  CHECK(rep.degree == 4);
  CHECK(rep.r_gauss.computed == Rat(2));
  CHECK(rep.minresloc_rho.computed == Rat(1, 3));
  CHECK(rep.minresloc_value.computed == Rat(2, 3));
  CHECK(rep.unique_minimizer);
  CHECK(rep.weights.computed == std::vector<std::pair<Rat, Rat>>{{Rat(0), Rat(1)}, {Rat(1, 3), Rat(2)}});
  CHECK(rep.run.weight_total == Rat(3));
  CHECK(rep.ghat_at_star.computed == Rat(-1, 9));
  CHECK(rep.min_green.computed == Rat(1, 18));
  CHECK(rep.run.hull_rho == Rat(1, 3));  // even m: weights end at the last tent fixed point
  CHECK(rep.grid_identity_ok);
  CHECK(rep.pole_drift_ok);

  CHECK(rep.iterate_factor == Rat(20));
  CHECK(rep.iterate_min.computed == Rat(56, 5));
  CHECK(rep.iterate_rho.computed == Rat(1, 5));
  CHECK_FALSE(rep.iteration_matches);                         // 56/5 != 20 * 2/3
  CHECK(rep.iterate_min.computed != rep.iterate_factor * rep.minresloc_value.computed);
  CHECK_FALSE(rep.iteration_predicted);
  CHECK(rep.iteration_verdict == IterationVerdict::fails);

  CHECK(rep.stable);
  CHECK(rep.all_match);  // the failure itself is the predicted outcome
}

TEST_CASE("report grid preconditions") {
  CHECK_THROWS_AS(lattes_report(LattesSpec<S>(3, proto()), 12), std::invalid_argument);
  CHECK_THROWS_AS(lattes_report(LattesSpec<S>(2, proto()), 10), std::invalid_argument);
  CHECK_THROWS_AS(lattes_report(LattesSpec<S>(2, proto()), 0), std::invalid_argument);
}

TEST_CASE("iteration verdict names are stable") {
  CHECK(to_string(IterationVerdict::holds) == "holds");
  CHECK(to_string(IterationVerdict::fails) == "fails");
  CHECK(to_string(IterationVerdict::inconclusive) == "inconclusive");
}
