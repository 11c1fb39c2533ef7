#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "berkres/forms.hpp"
#include "berkres/padic.hpp"
#include "berkres/puiseux.hpp"
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

/** Deterministic map [X^3 - X*Y^2 : t*Y^3]. */
HomogeneousPair<S> cubic_example() { return pair({"1", "0", "-1", "0"}, {"0", "0", "0", "t"}); }

/** Deterministic map [t*X^2 : X^2 + t*Y^2]. */
HomogeneousPair<S> quadratic_example() { return pair({"t", "0", "0"}, {"1", "0", "t"}); }

std::uint64_t lcg_next(std::uint64_t& state) {
  state = state * 6364136223846793005ULL + 1442695040888963407ULL;
  return state >> 33;
}

S random_scalar(std::uint64_t& state) {
  long c = static_cast<long>(lcg_next(state) % 9) - 4;
  long e = static_cast<long>(lcg_next(state) % 3);
  return S::monomial(Rat(c), Rat(e), Rat(0), 1);
}

BinaryForm<S> random_form(long degree, std::uint64_t& state) {
  BinaryForm<S> f(degree, S(Rat(0), 1));
  for (long i = 0; i <= degree; ++i) f.set_coeff(i, random_scalar(state));
  return f;
}

}  // namespace

TEST_CASE("binary forms: evaluation, product, substitution") {
  auto f = form({"1", "0", "-1", "0"});  // X^3 - X Y^2
  CHECK(f.degree() == 3);
  CHECK(f.to_string() == "X^3 + (-1)*X*Y^2");
  CHECK(f.evaluate(scl("2"), scl("1")) == scl("6"));
  CHECK(f.evaluate(scl("t"), scl("1")) == scl("t^3 - t"));
  CHECK(f.min_ord() == Ord(Rat(0)));
  auto x2 = form({"1", "0", "0"});
  auto y2 = form({"0", "0", "1"});
  CHECK((x2 * y2).to_string() == "X^2*Y^2");
  // (X^2) composed with (P, Q) is P^2.
  auto p = form({"1", "1"});  // X + Y
  auto q = form({"2", "0"});  // 2X
  CHECK(x2.composed(p, q) == p * p);
  CHECK(y2.composed(p, q) == q * q);
  auto xy = form({"0", "1", "0"});
  CHECK(xy.composed(p, q) == p * q);
}

TEST_CASE("pair basics: normalization and iteration degree") {
  auto phi = quadratic_example();
  CHECK(phi.min_ord() == Ord(Rat(0)));
  auto lifted = phi.shifted(Rat(3, 2));
  CHECK(lifted.min_ord() == Ord(Rat(3, 2)));
  CHECK(lifted.normalized() == phi);
  auto phi2 = phi.iterate(2);
  CHECK(phi2.degree() == 4);
  CHECK(phi.iterate(1) == phi);
  // F_2 = t*(t X^2)^2 = t^3 X^4; G_2 = (tX^2)^2 + t(X^2 + tY^2)^2.
  CHECK(phi2.numerator() == form({"t^3", "0", "0", "0", "0"}));
  CHECK(phi2.denominator() == form({"t^2 + t", "0", "2*t^2", "0", "t^3"}));
  CHECK(phi2.min_ord() == Ord(Rat(1)));
}

TEST_CASE("matrix basics: determinant and adjugate") {
  Matrix2<S> m{scl("t"), scl("1"), scl("0"), scl("1")};
  CHECK(m.det() == scl("t"));
  auto adj = m.adjugate();
  CHECK(adj.a == scl("1"));
  CHECK(adj.b == scl("-1"));
  CHECK(adj.c == scl("0"));
  CHECK(adj.d == scl("t"));
}

TEST_CASE("frozen resultants of the worked examples") {
  // Res(X^3 - X Y^2, t Y^3) = t^3.
  CHECK(resultant_exact(cubic_example()) == scl("t^3"));
  // Res(t X^2, X^2 + t Y^2) = t^4.
  CHECK(resultant_exact(quadratic_example()) == scl("t^4"));
  // Res(X^2, Y^2) = 1.
  CHECK(resultant_exact(form({"1", "0", "0"}), form({"0", "0", "1"})) == scl("1"));
  // Valuations through the certified fast path agree.
  CHECK(resultant_ord(cubic_example()) == Ord(Rat(3)));
  CHECK(resultant_ord(quadratic_example()) == Ord(Rat(4)));
  CHECK(normalized_ord_res(cubic_example()) == Rat(3));
  CHECK(normalized_ord_res(quadratic_example()) == Rat(4));
}

TEST_CASE("degenerate pairs are detected, not mangled") {
  auto degen = pair({"1", "0", "0"}, {"2", "0", "0"});  // [X^2 : 2X^2]
  CHECK(resultant_ord(degen).is_infinite());
  CHECK(!is_morphism(degen));
  CHECK_THROWS_AS(normalized_ord_res(degen), std::domain_error);
  CHECK(resultant_exact(degen).is_zero());
}

TEST_CASE("determinant engines agree on random matrices") {
  std::uint64_t state = 0x51ed270b1f3c0d4bULL;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + trial % 4;  // 2..5
    ScalarMatrix<S> m(n, std::vector<S>(n, S(Rat(0), 1)));
    for (auto& row : m)
      for (auto& e : row) e = random_scalar(state);
    CHECK(det_bareiss(m) == det_cofactor(m));
  }
}

TEST_CASE("resultant scaling laws hold exactly") {
  std::uint64_t state = 0x2545f4914f6cdd1dULL;
  for (long d : {2L, 3L}) {
    for (int trial = 0; trial < 8; ++trial) {
      auto f = random_form(d, state);
      auto g = random_form(d, state);
      S res = resultant_exact(f, g);
      // Res(c*F, G) = c^d Res(F, G) and symmetrically.
      S c = scl("t^2", 1) + scl("3", 1);
      CHECK(resultant_exact(f.scaled(c), g) == res * c.pow(static_cast<unsigned long>(d)));
      CHECK(resultant_exact(f, g.scaled(c)) == res * c.pow(static_cast<unsigned long>(d)));
      // Row mixing: Res(aF+bG, cF+dG) = (ad - bc)^d Res(F, G).
      S ma = scl("2", 1), mb = scl("t", 1), mc = scl("1", 1), md = scl("1 + t", 1);
      S mix = (ma * md - mb * mc).pow(static_cast<unsigned long>(d));
      CHECK(resultant_exact(f.scaled(ma) + g.scaled(mb), f.scaled(mc) + g.scaled(md)) == res * mix);
    }
  }
}

TEST_CASE("resultant behaves as claimed under coordinate substitution") {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (long d : {2L, 3L}) {
    for (int trial = 0; trial < 6; ++trial) {
      auto f = random_form(d, state);
      auto g = random_form(d, state);
      S res = resultant_exact(f, g);
      // gamma = (t^2, 1; 0, 1) — substitution X -> t^2 X + Y, Y -> Y.
      auto px = form({"t^2", "1"}, 1);
      auto qy = form({"0", "1"}, 1);
      S det = scl("t^2", 1);
      S lhs = resultant_exact(f.composed(px, qy), g.composed(px, qy));
      CHECK(lhs == res * det.pow(static_cast<unsigned long>(d * d)));
    }
  }
}

TEST_CASE("iterating a pair multiplies the resultant valuation predictably") {
  // For a degree-d pair, the 2-fold composition has resultant valuation
  // (d^2 + d) times the original (before rescaling the lift).
  auto phi = cubic_example();
  auto phi2 = phi.iterate(2);
  CHECK(resultant_ord(phi2) == Ord(Rat(36)));  // 12 * 3, min_ord(phi2) = 0
  CHECK(phi2.min_ord() == Ord(Rat(0)));
  CHECK(normalized_ord_res(phi2) == Rat(36));

  auto psi = quadratic_example();
  auto psi2 = psi.iterate(2);
  CHECK(resultant_ord(psi2) == Ord(Rat(24)));  // 6 * 4 before rescaling
  CHECK(normalized_ord_res(psi2) == Rat(16));  // 24 - 2*4*1
}

TEST_CASE("conjugation shifts the resultant valuation by (d^2+d) * ord(det)") {
  auto phi = cubic_example();
  const Rat base = normalized_ord_res(phi);
  Matrix2<S> gamma{scl("t"), scl("1"), scl("0"), scl("1")};
  auto conj = phi.conjugated(gamma);
  CHECK(resultant_ord(conj) == Ord(base + Rat(12)));  // (9+3) * ord(det = t)

  // Unit-determinant change of coordinates with unit entries cannot move the
  // normalized valuation at all.
  Matrix2<S> unimod{scl("1"), scl("2"), scl("1"), scl("3")};
  CHECK(normalized_ord_res(phi.conjugated(unimod)) == base);
}

TEST_CASE("square-root-of-t conjugation reaches the quadratic example's minimum") {
  auto phi = quadratic_example();
  Matrix2<S> gamma{scl("t^(1/2)"), scl("0"), scl("0"), scl("1")};
  auto conj = phi.conjugated(gamma);
  CHECK(conj.min_ord() == Ord(Rat(3, 2)));
  auto norm = conj.normalized();
  CHECK(norm.numerator() == form({"t^(1/2)", "0", "0"}));
  CHECK(norm.denominator() == form({"1", "0", "1"}));
  CHECK(normalized_ord_res(conj) == Rat(1));
}

TEST_CASE("p-adic pairs go through the exact engine") {
  Padic proto(Rat(0), 5);
  auto lift = [&](long v) { return Padic(Rat(v), 5); };
  // [X^5 - X Y^4 : 5 Y^5], the degree-5 example with five residue holes.
  BinaryForm<Padic> f = BinaryForm<Padic>::from_descending(
      {lift(1), lift(0), lift(0), lift(0), lift(-1), lift(0)}, proto);
  BinaryForm<Padic> g = BinaryForm<Padic>::from_descending(
      {lift(0), lift(0), lift(0), lift(0), lift(0), lift(5)}, proto);
  HomogeneousPair<Padic> phi(f, g);
  CHECK(resultant_ord(phi) == Ord(Rat(5)));
  CHECK(normalized_ord_res(phi) == Rat(5));
  CHECK(resultant_exact(phi).value() == Rat(3125));
}
