#ifndef BERKRES_REDUCTION_HPP
#define BERKRES_REDUCTION_HPP

/**
 * @file reduction.hpp
 *
 * Reduction of a normalized pair [F, G] to the residue field, and the
 * combinatorics that live there:
 *
 *  - the reduced forms Ftilde, Gtilde (coefficientwise residue images),
 *  - their common factor A = gcd(Ftilde, Gtilde), whose roots in P^1 of the
 *    residue field are the *holes* of the reduction, each with a depth
 *    (its multiplicity in A),
 *  - the residue map phi~ = [Ftilde/A : Gtilde/A] of degree d - deg A,
 *  - good reduction (deg A = 0),
 *  - the indeterminacy locus of iteration: reductions that are *constant*
 *    maps whose constant value is itself a hole,
 *  - semistability of the presentation: no hole may be deeper than the
 *    threshold T (= d/2 for even d, (d+1)/2 for odd d), and a hole exactly
 *    at the threshold is tolerated only if the residue map moves it.
 *
 * Holes need not be rational over the residue field: they are carried as
 * squarefree factor blocks, with the rational ones located explicitly.
 * Every structural decision (depth bounds, fixed-hole tests) works at the
 * block level via gcds, so nothing here ever needs irreducibility.
 */

#include <string>
#include <vector>

#include "berkres/forms.hpp"
#include "berkres/residue.hpp"

namespace berkres {

/** A point of P^1 over the residue field. */
template <typename K>
struct ResiduePoint {
  bool infinite = false;
  K value;  // meaningful when !infinite

  ResiduePoint(bool inf, K v) : infinite(inf), value(std::move(v)) {}

  static ResiduePoint at_infinity(const K& proto) { return ResiduePoint{true, res_zero_like(proto)}; }
  static ResiduePoint finite(const K& v) { return ResiduePoint{false, v}; }

  friend bool operator==(const ResiduePoint& a, const ResiduePoint& b) {
    if (a.infinite != b.infinite) return false;
    return a.infinite || a.value == b.value;
  }
  friend bool operator!=(const ResiduePoint& a, const ResiduePoint& b) { return !(a == b); }

  std::string to_string() const { return infinite ? std::string("inf") : res_to_string(value); }
};

/**
 * One block of holes: either the single hole at infinity, or the roots of a
 * monic squarefree polynomial over the residue field, all sharing a depth.
 */
template <typename K>
struct HoleBlock {
  bool at_infinity = false;
  RPoly<K> factor;               // monic squarefree; ignored when at_infinity
  unsigned long depth = 0;       // multiplicity in the common factor
  std::vector<K> located_roots;  // rational roots of `factor`
  bool fully_rational = true;    // every hole of the block is in located_roots

  explicit HoleBlock(const K& proto) : factor(proto) {}

  long hole_count() const { return at_infinity ? 1 : static_cast<long>(factor.degree()); }
};

template <typename K>
struct ReductionReport {
  long degree = 0;          // degree d of the input pair
  long common_degree = 0;   // deg of the common factor A (total, with infinity block)
  bool good_reduction = false;
  Rat normalization_shift;  // valuation subtracted from the pair before reducing

  // Residue map phi~ of degree residue_degree, as univariate coefficient
  // parts: the numerator form is sum_i num.coeff(i) X^i Y^{residue_degree-i}.
  long residue_degree = 0;
  RPoly<K> num;
  RPoly<K> den;
  bool map_constant = false;
  ResiduePoint<K> constant_value;  // meaningful when map_constant

  std::vector<HoleBlock<K>> holes;
  bool in_indeterminacy = false;  // constant reduction landing in its own hole locus

  bool semistable = false;
  std::string semistable_reason;  // first violation, empty when semistable

  explicit ReductionReport(const K& proto)
      : num(proto), den(proto), constant_value(ResiduePoint<K>::finite(res_zero_like(proto))) {}

  /** Depth threshold: holes strictly deeper than this break semistability. */
  long depth_threshold() const { return degree % 2 == 0 ? degree / 2 : (degree + 1) / 2; }

  /** Sum of depth * hole-count over all blocks; equals common_degree. */
  long total_hole_depth() const {
    long s = 0;
    for (const auto& b : holes) s += static_cast<long>(b.depth) * b.hole_count();
    return s;
  }
};

/**
 * Apply the residue map to a rational point of P^1 over the residue field.
 * The report must describe a morphism (the input pair was nondegenerate).
 */
template <typename K>
ResiduePoint<K> residue_map_apply(const ReductionReport<K>& rep, const ResiduePoint<K>& p) {
  if (rep.map_constant) return rep.constant_value;
  const K proto = rep.num.proto();
  if (p.infinite) {
    const K fn = rep.num.coeff(static_cast<std::size_t>(rep.residue_degree));
    const K gd = rep.den.coeff(static_cast<std::size_t>(rep.residue_degree));
    if (res_is_zero(gd)) return ResiduePoint<K>::at_infinity(proto);
    return ResiduePoint<K>::finite(fn / gd);
  }
  const K fv = rep.num.eval(p.value);
  const K gv = rep.den.eval(p.value);
  if (res_is_zero(gv)) {
    if (res_is_zero(fv)) throw std::logic_error("residue map undefined at a point; pair was degenerate");
    return ResiduePoint<K>::at_infinity(proto);
  }
  return ResiduePoint<K>::finite(fv / gv);
}

namespace detail {

/**
 * Whether any root of `factor` (monic, squarefree) is fixed by the residue
 * map in `rep`.  Works blockwise: no root finding, only gcds.
 */
template <typename K>
bool block_contains_fixed_point(const ReductionReport<K>& rep, const HoleBlock<K>& b) {
  if (b.at_infinity) {
    ResiduePoint<K> img = residue_map_apply(rep, ResiduePoint<K>::at_infinity(rep.num.proto()));
    return img.infinite;
  }
  if (rep.map_constant) {
    if (rep.constant_value.infinite) return false;
    return res_is_zero(b.factor.eval(rep.constant_value.value));
  }
  // Finite fixed points are roots of num(x) - x * den(x).
  RPoly<K> fix = rep.num - rep.den * RPoly<K>::monomial(res_one_like(rep.num.proto()), 1);
  if (fix.is_zero()) return true;  // identity map: everything is fixed
  return !rpoly_gcd(b.factor, fix).is_constant();
}

}  // namespace detail

/**
 * Reduce a pair at the zero exponent.  The pair must be normalized (minimum
 * coefficient valuation exactly zero) so that the residue image is nonzero.
 */
template <typename S>
ReductionReport<typename ScalarTraits<S>::Residue> reduce_pair(const HomogeneousPair<S>& pair) {
  using K = typename ScalarTraits<S>::Residue;
  Ord m = pair.min_ord();
  if (m.is_infinite() || !m.value().is_zero())
    throw std::invalid_argument("reduction expects a normalized pair (minimum valuation zero)");

  const long d = pair.degree();
  const K kproto = scalar_reduce_at_zero(scalar_zero_like(pair.proto()));

  auto univ = [&](const BinaryForm<S>& form) {
    std::vector<K> cs;
    cs.reserve(static_cast<std::size_t>(d + 1));
    for (long i = 0; i <= d; ++i) cs.push_back(scalar_reduce_at_zero(form.coeff(i)));
    return RPoly<K>(kproto, std::move(cs));
  };

  ReductionReport<K> rep(kproto);
  rep.degree = d;

  RPoly<K> pf = univ(pair.numerator());
  RPoly<K> pg = univ(pair.denominator());
  if (pf.is_zero() && pg.is_zero())
    throw std::logic_error("normalized pair reduced to zero; valuation bookkeeping is broken");

  // Common factor A = Y^{ay} * hom(ga): the Y-power is the common deficit of
  // the X-degrees below d, the univariate part the polynomial gcd.
  const long yf = pf.is_zero() ? d : d - static_cast<long>(pf.degree());
  const long yg = pg.is_zero() ? d : d - static_cast<long>(pg.degree());
  const long ay = std::min(yf, yg);
  RPoly<K> ga = rpoly_gcd(pf, pg);  // monic; handles zero components
  const long ga_deg = ga.is_zero() ? 0 : static_cast<long>(ga.degree());
  rep.common_degree = ga_deg + ay;
  rep.good_reduction = (rep.common_degree == 0);
  rep.residue_degree = d - rep.common_degree;

  // Residue map parts.
  if (!ga.is_zero()) {
    rep.num = pf.is_zero() ? pf : pf.exact_div(ga);
    rep.den = pg.is_zero() ? pg : pg.exact_div(ga);
  } else {
    throw std::logic_error("gcd of a nonzero pair of reduced forms vanished");
  }
  rep.map_constant = (rep.residue_degree == 0);
  if (rep.map_constant) {
    const K fn = rep.num.coeff(0);
    const K gd = rep.den.coeff(0);
    rep.constant_value = res_is_zero(gd) ? ResiduePoint<K>::at_infinity(kproto)
                                         : ResiduePoint<K>::finite(fn / gd);
  }

  // Hole blocks: squarefree structure of the univariate part plus the
  // infinity block from the Y-power.
  if (ay > 0) {
    HoleBlock<K> b(kproto);
    b.at_infinity = true;
    b.factor = RPoly<K>::constant(res_one_like(kproto));
    b.depth = static_cast<unsigned long>(ay);
    b.located_roots = {};
    b.fully_rational = true;
    rep.holes.push_back(std::move(b));
  }
  for (auto& [part, mult] : squarefree_decomposition(ga)) {
    HoleBlock<K> b(kproto);
    b.at_infinity = false;
    b.factor = part;
    b.depth = mult;
    RootReport<K> roots = locate_roots(part);
    for (auto& [r, rm] : roots.roots) {
      (void)rm;  // squarefree: multiplicity 1
      b.located_roots.push_back(r);
    }
    b.fully_rational = roots.complete && roots.rootless.is_constant();
    rep.holes.push_back(std::move(b));
  }

  // Indeterminacy of iteration: a constant reduction whose value is a hole.
  if (rep.map_constant) {
    if (rep.constant_value.infinite) {
      rep.in_indeterminacy = (ay > 0);
    } else {
      rep.in_indeterminacy = res_is_zero(ga.eval(rep.constant_value.value));
    }
  }

  // Semistability of this presentation.
  rep.semistable = true;
  const long T = rep.depth_threshold();
  for (const auto& b : rep.holes) {
    if (static_cast<long>(b.depth) > T) {
      rep.semistable = false;
      rep.semistable_reason = "hole of depth " + std::to_string(b.depth) + " exceeds the threshold " +
                              std::to_string(T);
      break;
    }
    if (static_cast<long>(b.depth) == T && detail::block_contains_fixed_point(rep, b)) {
      rep.semistable = false;
      rep.semistable_reason = "hole of threshold depth " + std::to_string(T) + " is fixed by the residue map";
      break;
    }
  }
  return rep;
}

/** Convenience: normalize, then reduce; records the valuation shift used. */
template <typename S>
ReductionReport<typename ScalarTraits<S>::Residue> reduce_normalized(const HomogeneousPair<S>& pair) {
  Ord m = pair.min_ord();
  if (m.is_infinite()) throw std::invalid_argument("cannot normalize a pair of zero forms");
  auto rep = reduce_pair(pair.normalized());
  rep.normalization_shift = m.value();
  return rep;
}

}  // namespace berkres

#endif  // BERKRES_REDUCTION_HPP
