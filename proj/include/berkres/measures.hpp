#ifndef BERKRES_MEASURES_HPP
#define BERKRES_MEASURES_HPP

/**
 * @file measures.hpp
 *
 * Direction multiplicities at the Gauss point and the truncated residue
 * measure built from them, with sound lower/upper mass bounds:
 *
 *  - direction_preimage_count: how many preimages of a generic target land
 *    in the open ball of a residue direction, counted through the reduction
 *    of the fiber form y1*F - y0*G.
 *  - surplus_multiplicity: the same count for a target chosen *away* from
 *    the direction's image, which isolates the ball's surplus preimages.
 *  - residue_measure: mass depth/d at every hole of the reduction, then
 *    iterated preimages of the holes under the residue map, each level
 *    scaled by 1/d, truncated at a caller-chosen depth.  Mass that cannot
 *    be located inside the residue field (irrational preimages) or that
 *    lies beyond the truncation is carried as an explicit tail, so every
 *    reported interval [lower, upper] is sound.
 *  - barycenter_contains_gauss: whether the Gauss point provably lies in
 *    the measure's barycenter (every direction mass <= 1/2), provably not,
 *    or unknown at this truncation.
 *  - condition_C_check: the combined criterion at a chosen type-II point —
 *    rewrite the map there, require a non-indeterminate reduction, and test
 *    the barycenter.
 *
 * Maps whose reduction is constant *into its own hole locus* (the
 * indeterminate case of iteration) have no measure here by construction;
 * residue_measure refuses them and condition_C_check reports a failed
 * precondition instead.
 */

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "berkres/berkovich.hpp"
#include "berkres/forms.hpp"
#include "berkres/reduction.hpp"
#include "berkres/residue.hpp"

namespace berkres {

/** Mass bounds attached to one residue direction. */
template <typename K>
struct DirectionMass {
  ResiduePoint<K> direction;
  Rat mass_lower;  // located mass; exact lower bound
  Rat mass_upper;  // lower plus the global unassigned tail
};

/**
 * The truncated measure: located direction masses plus the tail that the
 * truncation (or root-finding over the residue field) could not attribute.
 * Located lower masses and the tail always sum to 1, except for the zero
 * measure of a good-reduction map.
 */
template <typename K>
struct ResidueMeasure {
  std::vector<DirectionMass<K>> directions;
  Rat unlocated_tail = Rat(0);
  bool zero_measure = false;
  long levels_used = 0;
};

namespace detail {

/** Multiplicity of v as a root of p (0 when p(v) != 0 or p is zero). */
template <typename K>
long root_multiplicity(RPoly<K> p, const K& v) {
  const K one = res_one_like(v);
  const RPoly<K> lin(v, {res_zero_like(v) - v, one});
  long count = 0;
  while (!p.is_zero() && res_is_zero(p.eval(v))) {
    p = p.exact_div(lin);
    ++count;
  }
  return count;
}

}  // namespace detail

/**
 * Number of preimages of y inside the open ball of `direction`, for a
 * normalized morphism.  Computed as the multiplicity of the direction in
 * the reduction of the fiber form y1*F - y0*G (the infinite direction gets
 * the degree deficit d - deg).  The representative of y is the canonical
 * unit-height lift, so the answer depends only on the residue point y.
 *
 * Throws std::domain_error when the fiber form reduces to zero (y equal to
 * a constant reduction's value): resample y.
 */
template <typename S>
long direction_preimage_count(const HomogeneousPair<S>& pair,
                              const ResiduePoint<typename ScalarTraits<S>::Residue>& y,
                              const ResiduePoint<typename ScalarTraits<S>::Residue>& direction) {
  using K = typename ScalarTraits<S>::Residue;
  Ord m = pair.min_ord();
  if (m.is_infinite() || !m.value().is_zero())
    throw std::invalid_argument("direction counting expects a normalized pair (minimum valuation zero)");

  const S sproto = pair.proto();
  const S one = scalar_one_like(sproto);
  const long d = pair.degree();

  BinaryForm<S> fiber = y.infinite ? pair.denominator().scaled(scalar_zero_like(sproto) - one)
                                   : pair.numerator() - pair.denominator().scaled(
                                         scalar_lift_residue(sproto, y.value));

  const K kproto = scalar_reduce_at_zero(scalar_zero_like(sproto));
  std::vector<K> cs;
  cs.reserve(static_cast<std::size_t>(d + 1));
  for (long i = 0; i <= d; ++i) cs.push_back(scalar_reduce_at_zero(fiber.coeff(i)));
  const RPoly<K> h(kproto, std::move(cs));
  if (h.is_zero())
    throw std::domain_error("fiber form reduced to zero for this target; resample the target point");

  if (direction.infinite) return d - static_cast<long>(h.degree());
  return detail::root_multiplicity(h, direction.value);
}

/**
 * Surplus preimage count of a direction: preimages of a target that lies
 * *outside* the direction's image ball.  The target is chosen
 * deterministically as the smallest nonnegative-integer residue point
 * different from the direction's image under the residue map.
 */
template <typename S>
long surplus_multiplicity(const HomogeneousPair<S>& pair,
                          const ResiduePoint<typename ScalarTraits<S>::Residue>& direction) {
  using K = typename ScalarTraits<S>::Residue;
  const auto rep = reduce_pair(pair);
  const ResiduePoint<K> image = residue_map_apply(rep, direction);
  const K kproto = res_zero_like(image.value);
  const std::optional<std::uint64_t> size = res_field_size(kproto);
  for (long n = 0;; ++n) {
    if (size.has_value() && static_cast<std::uint64_t>(n) >= *size)
      throw unsupported_parameter("residue field too small to choose a target away from the image");
    const ResiduePoint<K> y = ResiduePoint<K>::finite(res_from_long_like(kproto, n));
    if (y != image) return direction_preimage_count(pair, y, direction);
  }
}

namespace detail {

template <typename K>
using MassList = std::vector<std::pair<ResiduePoint<K>, Rat>>;

template <typename K>
void add_mass(MassList<K>& list, const ResiduePoint<K>& pt, const Rat& mass) {
  for (auto& [p, m] : list) {
    if (p == pt) {
      m = m + mass;
      return;
    }
  }
  list.emplace_back(pt, mass);
}

/** Preimage fiber of a residue point under the residue map, as the
 *  univariate part of z1*num - z0*den. */
template <typename K>
RPoly<K> fiber_poly(const ReductionReport<K>& rep, const ResiduePoint<K>& z) {
  if (z.infinite) return rep.den;
  return rep.num - rep.den.scaled(z.value);
}

}  // namespace detail

/**
 * The truncated residue measure of a normalized morphism.  Requires a
 * non-indeterminate reduction; good reduction yields the zero measure.
 * Directions are sorted (finite points in residue order, then infinity)
 * so output is deterministic.
 */
template <typename S>
ResidueMeasure<typename ScalarTraits<S>::Residue> residue_measure(const HomogeneousPair<S>& pair,
                                                                  long n_max) {
  using K = typename ScalarTraits<S>::Residue;
  if (n_max < 0) throw std::invalid_argument("truncation depth must be nonnegative");

  const auto rep = reduce_pair(pair.normalized());
  if (rep.in_indeterminacy)
    throw std::domain_error(
        "measure undefined: the reduction is constant into its own hole locus");

  ResidueMeasure<K> out;
  out.levels_used = n_max;
  if (rep.good_reduction) {
    out.zero_measure = true;
    return out;
  }

  const Rat d(rep.degree);
  detail::MassList<K> total, level;

  // Level 0: every hole carries depth/d; only located holes are attributed.
  for (const auto& b : rep.holes) {
    const Rat mass = Rat(static_cast<long>(b.depth)) / d;
    if (b.at_infinity) {
      detail::add_mass(total, ResiduePoint<K>::at_infinity(rep.num.proto()), mass);
    } else {
      for (const K& r : b.located_roots) detail::add_mass(total, ResiduePoint<K>::finite(r), mass);
    }
  }
  level = total;

  // Levels 1..n_max: rational preimages under the residue map, each level
  // scaled by a further 1/d.  Preimages outside the residue field stay in
  // the tail.
  const long e = rep.residue_degree;
  for (long n = 1; n <= n_max && !level.empty(); ++n) {
    detail::MassList<K> next;
    for (const auto& [z, mass] : level) {
      if (mass.is_zero()) continue;
      const RPoly<K> p = detail::fiber_poly(rep, z);
      if (p.is_zero())
        throw std::logic_error("fiber of a hole vanished although the reduction is not constant");
      const long deficit = e - static_cast<long>(p.degree());
      if (deficit > 0)
        detail::add_mass(next, ResiduePoint<K>::at_infinity(rep.num.proto()), mass * Rat(deficit) / d);
      const RootReport<K> roots = locate_roots(p);
      for (const auto& [r, k] : roots.roots)
        detail::add_mass(next, ResiduePoint<K>::finite(r), mass * Rat(static_cast<long>(k)) / d);
    }
    for (const auto& [w, mass] : next) detail::add_mass(total, w, mass);
    level = std::move(next);
  }

  Rat located(0);
  for (const auto& [w, mass] : total) {
    (void)w;
    located = located + mass;
  }
  out.unlocated_tail = Rat(1) - located;

  std::sort(total.begin(), total.end(), [](const auto& a, const auto& b) {
    if (a.first.infinite != b.first.infinite) return b.first.infinite;
    if (a.first.infinite) return false;
    return res_order_less(a.first.value, b.first.value);
  });
  for (const auto& [w, mass] : total)
    out.directions.push_back(DirectionMass<K>{w, mass, mass + out.unlocated_tail});
  return out;
}

enum class BarycenterVerdict { yes, no, unknown };

inline std::string to_string(BarycenterVerdict v) {
  switch (v) {
    case BarycenterVerdict::yes: return "yes";
    case BarycenterVerdict::no: return "no";
    default: return "unknown";
  }
}

/**
 * Whether the Gauss point lies in the barycenter of the measure: yes when
 * every direction provably carries mass <= 1/2 (tail included), no when
 * some direction provably carries more, unknown otherwise (increase the
 * truncation depth).
 */
template <typename K>
BarycenterVerdict barycenter_contains_gauss(const ResidueMeasure<K>& measure) {
  const Rat half(1, 2);
  for (const auto& dm : measure.directions)
    if (dm.mass_lower > half) return BarycenterVerdict::no;
  bool certain = measure.unlocated_tail <= half;
  for (const auto& dm : measure.directions)
    if (dm.mass_upper > half) certain = false;
  return certain ? BarycenterVerdict::yes : BarycenterVerdict::unknown;
}

enum class ConditionCVerdict { yes, no, unknown, failed_precondition };

inline std::string to_string(ConditionCVerdict v) {
  switch (v) {
    case ConditionCVerdict::yes: return "yes";
    case ConditionCVerdict::no: return "no";
    case ConditionCVerdict::unknown: return "unknown";
    default: return "failed_precondition";
  }
}

template <typename K>
struct ConditionCReport {
  ConditionCVerdict verdict = ConditionCVerdict::failed_precondition;
  ReductionReport<K> reduction;                 // of the map rewritten at the point
  std::optional<ResidueMeasure<K>> measure;     // absent on failed precondition
  std::string note;

  explicit ConditionCReport(const K& proto) : reduction(proto) {}
};

/**
 * The combined barycenter criterion at a type-II point: rewrite the map in
 * the point's coordinates, require the reduction not to be indeterminate,
 * then decide whether the Gauss point of those coordinates lies in the
 * barycenter of the residue measure.
 */
template <typename S>
ConditionCReport<typename ScalarTraits<S>::Residue> condition_C_check(
    const HomogeneousPair<S>& pair, const TypeIIPoint<S>& zeta, long n_max) {
  using K = typename ScalarTraits<S>::Residue;
  const HomogeneousPair<S> moved = conjugate_at(pair, zeta).normalized();
  const K kproto = scalar_reduce_at_zero(scalar_zero_like(moved.proto()));

  ConditionCReport<K> report(kproto);
  report.reduction = reduce_pair(moved);
  if (report.reduction.in_indeterminacy) {
    report.verdict = ConditionCVerdict::failed_precondition;
    report.note = "reduction at the point is constant into its own hole locus";
    return report;
  }
  report.measure = residue_measure(moved, n_max);
  switch (barycenter_contains_gauss(*report.measure)) {
    case BarycenterVerdict::yes: report.verdict = ConditionCVerdict::yes; break;
    case BarycenterVerdict::no: report.verdict = ConditionCVerdict::no; break;
    default:
      report.verdict = ConditionCVerdict::unknown;
      report.note = "tail mass too large at this truncation depth";
      break;
  }
  return report;
}

}  // namespace berkres

#endif  // BERKRES_MEASURES_HPP
