#ifndef BERKRES_THEOREM_HPP
#define BERKRES_THEOREM_HPP

/**
 * @file theorem.hpp
 *
 * Executable forms of the library's central equivalences about iteration
 * and the normalized resultant valuation R:
 *
 *  - resultant_power_identity_check: the ring identity
 *    Res(iterate(phi, n)) = ±Res(phi)^N with N = d^n(d^n-1)/(d(d-1)),
 *    verified by exact determinants (small degrees only).
 *  - iteration_formula_check: the numerical criterion
 *    R_{phi^n} = N * ordRes(phi) - 2 d^n * min-ord(iterate coefficients),
 *    compared against the predicted N * R_phi.  The two agree exactly when
 *    the iterate's coefficients stay normalized (minimum valuation zero).
 *  - main_theorem_check: find a minimizing point of the resultant
 *    valuation on a search domain, certify semistability there, and check
 *    the iteration formula plus iterate semistability for every n up to a
 *    truncation bound, with explicit reporting of the truncation.
 *  - ss_iterate_implication_check: a property-test oracle for
 *    "iterate semistable and formula matched at n implies the map itself
 *    is semistable"; returning false would indicate a bug.
 *
 * Iterate resultants are never computed by determinant above degree 27;
 * the power law at the valuation level plus min-ord bookkeeping replaces
 * the giant determinant.
 */

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "berkres/berkovich.hpp"
#include "berkres/forms.hpp"
#include "berkres/rational.hpp"
#include "berkres/reduction.hpp"
#include "berkres/resultant.hpp"

namespace berkres {

/**
 * Thrown when no point of the search domain yields a semistable (or at
 * least classifiable) presentation: the caller must widen the domain.
 */
class inconclusive_domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** d^n as an exact rational (degrees stay small, values may not). */
inline Rat degree_power(long d, long n) {
  Rat acc(1);
  for (long i = 0; i < n; ++i) acc = acc * Rat(d);
  return acc;
}

/** The resultant multiplier of the n-th iterate: d^n (d^n - 1) / (d (d-1)). */
inline Rat iterate_resultant_factor(long d, long n) {
  if (d < 2) throw std::invalid_argument("degree must be at least 2");
  if (n < 1) throw std::invalid_argument("iterate count must be at least 1");
  const Rat dn = degree_power(d, n);
  return dn * (dn - Rat(1)) / (Rat(d) * Rat(d - 1));
}

/**
 * Exact ring identity Res(iterate(phi, n)) = ±Res(phi)^N, via direct
 * determinants.  Only for iterate degree d^n <= 27; beyond that the
 * determinant route is out of bounds by design.
 */
template <typename S>
bool resultant_power_identity_check(const HomogeneousPair<S>& pair, long n) {
  const long d = pair.degree();
  const Rat factor = iterate_resultant_factor(d, n);
  if (degree_power(d, n) > Rat(27))
    throw std::invalid_argument("iterate degree exceeds 27; the determinant route is capped there");

  const S lhs = resultant_exact(pair.iterate(n));
  const S base = resultant_exact(pair);
  S rhs = scalar_one_like(base);
  const long reps = static_cast<long>(factor.num().get_si());
  for (long i = 0; i < reps; ++i) rhs = rhs * base;

  return scalar_is_zero(lhs - rhs) || scalar_is_zero(lhs + rhs);
}

/** One numerical comparison R_{phi^n} vs N_n * R_phi. */
struct IterationFormulaRecord {
  long n = 0;
  Rat factor;       // N_n
  Rat r_base;       // R of the map
  Rat r_iterate;    // R of the n-th iterate
  Rat predicted;    // factor * r_base
  bool match = false;
};

/**
 * Compute R of the n-th iterate without a large determinant: the resultant
 * valuation of the iterate is factor * ordRes(phi) exactly (power law), and
 * normalization subtracts 2 d^n times the iterate's minimum coefficient
 * valuation.  Requires a normalized morphism.
 */
template <typename S>
IterationFormulaRecord iteration_formula_check(const HomogeneousPair<S>& pair, long n) {
  Ord m0 = pair.min_ord();
  if (m0.is_infinite() || !m0.value().is_zero())
    throw std::invalid_argument("iteration check expects a normalized pair (minimum valuation zero)");

  IterationFormulaRecord rec;
  rec.n = n;
  rec.factor = iterate_resultant_factor(pair.degree(), n);
  rec.r_base = normalized_ord_res(pair);
  rec.predicted = rec.factor * rec.r_base;

  const Ord m = pair.iterate(n).min_ord();
  if (m.is_infinite()) throw std::domain_error("iterate collapsed to zero forms");
  rec.r_iterate = rec.predicted - Rat(2) * degree_power(pair.degree(), n) * m.value();
  rec.match = (rec.r_iterate == rec.predicted);
  return rec;
}

/** Per-iterate row of a theorem report. */
struct TheoremStep {
  long n = 0;
  Rat factor;     // N_n
  Rat r_iterate;  // R of the n-th iterate in the chosen coordinates
  Rat predicted;  // N_n * R
  bool match = false;
  bool iterate_semistable = false;
};

/** Everything the coordinate-wise iteration check established. */
template <typename S>
struct TheoremReport {
  std::string map_description;
  TypeIIPoint<S> coordinates;  // point whose coordinates were used
  Rat r_base;                  // R in those coordinates
  bool base_semistable = false;
  bool in_indeterminacy = false;  // reduction constant into its own hole locus
  long n_max = 0;                 // "for all n" truncated here
  std::vector<TheoremStep> steps;
  bool holds = false;
  std::vector<std::string> witnesses;  // failure evidence, empty when holds
  std::vector<std::string> notes;      // truncation and domain caveats

  explicit TheoremReport(const TypeIIPoint<S>& pt) : coordinates(pt) {}
};

namespace detail {

template <typename S>
TheoremReport<S> theorem_report_at(const HomogeneousPair<S>& pair, const TypeIIPoint<S>& pt,
                                   long n_max) {
  const HomogeneousPair<S> moved = conjugate_at(pair, pt).normalized();
  const auto rep = reduce_pair(moved);

  TheoremReport<S> out(pt);
  out.map_description = pair.to_string();
  out.n_max = n_max;
  out.r_base = normalized_ord_res(moved);
  out.base_semistable = rep.semistable;
  out.in_indeterminacy = rep.in_indeterminacy;
  out.notes.push_back("iteration checked for n <= " + std::to_string(n_max) +
                      " only; the full statement quantifies over all n");

  if (!rep.semistable)
    out.witnesses.push_back("reduction at the chosen point is not semistable: " +
                            rep.semistable_reason);
  if (rep.in_indeterminacy)
    out.witnesses.push_back("in_indeterminacy: reduction is constant into its own hole locus");

  for (long n = 1; n <= n_max; ++n) {
    const IterationFormulaRecord rec = iteration_formula_check(moved, n);
    TheoremStep step;
    step.n = n;
    step.factor = rec.factor;
    step.r_iterate = rec.r_iterate;
    step.predicted = rec.predicted;
    step.match = rec.match;
    step.iterate_semistable = reduce_normalized(moved.iterate(n)).semistable;
    if (!step.match)
      out.witnesses.push_back("n = " + std::to_string(n) + ": R of the iterate is " +
                              rec.r_iterate.to_string() + ", predicted " +
                              rec.predicted.to_string());
    if (!step.iterate_semistable)
      out.witnesses.push_back("n = " + std::to_string(n) + ": the iterate is not semistable");
    out.steps.push_back(step);
  }

  out.holds = !out.in_indeterminacy && out.base_semistable;
  for (const auto& step : out.steps) out.holds = out.holds && step.match && step.iterate_semistable;
  return out;
}

}  // namespace detail

/**
 * Coordinate-wise iteration check at the Gauss point of the given
 * coordinates.  Decisive when the Gauss point classifies cleanly:
 * semistable (verdict from the per-n checks) or indeterminate (verdict
 * fails with that witness).  Otherwise the domain is inconclusive.
 */
template <typename S>
TheoremReport<S> main_theorem_check(const HomogeneousPair<S>& pair, long n_max) {
  const TypeIIPoint<S> gauss = TypeIIPoint<S>::gauss(pair.proto());
  TheoremReport<S> report = detail::theorem_report_at(pair, gauss, n_max);
  if (!report.base_semistable && !report.in_indeterminacy)
    throw inconclusive_domain_error(
        "the Gauss point is neither semistable nor indeterminate; search a segment");
  return report;
}

/**
 * Coordinate-wise iteration check over a search segment: minimize the
 * resultant valuation on the grid, prefer a semistable minimizer and run
 * the per-n checks there.  A minimizer that is indeterminate (and none
 * semistable) is decisive failure; a domain with neither kind of minimizer
 * raises inconclusive_domain_error.
 */
template <typename S>
TheoremReport<S> main_theorem_check(const HomogeneousPair<S>& pair, long n_max,
                                    const SegmentSpec<S>& search) {
  const OrdResProfile prof = min_res_loc_on_segment(pair, search);

  std::optional<TheoremReport<S>> indeterminate_case;
  for (const Rat& rho : prof.argmin) {
    TheoremReport<S> report = detail::theorem_report_at(pair, search.point(rho), n_max);
    if (report.base_semistable) {
      if (prof.boundary_minimum)
        report.notes.push_back(
            "minimum sits on the domain boundary; the true minimum may lie outside");
      if (prof.argmin.size() > 1)
        report.notes.push_back(
            "minimum attained along a subsegment; only grid points were tested");
      return report;
    }
    if (report.in_indeterminacy && !indeterminate_case.has_value())
      indeterminate_case = std::move(report);
  }
  if (indeterminate_case.has_value()) return *indeterminate_case;
  throw inconclusive_domain_error(
      "no grid minimizer on the segment is semistable or indeterminate; widen or refine the domain");
}

/**
 * Property oracle: (iterate semistable and formula matched at n) implies
 * (the map itself is semistable).  Expected to always hold.
 */
template <typename S>
bool ss_iterate_implication_check(const HomogeneousPair<S>& pair, long n) {
  const IterationFormulaRecord rec = iteration_formula_check(pair, n);
  const bool iterate_ss = reduce_normalized(pair.iterate(n)).semistable;
  const bool hypothesis = iterate_ss && rec.match;
  if (!hypothesis) return true;
  return reduce_pair(pair).semistable;
}

}  // namespace berkres

#endif  // BERKRES_THEOREM_HPP
