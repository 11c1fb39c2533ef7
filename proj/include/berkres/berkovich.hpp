#ifndef BERKRES_BERKOVICH_HPP
#define BERKRES_BERKOVICH_HPP

/**
 * @file berkovich.hpp
 *
 * Type-II points of the projective Berkovich line over a valued field, and
 * the machinery built on them:
 *
 *  - TypeIIPoint: the disc point zeta_{a,rho}, with rho the *valuation* of
 *    the radius (rho = -log_v r).  The Gauss point is (a = 0, rho = 0).
 *  - gamma_for_point: a Mobius change of coordinates moving the Gauss point
 *    to a given type-II point (z -> t^rho z + a).
 *  - ord_res_at: the resultant valuation of the map rewritten in the
 *    coordinates of a point; a convex piecewise-affine function of rho along
 *    any centered segment.
 *  - min_res_loc_on_segment: exact grid minimization of that function along
 *    a segment, with convexity verification, the argmin set, one-sided
 *    slopes, and an interiority certificate.
 *  - crucial_weights: slope-break extraction.  Interior slope jumps become
 *    point masses (jump / 2d); segment endpoints carry one-sided data only,
 *    since a single segment cannot see their full branching.  Masses are
 *    normalized so that a complete support totals d - 1.
 *  - log_hsia_gauss / g_hat_eval: the Gauss-based kernel
 *    min(rho_x, rho_y, ord(a_x - a_y)) and the weighted potential
 *    ghat(x) = rho_x - (2/total) * sum_i mass_i * kernel(x, zeta_i),
 *    which vanishes at the Gauss point.
 *
 * Unit convention: every logarithmic quantity is expressed in valuation
 * units (ord), so quantities of the form X * log|q| appear as -X * ord(q).
 *
 * Grid policy: the caller chooses the grid denominator; the library verifies
 * what it computes (convexity, slope stability) and demands a finer grid
 * rather than guessing where an off-grid break might sit.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "berkres/forms.hpp"
#include "berkres/rational.hpp"
#include "berkres/resultant.hpp"

namespace berkres {

/**
 * Thrown when a slope break is suspected strictly between two grid points:
 * the sample data cannot be explained by breaks at grid points alone, so the
 * caller must refine the grid across the named interval.
 */
class refine_grid_error : public std::runtime_error {
 public:
  refine_grid_error(const Rat& lo, const Rat& hi)
      : std::runtime_error("slope break suspected strictly inside [" + lo.to_string() + ", " +
                           hi.to_string() + "]; refine the grid"),
        lo_(lo),
        hi_(hi) {}

  const Rat& interval_lo() const { return lo_; }
  const Rat& interval_hi() const { return hi_; }

 private:
  Rat lo_;
  Rat hi_;
};

/**
 * The type-II point zeta_{a, rho}: the disc with center a whose radius has
 * valuation rho.  rho = 0, a = 0 is the Gauss point.
 */
template <typename S>
struct TypeIIPoint {
  S center;
  Rat radius_exponent;  // valuation of the radius; larger = smaller disc

  static TypeIIPoint gauss(const S& proto) { return TypeIIPoint{scalar_zero_like(proto), Rat(0)}; }

  /** Two discs coincide iff the radii match and the centers are that close. */
  friend bool operator==(const TypeIIPoint& x, const TypeIIPoint& y) {
    if (x.radius_exponent != y.radius_exponent) return false;
    return scalar_ord(x.center - y.center) >= Ord(x.radius_exponent);
  }
  friend bool operator!=(const TypeIIPoint& x, const TypeIIPoint& y) { return !(x == y); }

  std::string to_string() const {
    return "zeta(" + scalar_to_string(center) + ", " + radius_exponent.to_string() + ")";
  }
};

/**
 * A segment of type-II points sharing a center, sampled on the grid
 * rho in (1/denominator) * Z, from lo to hi inclusive.
 */
template <typename S>
struct SegmentSpec {
  S center;
  Rat lo;
  Rat hi;
  long denominator;

  SegmentSpec(S center_, Rat lo_, Rat hi_, long denominator_)
      : center(std::move(center_)), lo(std::move(lo_)), hi(std::move(hi_)), denominator(denominator_) {
    if (denominator < 1) throw std::invalid_argument("grid denominator must be a positive integer");
    if (!(lo < hi)) throw std::invalid_argument("segment needs lo < hi");
    if (!(lo * Rat(denominator)).is_integer() || !(hi * Rat(denominator)).is_integer())
      throw std::invalid_argument("segment endpoints must be multiples of 1/denominator");
  }

  TypeIIPoint<S> point(const Rat& rho) const { return TypeIIPoint<S>{center, rho}; }

  std::vector<Rat> grid() const {
    std::vector<Rat> g;
    const long a = (lo * Rat(denominator)).num().get_si();
    const long b = (hi * Rat(denominator)).num().get_si();
    g.reserve(static_cast<std::size_t>(b - a + 1));
    for (long k = a; k <= b; ++k) g.push_back(Rat(k, denominator));
    return g;
  }
};

/**
 * A coordinate change carrying the Gauss point to zeta: z -> t^rho z + a,
 * as the matrix (t^rho  a; 0  1).  The identity for the Gauss point.
 *
 * Throws unsupported_parameter when the backend cannot scale by a fractional
 * power of the uniformizer (fixed-ramification fields).
 */
template <typename S>
Matrix2<S> gamma_for_point(const TypeIIPoint<S>& zeta) {
  const S one = scalar_one_like(zeta.center);
  const S zero = scalar_zero_like(zeta.center);
  return Matrix2<S>{scalar_shift(one, zeta.radius_exponent), zeta.center, zero, one};
}

/** The map rewritten in the coordinates of zeta. */
template <typename S>
HomogeneousPair<S> conjugate_at(const HomogeneousPair<S>& pair, const TypeIIPoint<S>& zeta) {
  return pair.conjugated(gamma_for_point(zeta));
}

/**
 * The resultant valuation of the map at a type-II point: normalize the
 * conjugate by gamma_for_point and take its resultant valuation.  Invariant
 * under the choice of representing coordinate change (unimodular freedom).
 */
template <typename S>
Rat ord_res_at(const HomogeneousPair<S>& pair, const TypeIIPoint<S>& zeta) {
  return normalized_ord_res(conjugate_at(pair, zeta));
}

/** An interior grid point where the profile's slope jumps. */
struct SlopeBreak {
  Rat rho;
  Rat left_slope;
  Rat right_slope;
  Rat mass;  // (right_slope - left_slope) / (2d)
};

/**
 * The sampled resultant-valuation profile along a segment: exact values on
 * the grid, the slope breaks seen at grid points, and the minimum.
 */
struct OrdResProfile {
  std::vector<std::pair<Rat, Rat>> samples;  // (rho, value), ascending in rho
  std::vector<SlopeBreak> breakpoints;       // interior slope jumps
  std::vector<Rat> argmin;                   // grid points attaining the minimum (consecutive)
  Rat min_value = Rat(0);
  long degree = 0;  // degree of the map, for mass normalization

  bool boundary_minimum = false;             // argmin touches a segment endpoint
  bool interior_certified = false;           // left slope <= 0 <= right slope around the argmin
  std::optional<Rat> left_slope_at_min;      // slope entering the argmin set (absent at lo boundary)
  std::optional<Rat> right_slope_at_min;     // slope leaving the argmin set (absent at hi boundary)
};

namespace detail {

/** Consecutive-interval slopes of a sampled profile. */
inline std::vector<Rat> profile_slopes(const std::vector<std::pair<Rat, Rat>>& samples) {
  std::vector<Rat> slopes;
  if (samples.size() < 2) throw std::invalid_argument("profile needs at least two samples");
  slopes.reserve(samples.size() - 1);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const Rat drho = samples[i + 1].first - samples[i].first;
    if (!(Rat(0) < drho)) throw std::invalid_argument("profile samples must be strictly increasing in rho");
    slopes.push_back((samples[i + 1].second - samples[i].second) / drho);
  }
  return slopes;
}

/**
 * Closed form for the profile along a centered segment.
 *
 * Factor the coordinate change as (shear by the center) * (scaling by
 * t^rho).  Conjugating by the shear once gives a pair psi independent of
 * rho; scaling then multiplies the X^j Y^{d-j} coefficient of the numerator
 * by t^{j rho} and of the denominator by t^{(j+1) rho}.  Hence
 *
 *   value(rho) = base + (d^2 + d) rho - 2d * env(rho),
 *
 * where base is psi's resultant valuation, (d^2 + d) rho is the determinant
 * contribution of the scaling, and env(rho) — the minimum coefficient
 * valuation after scaling — is the lower envelope of at most 2d + 2 affine
 * functions ord(coeff) + slope * rho with integer slopes.  One resultant
 * therefore prices the whole segment; pointwise conjugation is the test
 * oracle for this route.
 */
struct EnvelopeCandidate {
  Rat intercept;
  long slope;
};

struct EnvelopeRoute {
  Rat base = Rat(0);
  long degree = 0;
  std::vector<EnvelopeCandidate> candidates;

  Rat value_at(const Rat& rho) const {
    if (candidates.empty()) throw std::logic_error("empty envelope");
    Rat env = candidates.front().intercept + Rat(candidates.front().slope) * rho;
    for (const auto& c : candidates) env = rat_min(env, c.intercept + Rat(c.slope) * rho);
    return base + Rat(degree * degree + degree) * rho - Rat(2 * degree) * env;
  }
};

/** Candidate lines read off a sheared-and-normalized pair, with the given
 *  resultant valuation as the rho = 0 base value. */
template <typename S>
EnvelopeRoute envelope_route_from(const HomogeneousPair<S>& psi, const Rat& base) {
  EnvelopeRoute route;
  route.degree = psi.degree();
  route.base = base;
  for (long j = 0; j <= route.degree; ++j) {
    const Ord of = scalar_ord(psi.numerator().coeff(j));
    if (!of.is_infinite()) route.candidates.push_back(EnvelopeCandidate{of.value(), j});
    const Ord og = scalar_ord(psi.denominator().coeff(j));
    if (!og.is_infinite()) route.candidates.push_back(EnvelopeCandidate{og.value(), j + 1});
  }
  return route;
}

template <typename S>
EnvelopeRoute envelope_route(const HomogeneousPair<S>& pair, const S& center) {
  const S one = scalar_one_like(center);
  const S zero = scalar_zero_like(center);
  const HomogeneousPair<S> psi = pair.conjugated(Matrix2<S>{one, center, zero, one}).normalized();
  return envelope_route_from(psi, normalized_ord_res(psi));
}

}  // namespace detail

/**
 * Analyze exact profile samples on a grid: verify discrete convexity and
 * locate the minimum, slope breaks, and boundary behavior.
 *
 * Throws std::logic_error if the sampled values are not convex (that cannot
 * happen for correct inputs and indicates a bug or inconsistent data).
 * A minimum on the segment boundary is flagged, not an error.
 */
inline OrdResProfile analyze_profile_samples(std::vector<std::pair<Rat, Rat>> samples, long degree) {
  OrdResProfile prof;
  prof.degree = degree;
  prof.samples = std::move(samples);

  const std::vector<Rat> slopes = detail::profile_slopes(prof.samples);
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (slopes[i] < slopes[i - 1])
      throw std::logic_error("resultant profile is not convex on the grid near rho = " +
                             prof.samples[i].first.to_string());

  prof.min_value = prof.samples.front().second;
  for (const auto& [rho, v] : prof.samples) {
    (void)rho;
    prof.min_value = rat_min(prof.min_value, v);
  }
  std::size_t first = prof.samples.size(), last = 0;
  for (std::size_t i = 0; i < prof.samples.size(); ++i) {
    if (prof.samples[i].second == prof.min_value) {
      first = std::min(first, i);
      last = i;
      prof.argmin.push_back(prof.samples[i].first);
    }
  }

  for (std::size_t i = 1; i + 1 < prof.samples.size(); ++i) {
    if (slopes[i] != slopes[i - 1]) {
      prof.breakpoints.push_back(SlopeBreak{prof.samples[i].first, slopes[i - 1], slopes[i],
                                            (slopes[i] - slopes[i - 1]) / Rat(2 * prof.degree)});
    }
  }

  prof.boundary_minimum = (first == 0) || (last + 1 == prof.samples.size());
  if (first > 0) prof.left_slope_at_min = slopes[first - 1];
  if (last + 1 < prof.samples.size()) prof.right_slope_at_min = slopes[last];
  prof.interior_certified = !prof.boundary_minimum && *prof.left_slope_at_min <= Rat(0) &&
                            Rat(0) <= *prof.right_slope_at_min;
  return prof;
}

/**
 * The resultant-valuation profile on the grid of a segment.
 *
 * Samples come from the closed-form envelope of the segment's center (one
 * resultant prices every grid point); the result is identical to evaluating
 * ord_res_at per grid point, which the test suite enforces.
 */
template <typename S>
OrdResProfile min_res_loc_on_segment(const HomogeneousPair<S>& pair, const SegmentSpec<S>& seg) {
  const detail::EnvelopeRoute route = detail::envelope_route(pair, seg.center);
  std::vector<std::pair<Rat, Rat>> samples;
  for (const Rat& rho : seg.grid()) samples.emplace_back(rho, route.value_at(rho));
  return analyze_profile_samples(std::move(samples), pair.degree());
}

/** One-sided data at a segment endpoint: a single segment cannot determine
 *  the full mass there, so the inward slope is reported with the mass it
 *  would contribute if the segment were the entire support. */
struct SegmentEndpointData {
  Rat rho;
  Rat slope_into_segment;  // outgoing derivative from the endpoint into the segment
  Rat one_sided_mass;      // ((d^2 - d) + slope_into_segment) / (2d); may be negative
};

/** Point masses extracted from a profile's slope breaks. */
struct CrucialWeightReport {
  std::vector<std::pair<Rat, Rat>> interior;  // (rho, mass), mass = slope jump / (2d)
  SegmentEndpointData lo_end;
  SegmentEndpointData hi_end;

  /** Sum of all masses; equals d - 1 exactly when the segment carries the
   *  whole support of the measure. */
  Rat full_support_total() const {
    Rat t = lo_end.one_sided_mass + hi_end.one_sided_mass;
    for (const auto& [rho, m] : interior) {
      (void)rho;
      t = t + m;
    }
    return t;
  }
};

/**
 * Extract point masses from the slope breaks of a sampled profile.
 *
 * Interior break at rho: mass = (right slope - left slope) / (2d), in the
 * normalization where a complete support totals d - 1.  Endpoints are
 * one-sided: their mass formula assumes no support beyond the segment.
 *
 * Requires stable slopes: whenever two breaks occur at *adjacent* grid
 * points, the single interval between them has a slope matching neither
 * side, which means a true break hides strictly inside it; that raises
 * refine_grid_error naming the interval.
 */
inline CrucialWeightReport crucial_weights(const OrdResProfile& profile, long d) {
  if (d < 1) throw std::invalid_argument("degree must be positive");
  const auto& samples = profile.samples;
  const std::vector<Rat> slopes = detail::profile_slopes(samples);

  std::vector<std::size_t> breaks;  // indices of interior grid points with a slope jump
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (slopes[i] != slopes[i - 1]) breaks.push_back(i);
  for (std::size_t k = 1; k < breaks.size(); ++k)
    if (breaks[k] == breaks[k - 1] + 1)
      throw refine_grid_error(samples[breaks[k - 1]].first, samples[breaks[k]].first);

  CrucialWeightReport rep;
  const Rat two_d = Rat(2 * d);
  for (std::size_t i : breaks)
    rep.interior.emplace_back(samples[i].first, (slopes[i] - slopes[i - 1]) / two_d);

  const Rat branch = Rat(d * d - d);
  rep.lo_end = SegmentEndpointData{samples.front().first, slopes.front(),
                                   (branch + slopes.front()) / two_d};
  rep.hi_end = SegmentEndpointData{samples.back().first, -slopes.back(),
                                   (branch - slopes.back()) / two_d};
  return rep;
}

/**
 * The weights of a report as point masses on the segment, endpoints
 * included.  Meaningful when the segment carries the whole support.
 */
template <typename S>
std::vector<std::pair<TypeIIPoint<S>, Rat>> weight_points_on_segment(const CrucialWeightReport& weights,
                                                                     const SegmentSpec<S>& seg) {
  std::vector<std::pair<TypeIIPoint<S>, Rat>> pts;
  pts.emplace_back(seg.point(weights.lo_end.rho), weights.lo_end.one_sided_mass);
  for (const auto& [rho, mass] : weights.interior) pts.emplace_back(seg.point(rho), mass);
  pts.emplace_back(seg.point(weights.hi_end.rho), weights.hi_end.one_sided_mass);
  return pts;
}

/**
 * The Gauss-based kernel in valuation units:
 * min(rho_x, rho_y, ord(center difference)).  Defined for points of the
 * closed unit region (center valuation >= 0, radius exponent >= 0).  The
 * diagonal value is the point's own radius exponent.
 */
template <typename S>
Rat log_hsia_gauss(const TypeIIPoint<S>& x, const TypeIIPoint<S>& y) {
  const Ord zero(Rat(0));
  if (scalar_ord(x.center) < zero || scalar_ord(y.center) < zero || x.radius_exponent.sign() < 0 ||
      y.radius_exponent.sign() < 0)
    throw std::domain_error("kernel points must lie in the closed unit region");
  const Rat radii = rat_min(x.radius_exponent, y.radius_exponent);
  const Ord sep = scalar_ord(x.center - y.center);
  if (sep < Ord(radii)) return sep.value();
  return radii;
}

/**
 * The weighted potential ghat(x) = rho_x - (2/total) * sum_i mass_i *
 * kernel(x, zeta_i), exact over the rationals.  Always 0 at the Gauss point.
 */
template <typename S>
Rat g_hat_eval(const std::vector<std::pair<TypeIIPoint<S>, Rat>>& weights, const Rat& total,
               const TypeIIPoint<S>& x) {
  if (total.is_zero()) throw std::invalid_argument("total mass must be nonzero");
  Rat acc(0);
  for (const auto& [zeta, mass] : weights) acc = acc + mass * log_hsia_gauss(x, zeta);
  return x.radius_exponent - Rat(2) / total * acc;
}

}  // namespace berkres

#endif  // BERKRES_BERKOVICH_HPP
