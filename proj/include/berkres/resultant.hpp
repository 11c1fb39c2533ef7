#ifndef BERKRES_RESULTANT_HPP
#define BERKRES_RESULTANT_HPP

/**
 * @file resultant.hpp
 *
 * Resultants of binary forms over a valued scalar type, with two engines:
 *
 *  - resultant_exact():  fraction-free (Bareiss) determinant of the
 *                        Sylvester matrix.  Exact, used for small degrees
 *                        and as the oracle the fast path is tested against.
 *  - resultant_ord():    valuation of the resultant via Gaussian
 *                        elimination on series truncated to a working
 *                        window.  Min-valuation pivoting keeps every
 *                        multiplier integral; each pivot of valuation v
 *                        costs v of the remaining window, and a run is
 *                        *certified* only when every pivot's valuation is
 *                        strictly inside the window that is left.  Failed
 *                        runs double the window; exhausted retries fall
 *                        back to the exact engine (which also settles
 *                        degeneracy, resultant = 0).
 *
 * The valuation of a pair's resultant after normalization (minimum
 * coefficient valuation zero) is the basic numerical invariant of the
 * pair; normalized_ord_res() computes it.
 */

#include <optional>
#include <vector>

#include "berkres/forms.hpp"
#include "berkres/rational.hpp"

namespace berkres {

template <typename S>
using ScalarMatrix = std::vector<std::vector<S>>;

/**
 * Sylvester matrix of binary forms F (degree a) and G (degree b):
 * (a+b) x (a+b), b shifted copies of F's coefficients over a copies of G's,
 * each listed by descending X-power.
 */
template <typename S>
ScalarMatrix<S> sylvester_matrix(const BinaryForm<S>& f, const BinaryForm<S>& g) {
  const long a = f.degree(), b = g.degree();
  const long n = a + b;
  if (n == 0) throw std::invalid_argument("resultant of two constants is not defined");
  ScalarMatrix<S> m(static_cast<std::size_t>(n),
                    std::vector<S>(static_cast<std::size_t>(n), scalar_zero_like(f.proto())));
  for (long r = 0; r < b; ++r)
    for (long j = 0; j <= a; ++j) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + j)] = f.coeff(a - j);
  for (long r = 0; r < a; ++r)
    for (long j = 0; j <= b; ++j)
      m[static_cast<std::size_t>(b + r)][static_cast<std::size_t>(r + j)] = g.coeff(b - j);
  return m;
}

/** Naive cofactor-expansion determinant; test oracle for small matrices. */
template <typename S>
S det_cofactor(const ScalarMatrix<S>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("determinant of an empty matrix");
  if (n == 1) return m[0][0];
  S acc = scalar_zero_like(m[0][0]);
  for (std::size_t j = 0; j < n; ++j) {
    if (scalar_is_zero(m[0][j])) continue;
    ScalarMatrix<S> sub;
    sub.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<S> row;
      row.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      sub.push_back(std::move(row));
    }
    S term = m[0][j] * det_cofactor(sub);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/** Fraction-free determinant (Bareiss) with row pivoting; exact. */
template <typename S>
S det_bareiss(ScalarMatrix<S> m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("determinant of an empty matrix");
  const S zero = scalar_zero_like(m[0][0]);
  S prev = scalar_one_like(m[0][0]);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (scalar_is_zero(m[k][k])) {
      std::size_t r = k + 1;
      while (r < n && scalar_is_zero(m[r][k])) ++r;
      if (r == n) return zero;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        S num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = scalar_exact_div(num, prev);
      }
      m[i][k] = zero;
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : zero - m[n - 1][n - 1];
}

namespace detail {

/**
 * One certified elimination run on entries truncated before t^window.
 * Entries must have valuation >= 0.  Returns the determinant valuation or
 * nullopt when the window is too small to certify.
 */
template <typename S>
std::optional<Rat> det_ord_window(ScalarMatrix<S> m, const Rat& window) {
  const std::size_t n = m.size();
  Rat prec = window;
  for (auto& row : m)
    for (auto& e : row) e = scalar_truncate(e, prec);
  Rat acc(0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = n;
    Ord best_ord = Ord::infinity();
    for (std::size_t r = k; r < n; ++r) {
      Ord o = scalar_ord(m[r][k]);
      if (o < best_ord) {
        best_ord = o;
        best = r;
      }
    }
    // A pivot is trustworthy only if its valuation is strictly inside the
    // precision still available; otherwise the truncated entry could be
    // the shadow of a cancellation we cannot see.
    if (best_ord.is_infinite() || !(best_ord.value() < prec)) return std::nullopt;
    if (best != k) std::swap(m[k], m[best]);
    const Rat v = best_ord.value();
    acc = acc + v;
    if (k + 1 == n) break;
    const S pinv = scalar_inverse_mod(m[k][k], prec - v);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (scalar_is_zero(m[r][k])) continue;
      const S mult = scalar_truncate(m[r][k] * pinv, prec - v);
      for (std::size_t c = k + 1; c < n; ++c)
        m[r][c] = scalar_truncate(m[r][c] - mult * m[k][c], prec - v);
      m[r][k] = scalar_zero_like(m[r][k]);
    }
    prec = prec - v;
  }
  return acc;
}

/** Largest exponent appearing in the matrix (window sizing heuristic). */
template <typename S>
Rat top_exponent_bound(const ScalarMatrix<S>& m) {
  Rat top(0);
  for (const auto& row : m)
    for (const auto& e : row) {
      if (scalar_is_zero(e)) continue;
      Ord o = scalar_ord(e);
      if (!o.is_infinite()) top = rat_max(top, o.value());
    }
  return top;
}

}  // namespace detail

/** Exact resultant of two binary forms. */
template <typename S>
S resultant_exact(const BinaryForm<S>& f, const BinaryForm<S>& g) {
  return det_bareiss(sylvester_matrix(f, g));
}

template <typename S>
S resultant_exact(const HomogeneousPair<S>& pair) {
  return resultant_exact(pair.numerator(), pair.denominator());
}

/**
 * Valuation of the resultant; +inf means the resultant vanishes (the pair
 * is degenerate).  All coefficients must have valuation >= 0 — callers
 * normalize first or shift explicitly (the resultant picks up 2d * shift).
 */
template <typename S>
Ord resultant_ord(const HomogeneousPair<S>& pair) {
  Ord m = pair.min_ord();
  if (m.is_infinite() || m.value().sign() < 0)
    throw std::invalid_argument("resultant_ord expects coefficients of nonnegative valuation");
  ScalarMatrix<S> syl = sylvester_matrix(pair.numerator(), pair.denominator());
  if (!scalar_is_truncating(pair.proto())) {
    S det = det_bareiss(syl);
    return scalar_ord(det);
  }
  Rat window = rat_max(Rat(8), detail::top_exponent_bound(syl) * Rat(2) + Rat(2));
  for (int tries = 0; tries < 8; ++tries) {
    std::optional<Rat> got = detail::det_ord_window(syl, window);
    if (got.has_value()) return Ord(*got);
    window = window * Rat(2);
  }
  S det = det_bareiss(syl);
  return scalar_ord(det);
}

/** Whether the pair defines a morphism (resultant nonzero). */
template <typename S>
bool is_morphism(const HomogeneousPair<S>& pair) {
  return !resultant_ord(pair.normalized()).is_infinite();
}

/**
 * The pair's resultant valuation after scaling normalization: the basic
 * numerical invariant R attached to a chosen coordinate presentation.
 * Throws std::domain_error for degenerate pairs.
 */
template <typename S>
Rat normalized_ord_res(const HomogeneousPair<S>& pair) {
  Ord o = resultant_ord(pair.normalized());
  if (o.is_infinite()) throw std::domain_error("degenerate pair: resultant vanishes");
  return o.value();
}

}  // namespace berkres

#endif  // BERKRES_RESULTANT_HPP
