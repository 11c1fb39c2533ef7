#ifndef BERKRES_FORMS_HPP
#define BERKRES_FORMS_HPP

/**
 * @file forms.hpp
 *
 * Homogeneous machinery for rational maps on the projective line:
 *
 *  - BinaryForm<S>:      a homogeneous polynomial in X, Y over a valued
 *                        scalar type S, stored by ascending X-power.
 *  - Matrix2<S>:         a 2x2 change of coordinates.
 *  - HomogeneousPair<S>: a pair [F, G] of coprime-in-spirit forms of equal
 *                        degree d presenting a rational map of degree d.
 *                        Pairs support iteration, coordinate conjugation,
 *                        and scaling normalization (minimum coefficient
 *                        valuation zero).
 */

#include <string>
#include <vector>

#include "berkres/rational.hpp"

namespace berkres {

/**
 * Compile-time facts about a scalar backend; each backend specializes this
 * (at minimum with `Residue`, the residue-field type of its reductions).
 */
template <typename S>
struct ScalarTraits;

template <typename S>
class BinaryForm {
 public:
  /** Form of fixed degree with all coefficients zero. */
  BinaryForm(long degree, const S& proto)
      : degree_(degree), coeffs_(static_cast<std::size_t>(degree + 1), scalar_zero_like(proto)), proto_(proto) {
    if (degree < 0) throw std::invalid_argument("form degree must be nonnegative");
  }

  /**
   * Build from coefficients listed by descending X-power,
   * [a_d, a_{d-1}, ..., a_0] for a_d X^d + a_{d-1} X^{d-1} Y + ... + a_0 Y^d.
   */
  static BinaryForm from_descending(const std::vector<S>& desc, const S& proto) {
    if (desc.empty()) throw std::invalid_argument("form needs at least one coefficient");
    BinaryForm f(static_cast<long>(desc.size()) - 1, proto);
    for (std::size_t i = 0; i < desc.size(); ++i) f.coeffs_[desc.size() - 1 - i] = desc[i];
    return f;
  }

  long degree() const { return degree_; }
  const S& proto() const { return proto_; }

  /** Coefficient of X^i Y^{d-i}. */
  const S& coeff(long i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  void set_coeff(long i, const S& v) { coeffs_.at(static_cast<std::size_t>(i)) = v; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!scalar_is_zero(c)) return false;
    return true;
  }

  /** Minimum valuation over the coefficients (+inf when identically zero). */
  Ord min_ord() const {
    Ord m = Ord::infinity();
    for (const auto& c : coeffs_) m = ord_min(m, scalar_ord(c));
    return m;
  }

  S evaluate(const S& x, const S& y) const {
    // Horner in X with Y-powers folded in: sum_i c_i x^i y^{d-i}.
    S acc = scalar_zero_like(proto_);
    for (long i = degree_; i >= 0; --i) acc = acc * x + coeffs_[static_cast<std::size_t>(i)] * y_pow_cache(y, i);
    return acc;
  }

  BinaryForm scaled(const S& c) const {
    BinaryForm r(degree_, proto_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i] * c;
    return r;
  }

  /** Multiply every coefficient by uniformizer^e. */
  BinaryForm shifted(const Rat& e) const {
    BinaryForm r(degree_, proto_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = scalar_shift(coeffs_[i], e);
    return r;
  }

  friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree_ != b.degree_) throw std::invalid_argument("form degrees differ in addition");
    BinaryForm r(a.degree_, a.proto_);
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return r;
  }

  friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree_ != b.degree_) throw std::invalid_argument("form degrees differ in subtraction");
    BinaryForm r(a.degree_, a.proto_);
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return r;
  }

  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    BinaryForm r(a.degree_ + b.degree_, a.proto_);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (scalar_is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        r.coeffs_[i + j] = r.coeffs_[i + j] + a.coeffs_[i] * b.coeffs_[j];
    }
    return r;
  }

  /** Homogeneous substitution F(P, Q) for forms P, Q of equal degree. */
  BinaryForm composed(const BinaryForm& p, const BinaryForm& q) const {
    if (p.degree_ != q.degree_) throw std::invalid_argument("substitution forms must share a degree");
    // Running products p^i and the table q^{d-i} keep this O(d^2) multiplies.
    std::vector<BinaryForm> qpow;
    qpow.reserve(static_cast<std::size_t>(degree_ + 1));
    BinaryForm one(0, proto_);
    one.set_coeff(0, scalar_one_like(proto_));
    qpow.push_back(one);
    for (long i = 1; i <= degree_; ++i) qpow.push_back(qpow.back() * q);
    BinaryForm acc(degree_ * p.degree_, proto_);
    BinaryForm ppow = one;
    for (long i = 0; i <= degree_; ++i) {
      if (!scalar_is_zero(coeffs_[static_cast<std::size_t>(i)])) {
        BinaryForm term = ppow * qpow[static_cast<std::size_t>(degree_ - i)];
        acc = acc + term.scaled(coeffs_[static_cast<std::size_t>(i)]);
      }
      if (i < degree_) ppow = ppow * p;
    }
    return acc;
  }

  friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree_ != b.degree_) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
    return true;
  }
  friend bool operator!=(const BinaryForm& a, const BinaryForm& b) { return !(a == b); }

  /** Human-readable text, coefficients parenthesized where nontrivial. */
  std::string to_string() const {
    std::string out;
    bool first = true;
    for (long i = degree_; i >= 0; --i) {
      const S& c = coeffs_[static_cast<std::size_t>(i)];
      if (scalar_is_zero(c)) continue;
      if (!first) out += " + ";
      first = false;
      std::string cs = scalar_to_string(c);
      const bool trivial = (cs == "1");
      std::string mono;
      if (i > 0) {
        mono += "X";
        if (i > 1) mono += "^" + std::to_string(i);
      }
      if (degree_ - i > 0) {
        if (!mono.empty()) mono += "*";
        mono += "Y";
        if (degree_ - i > 1) mono += "^" + std::to_string(degree_ - i);
      }
      if (mono.empty()) {
        out += cs;
      } else if (trivial) {
        out += mono;
      } else {
        out += "(" + cs + ")*" + mono;
      }
    }
    return first ? "0" : out;
  }

 private:
  S y_pow_cache(const S& y, long i) const {
    // Plain power; evaluation is not on any hot path.
    S acc = scalar_one_like(proto_);
    for (long k = 0; k < degree_ - i; ++k) acc = acc * y;
    return acc;
  }

  long degree_;
  std::vector<S> coeffs_;
  S proto_;
};

/** 2x2 matrix acting on homogeneous coordinates. */
template <typename S>
struct Matrix2 {
  S a, b, c, d;  // rows (a b; c d)

  S det() const { return a * d - b * c; }

  /** Adjugate: (d -b; -c a); gamma * adj(gamma) = det * identity. */
  Matrix2 adjugate() const {
    S zero = scalar_zero_like(a);
    return Matrix2{d, zero - b, zero - c, a};
  }
};

template <typename S>
class HomogeneousPair {
 public:
  HomogeneousPair(const BinaryForm<S>& f, const BinaryForm<S>& g) : f_(f), g_(g) {
    if (f.degree() != g.degree()) throw std::invalid_argument("pair components must share a degree");
    if (f.degree() < 1) throw std::invalid_argument("pair degree must be at least 1");
    if (f.is_zero() && g.is_zero()) throw std::invalid_argument("pair must have a nonzero component");
  }

  long degree() const { return f_.degree(); }
  const BinaryForm<S>& numerator() const { return f_; }
  const BinaryForm<S>& denominator() const { return g_; }
  const S& proto() const { return f_.proto(); }

  /** Minimum coefficient valuation across both forms. */
  Ord min_ord() const { return ord_min(f_.min_ord(), g_.min_ord()); }

  /** Scale by uniformizer^e (same projective map, shifted lift). */
  HomogeneousPair shifted(const Rat& e) const { return HomogeneousPair(f_.shifted(e), g_.shifted(e)); }

  /** Rescale so the minimum coefficient valuation is exactly zero. */
  HomogeneousPair normalized() const {
    Ord m = min_ord();
    if (m.is_infinite()) throw std::domain_error("cannot normalize the zero pair");
    if (m.value().is_zero()) return *this;
    return shifted(-m.value());
  }

  /** Composition with another pair of the same coordinate conventions. */
  HomogeneousPair composed_with(const HomogeneousPair& inner) const {
    return HomogeneousPair(f_.composed(inner.f_, inner.g_), g_.composed(inner.f_, inner.g_));
  }

  /** n-fold self-composition (n >= 1). */
  HomogeneousPair iterate(long n) const {
    if (n < 1) throw std::invalid_argument("iterate count must be at least 1");
    HomogeneousPair acc = *this;
    for (long k = 1; k < n; ++k) acc = composed_with(acc);
    return acc;
  }

  /**
   * Conjugation adj(gamma) o Phi o gamma: the pair presenting the same
   * dynamical system in the coordinates moved by gamma.
   */
  HomogeneousPair conjugated(const Matrix2<S>& gamma) const {
    BinaryForm<S> px(1, proto()), qy(1, proto());
    px.set_coeff(1, gamma.a);
    px.set_coeff(0, gamma.b);
    qy.set_coeff(1, gamma.c);
    qy.set_coeff(0, gamma.d);
    BinaryForm<S> fc = f_.composed(px, qy);
    BinaryForm<S> gc = g_.composed(px, qy);
    Matrix2<S> adj = gamma.adjugate();
    BinaryForm<S> nf = fc.scaled(adj.a) + gc.scaled(adj.b);
    BinaryForm<S> ng = fc.scaled(adj.c) + gc.scaled(adj.d);
    return HomogeneousPair(nf, ng);
  }

  friend bool operator==(const HomogeneousPair& a, const HomogeneousPair& b) {
    return a.f_ == b.f_ && a.g_ == b.g_;
  }

  std::string to_string() const { return "[" + f_.to_string() + " : " + g_.to_string() + "]"; }

 private:
  BinaryForm<S> f_;
  BinaryForm<S> g_;
};

}  // namespace berkres

#endif  // BERKRES_FORMS_HPP
