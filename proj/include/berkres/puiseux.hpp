#ifndef BERKRES_PUISEUX_HPP
#define BERKRES_PUISEUX_HPP

/**
 * @file puiseux.hpp
 *
 * Puiseux polynomials: finite sums  sum_i c_i * t^{e_i}  with coefficients
 * c_i in a residue field K (exact rationals or a prime field) and exponents
 * e_i in (1/N) * Z for a fixed ramification index N >= 1.
 *
 * These are the scalars of the valued field k((t^{1/N})) that the rest of
 * the library computes with.  The valuation ord() reads off the smallest
 * exponent carrying a nonzero coefficient; ord(0) = +infinity.
 *
 * Elements with different ramification indices interoperate: binary
 * operations lift both operands to the least common refinement of their
 * exponent grids, so N is a representation detail rather than a semantic
 * one (equality is mathematical equality of the underlying sums).
 */

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "berkres/rational.hpp"
#include "berkres/residue.hpp"

namespace berkres {

template <typename K>
class Puiseux {
 public:
  /** Zero element on the exponent grid (1/ram)*Z. */
  explicit Puiseux(const K& proto, long ram = 1) : ram_(ram), proto_(proto) {
    if (ram_ <= 0) throw std::invalid_argument("ramification index must be positive");
  }

  /** Constant element (exponent-0 term only). */
  static Puiseux constant(const K& value, long ram = 1) {
    Puiseux r(value, ram);
    if (!res_is_zero(value)) r.terms_[0] = value;
    return r;
  }

  /** Integer constant lifted through the residue field. */
  static Puiseux from_long(long v, const K& proto, long ram = 1) {
    return constant(res_from_long_like(proto, v), ram);
  }

  /** The monomial c * t^e. */
  static Puiseux monomial(const K& c, const Rat& e, const K& proto, long ram_hint = 1) {
    long ram = lcm_long(ram_hint, e.den().get_si());
    Puiseux r(proto, ram);
    if (!res_is_zero(c)) {
      Rat key = e * Rat(ram);
      r.terms_[key.num().get_si()] = c;
    }
    return r;
  }

  /** The uniformizer power t^e. */
  static Puiseux t_pow(const Rat& e, const K& proto, long ram_hint = 1) {
    return monomial(res_one_like(proto), e, proto, ram_hint);
  }

  long ramification() const { return ram_; }
  const K& proto() const { return proto_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /** Valuation: smallest exponent with nonzero coefficient; +inf for 0. */
  Ord ord() const {
    if (terms_.empty()) return Ord::infinity();
    return Ord(Rat(terms_.begin()->first, ram_));
  }

  /** Largest exponent with nonzero coefficient (requires nonzero element). */
  Rat top_exponent() const {
    if (terms_.empty()) throw std::domain_error("top exponent of zero element");
    return Rat(terms_.rbegin()->first, ram_);
  }

  /** Coefficient of t^e (zero when e is off the support). */
  K coefficient_at(const Rat& e) const {
    Rat key = e * Rat(ram_);
    if (!key.is_integer()) return res_zero_like(proto_);
    auto it = terms_.find(key.num().get_si());
    return it == terms_.end() ? res_zero_like(proto_) : it->second;
  }

  /** Residue-field image: the coefficient of t^0. */
  K reduce_at_zero() const { return coefficient_at(Rat(0)); }

  /** Leading (lowest-exponent) coefficient of a nonzero element. */
  K leading_coefficient() const {
    if (terms_.empty()) throw std::domain_error("leading coefficient of zero element");
    return terms_.begin()->second;
  }

  /** Re-express on a refined grid; m must be a positive multiple of N. */
  Puiseux with_ramification(long m) const {
    if (m == ram_) return *this;
    if (m <= 0 || m % ram_ != 0)
      throw std::invalid_argument("ramification refinement must be a positive multiple");
    Puiseux r(proto_, m);
    const long f = m / ram_;
    for (const auto& [k, c] : terms_) r.terms_[k * f] = c;
    return r;
  }

  Puiseux operator-() const {
    Puiseux r(proto_, ram_);
    for (const auto& [k, c] : terms_) r.terms_[k] = res_zero_like(proto_) - c;
    return r;
  }

  friend Puiseux operator+(const Puiseux& a, const Puiseux& b) {
    long m = lcm_long(a.ram_, b.ram_);
    Puiseux x = a.with_ramification(m), y = b.with_ramification(m);
    for (const auto& [k, c] : y.terms_) x.add_term(k, c);
    return x;
  }

  friend Puiseux operator-(const Puiseux& a, const Puiseux& b) { return a + (-b); }

  friend Puiseux operator*(const Puiseux& a, const Puiseux& b) {
    long m = lcm_long(a.ram_, b.ram_);
    Puiseux x = a.with_ramification(m), y = b.with_ramification(m);
    Puiseux r(a.proto_, m);
    for (const auto& [ka, ca] : x.terms_)
      for (const auto& [kb, cb] : y.terms_) r.add_term(ka + kb, ca * cb);
    return r;
  }

  Puiseux& operator+=(const Puiseux& o) { return *this = *this + o; }
  Puiseux& operator-=(const Puiseux& o) { return *this = *this - o; }
  Puiseux& operator*=(const Puiseux& o) { return *this = *this * o; }

  /** Scale by a residue-field constant. */
  Puiseux scaled(const K& c) const {
    Puiseux r(proto_, ram_);
    if (res_is_zero(c)) return r;
    for (const auto& [k, cc] : terms_) r.terms_[k] = cc * c;
    return r;
  }

  /** Multiply by t^e (refining the grid if e requires it). */
  Puiseux shifted(const Rat& e) const {
    long m = lcm_long(ram_, e.den().get_si());
    Puiseux x = with_ramification(m);
    Rat off = e * Rat(m);
    const long d = off.num().get_si();
    Puiseux r(proto_, m);
    for (const auto& [k, c] : x.terms_) r.terms_[k + d] = c;
    return r;
  }

  Puiseux pow(unsigned long n) const {
    Puiseux acc = from_long(1, proto_, ram_), base = *this;
    while (n) {
      if (n & 1UL) acc *= base;
      base = (n >>= 1UL) ? base * base : base;
    }
    return acc;
  }

  /**
   * Exact division: returns q with *this == q * b, throwing std::logic_error
   * when no such Puiseux polynomial exists.  Runs ascending-exponent long
   * division, so divisors of positive valuation are fine.
   */
  Puiseux exact_div(const Puiseux& b) const {
    if (b.is_zero()) throw std::domain_error("division by zero element");
    long m = lcm_long(ram_, b.ram_);
    Puiseux rem = with_ramification(m), div = b.with_ramification(m);
    Puiseux q(proto_, m);
    if (rem.is_zero()) return q;
    const long lead_b = div.terms_.begin()->first;
    const long top_b = div.terms_.rbegin()->first;
    const long top_r = rem.terms_.rbegin()->first;
    const long max_q = top_r - top_b;
    const K inv_lead = res_inv(div.terms_.begin()->second);
    while (!rem.is_zero()) {
      const long k = rem.terms_.begin()->first;
      const long kq = k - lead_b;
      if (kq > max_q) throw std::logic_error("inexact division of valued scalars");
      const K c = rem.terms_.begin()->second * inv_lead;
      q.terms_[kq] = c;
      for (const auto& [kb, cb] : div.terms_) rem.add_term(kq + kb, res_zero_like(proto_) - c * cb);
    }
    return q;
  }

  /** Drop all terms with exponent >= bound (truncation modulo t^bound). */
  Puiseux truncate_before(const Rat& bound) const {
    Puiseux r(proto_, ram_);
    Rat cut = bound * Rat(ram_);
    for (const auto& [k, c] : terms_) {
      if (Rat(k) < cut) r.terms_[k] = c;
    }
    return r;
  }

  /**
   * Series inverse modulo t^P: returns y with (*this) * y == 1 + O(t^P).
   * Writing x = c * t^v * (1 + h), ord(h) > 0, the result has exponents in
   * [-v, P - v); the caller is responsible for knowing x itself to enough
   * precision that the inverse is meaningful.  Newton iteration, which
   * doubles the error order each round, so it terminates quickly.
   */
  Puiseux inverse_mod(const Rat& P) const {
    if (is_zero()) throw std::domain_error("inverse of zero element");
    if (P.sign() <= 0) throw std::invalid_argument("inverse precision must be positive");
    const Rat v = ord().value();
    const K lead = leading_coefficient();
    // u = x / (lead * t^v) has constant term 1; invert u mod t^P.
    Puiseux u = shifted(-v).scaled(res_inv(lead)).truncate_before(P);
    Puiseux one = from_long(1, proto_, u.ramification());
    Puiseux y = one;
    while (true) {
      Puiseux e = (one - u * y).truncate_before(P);
      if (e.is_zero()) break;
      y = (y + y * e).truncate_before(P);
    }
    return y.scaled(res_inv(lead)).shifted(-v);
  }

  friend bool operator==(const Puiseux& a, const Puiseux& b) {
    long m = lcm_long(a.ram_, b.ram_);
    return a.with_ramification(m).terms_ == b.with_ramification(m).terms_;
  }
  friend bool operator!=(const Puiseux& a, const Puiseux& b) { return !(a == b); }

  /** Ascending-exponent term list as (exponent, coefficient) pairs. */
  std::vector<std::pair<Rat, K>> terms() const {
    std::vector<std::pair<Rat, K>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(Rat(k, ram_), c);
    return out;
  }

  /** Canonical text form; parse_puiseux() round-trips it. */
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      const Rat e(k, ram_);
      const bool neg = res_is_negative(c);
      const K mag = res_abs(c);
      if (first) {
        if (neg) os << "-";
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      const bool unit_coeff = res_is_zero(mag - res_one_like(proto_));
      if (e.is_zero()) {
        os << res_to_string(mag);
        continue;
      }
      if (!unit_coeff) os << res_to_string(mag) << "*";
      if (e == Rat(1)) {
        os << "t";
      } else if (e.is_integer() && e.sign() > 0) {
        os << "t^" << e.to_string();
      } else {
        os << "t^(" << e.to_string() << ")";
      }
    }
    return os.str();
  }

 private:
  void add_term(long k, const K& c) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (!res_is_zero(c)) terms_.emplace(k, c);
      return;
    }
    K s = it->second + c;
    if (res_is_zero(s))
      terms_.erase(it);
    else
      it->second = s;
  }

  long ram_;
  std::map<long, K> terms_;
  K proto_;
};

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline bool scan_unsigned(const std::string& s, std::size_t& i, std::string& out) {
  std::size_t j = i;
  while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
  if (j == i) return false;
  out = s.substr(i, j - i);
  i = j;
  return true;
}

/** Parse "p", "-p", "p/q" starting at i. */
inline Rat scan_rational(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = (s[i] == '-');
    ++i;
    skip_ws(s, i);
  }
  std::string num;
  if (!scan_unsigned(s, i, num)) throw parse_error("expected a number in scalar text");
  std::string text = (neg ? "-" : "") + num;
  std::size_t save = i;
  skip_ws(s, i);
  if (i < s.size() && s[i] == '/') {
    ++i;
    skip_ws(s, i);
    std::string den;
    if (!scan_unsigned(s, i, den)) throw parse_error("expected a denominator in scalar text");
    text += "/" + den;
  } else {
    i = save;
  }
  return Rat::from_string(text);
}

/** Parse the exponent after "t^": a signed integer or "(p/q)". */
inline Rat scan_exponent(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i < s.size() && s[i] == '(') {
    ++i;
    Rat e = scan_rational(s, i);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ')') throw parse_error("unbalanced parenthesis in exponent");
    ++i;
    return e;
  }
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = (s[i] == '-');
    ++i;
  }
  std::string digits;
  if (!scan_unsigned(s, i, digits)) throw parse_error("expected an exponent after '^'");
  Rat e = Rat::from_string(digits);
  return neg ? -e : e;
}

}  // namespace detail

/**
 * Parse scalar text: a signed sum of terms, each `c`, `c*t^e`, `t^e`, or
 * `t`, with `c` a rational `p` or `p/q` and `e` an integer or `(p/q)`.
 * Every exponent denominator must divide the declared ramification index.
 */
template <typename K>
Puiseux<K> parse_puiseux(const std::string& text, const K& proto, long ramification) {
  if (ramification <= 0) throw std::invalid_argument("ramification index must be positive");
  Puiseux<K> acc(proto, ramification);
  std::size_t i = 0;
  detail::skip_ws(text, i);
  if (i >= text.size()) throw parse_error("empty scalar text");
  bool expect_term = true;
  int sign = +1;
  while (i < text.size()) {
    detail::skip_ws(text, i);
    if (i >= text.size()) break;
    const char c = text[i];
    if (!expect_term) {
      if (c == '+' || c == '-') {
        sign = (c == '-') ? -1 : +1;
        ++i;
        expect_term = true;
        continue;
      }
      throw parse_error(std::string("unexpected character '") + c + "' in scalar text");
    }
    if (c == '+' || c == '-') {  // leading sign of the first term
      sign = (c == '-') ? -sign : sign;
      ++i;
      continue;
    }
    Rat coeff(1);
    bool saw_coeff = false;
    if (c >= '0' && c <= '9') {
      coeff = detail::scan_rational(text, i);
      saw_coeff = true;
    }
    Rat expo(0);
    bool saw_t = false;
    std::size_t save = i;
    detail::skip_ws(text, i);
    if (saw_coeff && i < text.size() && text[i] == '*') {
      ++i;
      detail::skip_ws(text, i);
      if (i >= text.size() || text[i] != 't') throw parse_error("expected 't' after '*'");
    }
    if (i < text.size() && text[i] == 't') {
      saw_t = true;
      ++i;
      expo = Rat(1);
      if (i < text.size() && text[i] == '^') {
        ++i;
        expo = detail::scan_exponent(text, i);
      }
    } else if (!saw_coeff) {
      throw parse_error(std::string("unexpected character '") + text[save < text.size() ? save : text.size() - 1] +
                        "' in scalar text");
    } else {
      i = save;
    }
    (void)saw_t;
    if (!(expo * Rat(ramification)).is_integer()) {
      throw parse_error("exponent " + expo.to_string() + " is off the declared ramification grid 1/" +
                        std::to_string(ramification));
    }
    Rat signed_coeff = (sign < 0) ? -coeff : coeff;
    acc += Puiseux<K>::monomial(res_from_rat_like(proto, signed_coeff), expo, proto, ramification);
    sign = +1;
    expect_term = false;
  }
  if (expect_term) throw parse_error("scalar text ends with a dangling sign");
  return acc;
}

template <typename K>
std::ostream& operator<<(std::ostream& os, const Puiseux<K>& x) {
  return os << x.to_string();
}

// ---------------------------------------------------------------------------
// Generic scalar interface.  Code over an abstract valued field is written
// against these free functions; each concrete backend provides overloads.
// ---------------------------------------------------------------------------

template <typename K>
struct ScalarTraits;

template <typename K>
struct ScalarTraits<Puiseux<K>> {
  using Residue = K;
};

template <typename K>
Ord scalar_ord(const Puiseux<K>& x) { return x.ord(); }

template <typename K>
bool scalar_is_zero(const Puiseux<K>& x) { return x.is_zero(); }

template <typename K>
Puiseux<K> scalar_zero_like(const Puiseux<K>& proto) {
  return Puiseux<K>(proto.proto(), proto.ramification());
}

template <typename K>
Puiseux<K> scalar_one_like(const Puiseux<K>& proto) {
  return Puiseux<K>::from_long(1, proto.proto(), proto.ramification());
}

template <typename K>
Puiseux<K> scalar_from_long_like(const Puiseux<K>& proto, long v) {
  return Puiseux<K>::from_long(v, proto.proto(), proto.ramification());
}

/** Multiply by uniformizer^e. */
template <typename K>
Puiseux<K> scalar_shift(const Puiseux<K>& x, const Rat& e) { return x.shifted(e); }

/** Smallest exponent step expressible in the backend (1/N), as a Rat. */
template <typename K>
Rat scalar_grid_step(const Puiseux<K>& proto) { return Rat(1, proto.ramification()); }

template <typename K>
Puiseux<K> scalar_truncate(const Puiseux<K>& x, const Rat& P) { return x.truncate_before(P); }

/** Whether truncation is a real operation (series backend) or a no-op. */
template <typename K>
bool scalar_is_truncating(const Puiseux<K>&) { return true; }

template <typename K>
Puiseux<K> scalar_inverse_mod(const Puiseux<K>& x, const Rat& P) { return x.inverse_mod(P); }

template <typename K>
Puiseux<K> scalar_exact_div(const Puiseux<K>& a, const Puiseux<K>& b) { return a.exact_div(b); }

template <typename K>
K scalar_reduce_at_zero(const Puiseux<K>& x) { return x.reduce_at_zero(); }

/** Constant lift of a residue-field element. */
template <typename K>
Puiseux<K> scalar_lift_residue(const Puiseux<K>& proto, const K& r) {
  return Puiseux<K>::constant(r, proto.ramification());
}

template <typename K>
std::string scalar_to_string(const Puiseux<K>& x) { return x.to_string(); }

template <typename K>
Puiseux<K> scalar_parse(const Puiseux<K>& proto, const std::string& text) {
  return parse_puiseux<K>(text, proto.proto(), proto.ramification());
}

}  // namespace berkres

#endif  // BERKRES_PUISEUX_HPP
