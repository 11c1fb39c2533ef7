#ifndef BERKRES_PADIC_HPP
#define BERKRES_PADIC_HPP

/**
 * @file padic.hpp
 *
 * The rational numbers viewed inside Q_p: exact arithmetic on Q with the
 * p-adic valuation ord = v_p and residue field F_p.  Arithmetic is exact,
 * so there is no truncation and no certification story — the series
 * backend's precision machinery degenerates to no-ops here.
 *
 * This backend is unramified: the value group is Z, and any operation that
 * would require p^e with fractional e reports unsupported_parameter rather
 * than silently approximating.
 */

#include <string>

#include "berkres/puiseux.hpp"
#include "berkres/rational.hpp"
#include "berkres/residue.hpp"

namespace berkres {

class Padic {
 public:
  Padic(const Rat& value, std::uint64_t prime) : value_(value), prime_(prime) {
    require_prime_modulus(prime_);
  }

  static Padic from_long(long v, std::uint64_t prime) { return Padic(Rat(v), prime); }

  const Rat& value() const { return value_; }
  std::uint64_t prime() const { return prime_; }
  bool is_zero() const { return value_.is_zero(); }

  /** v_p of the value; +inf for zero. */
  Ord ord() const {
    if (value_.is_zero()) return Ord::infinity();
    const mpz_class p(static_cast<unsigned long>(prime_));
    mpz_class tmp;
    const long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), value_.num().get_mpz_t(), p.get_mpz_t()));
    const long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), value_.den().get_mpz_t(), p.get_mpz_t()));
    return Ord(Rat(vn - vd));
  }

  /** Image in F_p; requires ord >= 0. */
  Fp reduce_at_zero() const {
    if (value_.is_zero()) return Fp(0, prime_);
    if (ord() < Ord(Rat(0))) throw std::domain_error("reduction of a non-integral p-adic scalar");
    const mpz_class p(static_cast<unsigned long>(prime_));
    mpz_class num = value_.num() % p, den = value_.den() % p;
    if (num < 0) num += p;
    if (den < 0) den += p;
    return Fp(num.get_ui(), prime_) / Fp(den.get_ui(), prime_);
  }

  /** Multiply by p^e; e must be an integer (this backend is unramified). */
  Padic shifted(const Rat& e) const {
    if (!e.is_integer())
      throw unsupported_parameter("fractional powers of p are outside the unramified p-adic backend");
    Rat pw = Rat(static_cast<long>(prime_)).pow(e.num().get_si());
    return Padic(value_ * pw, prime_);
  }

  Padic pow(unsigned long n) const {
    Rat r(1);
    Rat b = value_;
    unsigned long m = n;
    while (m) {
      if (m & 1UL) r = r * b;
      b = (m >>= 1UL) ? b * b : b;
    }
    return Padic(r, prime_);
  }

  friend Padic operator+(const Padic& a, const Padic& b) { return Padic(a.value_ + b.match(a), a.prime_); }
  friend Padic operator-(const Padic& a, const Padic& b) { return Padic(a.value_ - b.match(a), a.prime_); }
  friend Padic operator*(const Padic& a, const Padic& b) { return Padic(a.value_ * b.match(a), a.prime_); }
  Padic operator-() const { return Padic(-value_, prime_); }
  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }
  friend bool operator==(const Padic& a, const Padic& b) {
    return a.prime_ == b.prime_ && a.value_ == b.value_;
  }
  friend bool operator!=(const Padic& a, const Padic& b) { return !(a == b); }

  std::string to_string() const { return value_.to_string(); }

 private:
  Rat match(const Padic& other) const {
    if (prime_ != other.prime_) throw std::logic_error("mixed p-adic bases in arithmetic");
    return value_;
  }

  Rat value_;
  std::uint64_t prime_;
};

inline std::ostream& operator<<(std::ostream& os, const Padic& x) { return os << x.to_string(); }

template <>
struct ScalarTraits<Padic> {
  using Residue = Fp;
};

inline Ord scalar_ord(const Padic& x) { return x.ord(); }
inline bool scalar_is_zero(const Padic& x) { return x.is_zero(); }
inline Padic scalar_zero_like(const Padic& proto) { return Padic(Rat(0), proto.prime()); }
inline Padic scalar_one_like(const Padic& proto) { return Padic(Rat(1), proto.prime()); }
inline Padic scalar_from_long_like(const Padic& proto, long v) { return Padic(Rat(v), proto.prime()); }
inline Padic scalar_shift(const Padic& x, const Rat& e) { return x.shifted(e); }
inline Rat scalar_grid_step(const Padic&) { return Rat(1); }
inline Padic scalar_truncate(const Padic& x, const Rat&) { return x; }
inline bool scalar_is_truncating(const Padic&) { return false; }
inline Padic scalar_inverse_mod(const Padic& x, const Rat&) {
  if (x.is_zero()) throw std::domain_error("inverse of zero element");
  return Padic(Rat(1) / x.value(), x.prime());
}
inline Padic scalar_exact_div(const Padic& a, const Padic& b) {
  if (b.is_zero()) throw std::domain_error("division by zero element");
  return Padic(a.value() / b.value(), a.prime());
}
inline Fp scalar_reduce_at_zero(const Padic& x) { return x.reduce_at_zero(); }
inline Padic scalar_lift_residue(const Padic& proto, const Fp& r) {
  return Padic(Rat(static_cast<long>(r.value())), proto.prime());
}
inline std::string scalar_to_string(const Padic& x) { return x.to_string(); }

/**
 * Parse p-adic scalar text with the shared grammar, the uniformizer letter
 * `t` standing for the prime itself.  Exponents must be integers.
 */
inline Padic scalar_parse(const Padic& proto, const std::string& text) {
  Puiseux<Rat> formal = parse_puiseux<Rat>(text, Rat(0), 1);
  Rat total(0);
  const Rat p(static_cast<long>(proto.prime()));
  for (const auto& [e, c] : formal.terms()) {
    if (!e.is_integer())
      throw unsupported_parameter("fractional powers of p are outside the unramified p-adic backend");
    total = total + c * p.pow(e.num().get_si());
  }
  return Padic(total, proto.prime());
}

}  // namespace berkres

#endif  // BERKRES_PADIC_HPP
