/**
 * @file rational.hpp
 * @brief Exact rational numbers (GMP-backed) and valuation values.
 *
 * `Rat` is an immutable-style arbitrary-precision rational with canonical
 * representation. `Ord` is the value of a valuation: either a rational or
 * +infinity (the valuation of 0). +infinity is a distinguished value, never
 * a numeric sentinel.
 */
#ifndef BERKRES_RATIONAL_HPP
#define BERKRES_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace berkres {

/** Error thrown when a textual scalar/number cannot be parsed. */
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/** Exact rational number with canonical (reduced, positive-denominator) form. */
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design for ergonomic arithmetic
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  /** Parse "p" or "p/q" with optional leading sign. Throws parse_error. */
  static Rat from_string(std::string_view s) {
    if (s.empty()) throw parse_error("empty rational literal");
    std::string buf(s);
    const auto slash = buf.find('/');
    try {
      if (slash == std::string::npos) {
        mpz_class num(buf, 10);
        return Rat(mpq_class(num));
      }
      const std::string ns = buf.substr(0, slash);
      const std::string ds = buf.substr(slash + 1);
      if (ns.empty() || ds.empty()) throw parse_error("malformed rational: " + buf);
      mpz_class num(ns, 10), den(ds, 10);
      if (den == 0) throw parse_error("zero denominator: " + buf);
      mpq_class q(num, den);
      q.canonicalize();
      return Rat(q);
    } catch (const std::invalid_argument&) {
      throw parse_error("malformed rational: " + buf);
    }
  }

  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  /** Largest integer <= this, as a Rat. */
  Rat floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return Rat(q);
  }

  /** Fractional part in [0,1). */
  Rat frac() const { return *this - floor(); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  Rat abs() const { return sign() < 0 ? -*this : *this; }

  Rat pow(long e) const {
    if (e == 0) return Rat(1);
    if (is_zero()) {
      if (e < 0) throw std::domain_error("Rat: 0^negative");
      return Rat(0);
    }
    mpz_class n = v_.get_num(), d = v_.get_den();
    const unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class np, dp;
    mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), a);
    mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), a);
    mpq_class q = (e > 0) ? mpq_class(np, dp) : mpq_class(dp, np);
    q.canonicalize();
    return Rat(q);
  }

  /** Render as "p" (integer) or "p/q". */
  std::string to_string() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.to_string();
  }

 private:
  mpq_class v_;
};

inline Rat rat_min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

/**
 * Valuation value: a rational, or +infinity (valuation of the zero element).
 * +infinity absorbs addition and wins every max/min comparison as expected.
 */
class Ord {
 public:
  Ord() : finite_(true), v_(0) {}
  Ord(Rat v) : finite_(true), v_(std::move(v)) {}  // NOLINT: implicit by design
  Ord(long v) : finite_(true), v_(v) {}            // NOLINT

  static Ord infinity() {
    Ord o;
    o.finite_ = false;
    return o;
  }

  bool is_infinite() const { return !finite_; }

  /** The rational value; throws if infinite. */
  const Rat& value() const {
    if (!finite_) throw std::domain_error("Ord: value() of +infinity");
    return v_;
  }

  friend bool operator==(const Ord& a, const Ord& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.v_ == b.v_;
  }
  friend bool operator!=(const Ord& a, const Ord& b) { return !(a == b); }
  friend bool operator<(const Ord& a, const Ord& b) {
    if (!a.finite_) return false;          // +inf < x is never true
    if (!b.finite_) return true;           // finite < +inf
    return a.v_ < b.v_;
  }
  friend bool operator<=(const Ord& a, const Ord& b) { return a < b || a == b; }
  friend bool operator>(const Ord& a, const Ord& b) { return b < a; }
  friend bool operator>=(const Ord& a, const Ord& b) { return b <= a; }

  friend Ord operator+(const Ord& a, const Ord& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return Ord(a.v_ + b.v_);
  }

  std::string to_string() const { return finite_ ? v_.to_string() : "+inf"; }

  friend std::ostream& operator<<(std::ostream& os, const Ord& o) {
    return os << o.to_string();
  }

 private:
  bool finite_;
  Rat v_;
};

inline Ord ord_min(const Ord& a, const Ord& b) { return a <= b ? a : b; }

/** lcm of two positive longs (ramification indices stay desk-scale). */
inline long lcm_long(long a, long b) {
  return a / std::gcd(a, b) * b;
}

}  // namespace berkres

#endif  // BERKRES_RATIONAL_HPP
