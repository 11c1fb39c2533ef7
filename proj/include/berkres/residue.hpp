/**
 * @file residue.hpp
 * @brief Residue fields (exact rationals, prime fields F_p) and univariate
 *        polynomial algebra over them.
 *
 * Two residue coefficient types share one informal interface:
 *   - `Rat`  : the field Q (characteristic 0),
 *   - `Fp`   : the field F_p, p >= 5 prime (element carries its modulus).
 *
 * Free functions (res_*) provide the shared operations generic code needs:
 * zero/one/integer embedding "like" a sample element, inversion, equality,
 * formatting, and a deterministic total order used for stable output.
 *
 * `RPoly<K>` is a dense univariate polynomial over such a field with exact
 * arithmetic: division with remainder, gcd, squarefree decomposition (both
 * characteristics), and root location. Root location over Q uses the
 * rational-root theorem with trial-division factoring; when factoring hits
 * the desk-scale bound the result is flagged incomplete rather than wrong —
 * callers treat unlocated factors conservatively.
 */
#ifndef BERKRES_RESIDUE_HPP
#define BERKRES_RESIDUE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "berkres/rational.hpp"

namespace berkres {

/** Error for parameters outside the supported desk-scale range. */
class unsupported_parameter : public std::runtime_error {
 public:
  explicit unsupported_parameter(const std::string& what)
      : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// F_p elements
// ---------------------------------------------------------------------------

/** Largest supported prime modulus (root finding enumerates the field). */
inline constexpr std::uint64_t kMaxResiduePrime = 65536;

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/**
 * Validate a residue characteristic at field-construction time.  The
 * supported envelope is primes p >= 5 up to the enumeration bound; element
 * arithmetic itself does not re-check (it is on hot paths).
 */
inline void require_prime_modulus(std::uint64_t p) {
  if (!is_prime_u64(p)) throw unsupported_parameter("residue characteristic must be prime");
  if (p < 5) throw unsupported_parameter("residue characteristics 2 and 3 are outside the supported range");
  if (p > kMaxResiduePrime) throw unsupported_parameter("residue prime above enumeration bound");
}

/** Element of F_p. Carries its modulus; mixed-modulus arithmetic throws. */
class Fp {
 public:
  Fp() : v_(0), p_(0) {}
  Fp(std::uint64_t v, std::uint64_t p) : v_(v % p), p_(p) {}

  static Fp from_long(long n, std::uint64_t p) {
    long r = n % static_cast<long>(p);
    if (r < 0) r += static_cast<long>(p);
    return Fp(static_cast<std::uint64_t>(r), p);
  }

  std::uint64_t value() const { return v_; }
  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    a.check(b);
    return Fp((a.v_ + b.v_) % a.p_, a.p_);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    a.check(b);
    return Fp((a.v_ + a.p_ - b.v_) % a.p_, a.p_);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    a.check(b);
    return Fp((static_cast<unsigned __int128>(a.v_) * b.v_) % a.p_, a.p_);
  }
  Fp operator-() const { return Fp((p_ - v_) % p_, p_); }

  Fp inv() const {
    if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
    // Extended Euclid on (v, p).
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), newr = static_cast<std::int64_t>(v_);
    while (newr != 0) {
      const std::int64_t q = r / newr;
      std::swap(t -= q * newt, newt);
      std::swap(r -= q * newr, newr);
    }
    if (t < 0) t += static_cast<std::int64_t>(p_);
    return Fp(static_cast<std::uint64_t>(t), p_);
  }

  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }
  friend bool operator==(const Fp& a, const Fp& b) {
    a.check(b);
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  std::string to_string() const { return std::to_string(v_); }

 private:
  void check(const Fp& o) const {
    if (p_ != o.p_) throw std::logic_error("Fp: mixed moduli");
  }
  std::uint64_t v_;
  std::uint64_t p_;
};

// ---------------------------------------------------------------------------
// Shared residue-field operations (overload set)
// ---------------------------------------------------------------------------

inline Rat res_zero_like(const Rat&) { return Rat(0); }
inline Rat res_one_like(const Rat&) { return Rat(1); }
inline Rat res_from_long_like(const Rat&, long n) { return Rat(n); }
inline bool res_is_zero(const Rat& x) { return x.is_zero(); }
inline Rat res_inv(const Rat& x) { return Rat(1) / x; }
inline std::string res_to_string(const Rat& x) { return x.to_string(); }
/** Number of field elements reachable by res_from_long_like (Q: unbounded). */
inline std::optional<std::uint64_t> res_field_size(const Rat&) { return std::nullopt; }
/** Deterministic sort key for stable report output. */
inline bool res_order_less(const Rat& a, const Rat& b) { return a < b; }

inline Fp res_zero_like(const Fp& x) { return Fp(0, x.modulus()); }
inline Fp res_one_like(const Fp& x) { return Fp(1, x.modulus()); }
inline Fp res_from_long_like(const Fp& x, long n) { return Fp::from_long(n, x.modulus()); }
inline bool res_is_zero(const Fp& x) { return x.is_zero(); }
inline Fp res_inv(const Fp& x) { return x.inv(); }
inline std::string res_to_string(const Fp& x) { return x.to_string(); }
inline std::optional<std::uint64_t> res_field_size(const Fp& x) { return x.modulus(); }
inline bool res_order_less(const Fp& a, const Fp& b) { return a.value() < b.value(); }

inline bool res_is_negative(const Rat& x) { return x.sign() < 0; }
inline bool res_is_negative(const Fp&) { return false; }
inline Rat res_abs(const Rat& x) { return x.abs(); }
inline Fp res_abs(const Fp& x) { return x; }

/** Embed a rational literal into the field (F_p: via mod-p division). */
inline Rat res_from_rat_like(const Rat&, const Rat& q) { return q; }
inline Fp res_from_rat_like(const Fp& x, const Rat& q) {
  const std::uint64_t p = x.modulus();
  const mpz_class pn(static_cast<unsigned long>(p));
  mpz_class num = q.num() % pn, den = q.den() % pn;
  if (den == 0)
    throw parse_error("rational literal has denominator divisible by the residue characteristic");
  if (num < 0) num += pn;
  const Fp fn(num.get_ui(), p), fd(den.get_ui(), p);
  return fn / fd;
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a residue field
// ---------------------------------------------------------------------------

/**
 * Dense univariate polynomial over residue field K (ascending coefficients).
 * Always carries a prototype zero element so the field parameters survive
 * even for the zero polynomial.
 */
template <class K>
class RPoly {
 public:
  explicit RPoly(K proto) : proto_(res_zero_like(proto)) {}
  RPoly(K proto, std::vector<K> coeffs)
      : proto_(res_zero_like(proto)), c_(std::move(coeffs)) {
    trim();
  }

  static RPoly zero(const K& proto) { return RPoly(proto); }
  static RPoly constant(const K& value) {
    RPoly r(value);
    if (!res_is_zero(value)) r.c_ = {value};
    return r;
  }
  /** The monomial c * x^e. */
  static RPoly monomial(const K& c, std::size_t e) {
    RPoly r(c);
    if (!res_is_zero(c)) {
      r.c_.assign(e + 1, res_zero_like(c));
      r.c_[e] = c;
    }
    return r;
  }

  const K& proto() const { return proto_; }
  bool is_zero() const { return c_.empty(); }
  /** Degree; the zero polynomial reports is_zero() and degree 0 by convention. */
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<K>& coeffs() const { return c_; }

  K coeff(std::size_t i) const { return i < c_.size() ? c_[i] : proto_; }
  K leading() const {
    if (c_.empty()) throw std::domain_error("RPoly: leading of zero");
    return c_.back();
  }

  bool is_constant() const { return c_.size() <= 1; }

  K eval(const K& x) const {
    K acc = proto_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  friend RPoly operator+(const RPoly& a, const RPoly& b) {
    RPoly r(a.proto_);
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), a.proto_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
    r.trim();
    return r;
  }
  friend RPoly operator-(const RPoly& a, const RPoly& b) {
    RPoly r(a.proto_);
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), a.proto_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) - b.coeff(i);
    r.trim();
    return r;
  }
  friend RPoly operator*(const RPoly& a, const RPoly& b) {
    RPoly r(a.proto_);
    if (a.is_zero() || b.is_zero()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, a.proto_);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    r.trim();
    return r;
  }
  RPoly scaled(const K& s) const {
    RPoly r(proto_);
    if (res_is_zero(s)) return r;
    r.c_ = c_;
    for (auto& x : r.c_) x = x * s;
    r.trim();
    return r;
  }
  friend bool operator==(const RPoly& a, const RPoly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const RPoly& a, const RPoly& b) { return !(a == b); }

  /** Multiply by x^e. */
  RPoly shifted(std::size_t e) const {
    if (is_zero() || e == 0) return *this;
    RPoly r(proto_);
    r.c_.assign(c_.size() + e, proto_);
    std::copy(c_.begin(), c_.end(), r.c_.begin() + static_cast<long>(e));
    return r;
  }

  /** Euclidean division; returns {quotient, remainder}. */
  std::pair<RPoly, RPoly> divrem(const RPoly& d) const {
    if (d.is_zero()) throw std::domain_error("RPoly: division by zero poly");
    RPoly q(proto_), r = *this;
    const K lead_inv = res_inv(d.leading());
    while (!r.is_zero() && r.degree() >= d.degree()) {
      const std::size_t e = r.degree() - d.degree();
      const K c = r.leading() * lead_inv;
      q = q + RPoly::monomial(c, e);
      r = r - d.scaled(c).shifted(e);
    }
    return {q, r};
  }

  /** Exact division; throws std::logic_error if not divisible. */
  RPoly exact_div(const RPoly& d) const {
    auto [q, r] = divrem(d);
    if (!r.is_zero()) throw std::logic_error("RPoly: inexact division");
    return q;
  }

  RPoly derivative() const {
    RPoly r(proto_);
    if (c_.size() <= 1) return r;
    r.c_.resize(c_.size() - 1, proto_);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r.c_[i - 1] = c_[i] * res_from_long_like(proto_, static_cast<long>(i));
    r.trim();
    return r;
  }

  /** Leading coefficient scaled to 1 (zero polynomial unchanged). */
  RPoly monic() const {
    if (is_zero()) return *this;
    return scaled(res_inv(leading()));
  }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (res_is_zero(c_[i])) continue;
      if (!out.empty()) out += " + ";
      std::string cs = res_to_string(c_[i]);
      if (i == 0) {
        out += cs;
      } else {
        if (cs != "1") out += cs + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && res_is_zero(c_.back())) c_.pop_back();
  }
  K proto_;
  std::vector<K> c_;
};

/** Monic gcd over a field. gcd(0,0) = 0. */
template <class K>
RPoly<K> rpoly_gcd(RPoly<K> a, RPoly<K> b) {
  while (!b.is_zero()) {
    auto r = a.divrem(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class K>
RPoly<K> rpoly_pow(const RPoly<K>& base, unsigned long e) {
  RPoly<K> acc = RPoly<K>::constant(res_one_like(base.proto()));
  RPoly<K> b = base;
  while (e) {
    if (e & 1) acc = acc * b;
    b = b * b;
    e >>= 1;
  }
  return acc;
}

/** Field characteristic as seen by a sample element (0 for Q). */
inline std::uint64_t res_char(const Rat&) { return 0; }
inline std::uint64_t res_char(const Fp& x) { return x.modulus(); }

namespace detail {

/** p-th root of a polynomial in x^p over the prime field F_p (c^p = c). */
template <class K>
RPoly<K> pth_root(const RPoly<K>& g, std::uint64_t p) {
  std::vector<K> rc;
  for (std::size_t i = 0; i <= g.degree(); i += p) rc.push_back(g.coeff(i));
  return RPoly<K>(g.proto(), std::move(rc));
}

template <class K>
void sfd_rec(const RPoly<K>& f_monic, unsigned long outer,
             std::vector<std::pair<RPoly<K>, unsigned long>>& out) {
  const std::uint64_t p = res_char(f_monic.proto());
  if (f_monic.is_constant()) return;
  RPoly<K> fp = f_monic.derivative();
  if (fp.is_zero()) {
    // Entirely a p-th power: recurse on the root with multiplicity * p.
    if (p == 0) throw std::logic_error("zero derivative in characteristic 0");
    sfd_rec(pth_root(f_monic, p), outer * p, out);
    return;
  }
  RPoly<K> a = rpoly_gcd(f_monic, fp);   // carries multiplicity >= 2 parts
  RPoly<K> w = f_monic.exact_div(a);     // product of parts with p ∤ mult
  unsigned long i = 1;
  while (!w.is_constant()) {
    RPoly<K> y = rpoly_gcd(w, a);
    RPoly<K> part = w.exact_div(y);
    if (!part.is_constant()) out.emplace_back(part.monic(), outer * i);
    w = std::move(y);
    a = a.exact_div(w);
    ++i;
  }
  if (!a.is_constant()) {
    // Residual p-th power block (multiplicities divisible by p).
    if (p == 0) throw std::logic_error("residual power block in characteristic 0");
    sfd_rec(pth_root(a.monic(), p), outer * p, out);
  }
}

}  // namespace detail

/**
 * Squarefree decomposition: f/lc = prod_i part_i ^ mult_i with the parts
 * squarefree, pairwise coprime, and monic. Works in characteristic 0 and
 * characteristic p >= 5 (vanishing derivatives handled via p-th roots; over
 * the prime field the p-th root of a polynomial in x^p keeps coefficients).
 */
template <class K>
std::vector<std::pair<RPoly<K>, unsigned long>> squarefree_decomposition(
    const RPoly<K>& f_in) {
  std::vector<std::pair<RPoly<K>, unsigned long>> out;
  if (f_in.is_zero() || f_in.is_constant()) return out;
  detail::sfd_rec(f_in.monic(), 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// Root location
// ---------------------------------------------------------------------------

/** Result of locating the roots of a polynomial inside the base field. */
template <class K>
struct RootReport {
  std::vector<std::pair<K, unsigned long>> roots;  // (root, multiplicity)
  RPoly<K> rootless;      // cofactor with no located roots (monic)
  bool complete = true;   // true when rootless provably has no roots in K
};

namespace detail {

/** Trial-division factorization; bound keeps this desk-scale. Returns prime
 *  power list plus the unfactored cofactor (1 when fully factored). */
inline std::pair<std::vector<std::pair<mpz_class, unsigned long>>, mpz_class>
trial_factor(mpz_class n, unsigned long bound = 1000000) {
  std::vector<std::pair<mpz_class, unsigned long>> pf;
  if (n < 0) n = -n;
  if (n <= 1) return {pf, mpz_class(1)};
  for (unsigned long d = 2; d <= bound; ++d) {
    if (mpz_cmp_ui(n.get_mpz_t(), d) < 0) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      unsigned long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
        ++e;
      }
      pf.emplace_back(mpz_class(d), e);
    }
    // Early exit once d^2 exceeds the remainder: it is prime.
    if (mpz_class(d) * d > n && n > 1) {
      pf.emplace_back(n, 1);
      n = 1;
      break;
    }
  }
  if (n > 1 && n <= bound * mpz_class(bound)) {
    // Leftover below bound^2 with no factor <= bound must be prime.
    pf.emplace_back(n, 1);
    n = 1;
  }
  return {pf, n};
}

/** All positive divisors from a prime-power list, capped for safety. */
inline bool enumerate_divisors(const std::vector<std::pair<mpz_class, unsigned long>>& pf,
                               std::vector<mpz_class>& out,
                               std::size_t cap = 100000) {
  out.assign(1, mpz_class(1));
  for (const auto& [p, e] : pf) {
    const std::size_t base = out.size();
    if (base * (e + 1) > cap) return false;
    mpz_class pk = 1;
    for (unsigned long k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return true;
}

}  // namespace detail

/**
 * Locate rational roots of f over Q (rational-root theorem). Multiplicities
 * extracted exactly. `complete` is false only if divisor enumeration hit the
 * desk-scale factoring bound, in which case unlocated rational roots may
 * remain inside `rootless` (callers must treat that factor conservatively).
 */
inline RootReport<Rat> locate_roots(const RPoly<Rat>& f_in) {
  RootReport<Rat> rep{{}, f_in.monic(), true};
  if (f_in.is_zero() || f_in.is_constant()) return rep;

  RPoly<Rat> f = f_in.monic();

  // Root at zero first.
  unsigned long zero_mult = 0;
  while (!f.is_zero() && f.coeff(0).is_zero() && !f.is_constant()) {
    std::vector<Rat> shifted(f.coeffs().begin() + 1, f.coeffs().end());
    f = RPoly<Rat>(f.proto(), std::move(shifted));
    ++zero_mult;
  }
  if (zero_mult > 0) rep.roots.emplace_back(Rat(0), zero_mult);
  if (f.is_constant()) {
    rep.rootless = RPoly<Rat>::constant(Rat(1));
    return rep;
  }

  // Clear denominators to get an integer polynomial.
  mpz_class den_lcm = 1;
  for (const auto& c : f.coeffs())
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
  std::vector<mpz_class> ic;
  ic.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) ic.push_back(c.num() * (den_lcm / c.den()));

  const mpz_class a0 = ic.front();
  const mpz_class ad = ic.back();
  auto [pf0, cof0] = detail::trial_factor(a0);
  auto [pfd, cofd] = detail::trial_factor(ad);
  if (cof0 != 1) pf0.emplace_back(cof0, 1);
  if (cofd != 1) pfd.emplace_back(cofd, 1);

  std::vector<mpz_class> num_divs, den_divs;
  bool ok = detail::enumerate_divisors(pf0, num_divs) &&
            detail::enumerate_divisors(pfd, den_divs);
  // Incomplete when a cofactor survived (its internal divisors are unknown)
  // or the divisor list was capped.
  if (!ok || cof0 != 1 || cofd != 1) rep.complete = false;

  if (ok && num_divs.size() * den_divs.size() > 200000) {
    ok = false;
    rep.complete = false;
  }
  std::vector<Rat> candidates;
  if (ok) {
    for (const auto& u : num_divs)
      for (const auto& w : den_divs) {
        mpq_class q(u, w);
        q.canonicalize();
        candidates.push_back(Rat(q));
        candidates.push_back(Rat(mpq_class(-q)));
      }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
  }

  for (const auto& r : candidates) {
    if (f.is_constant()) break;
    if (!f.eval(r).is_zero()) continue;
    unsigned long mult = 0;
    const RPoly<Rat> lin(f.proto(), {-r, Rat(1)});
    while (!f.is_constant() && f.eval(r).is_zero()) {
      f = f.exact_div(lin);
      ++mult;
    }
    rep.roots.emplace_back(r, mult);
  }

  rep.rootless = f.monic();
  if (rep.rootless.degree() == 1) {
    // A residual linear factor is always a root; extract it.
    const Rat r = -rep.rootless.coeff(0);
    rep.roots.emplace_back(r, 1);
    rep.rootless = RPoly<Rat>::constant(Rat(1));
  }
  std::sort(rep.roots.begin(), rep.roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return rep;
}

/** Locate roots over F_p by scanning the field (p is capped, see Fp). */
inline RootReport<Fp> locate_roots(const RPoly<Fp>& f_in) {
  RootReport<Fp> rep{{}, f_in.monic(), true};
  if (f_in.is_zero() || f_in.is_constant()) return rep;
  const std::uint64_t p = f_in.proto().modulus();
  if (p > kMaxResiduePrime)
    throw unsupported_parameter("residue prime above enumeration bound");
  RPoly<Fp> f = f_in.monic();
  for (std::uint64_t v = 0; v < p && !f.is_constant(); ++v) {
    const Fp r(v, p);
    if (!f.eval(r).is_zero()) continue;
    unsigned long mult = 0;
    const RPoly<Fp> lin(f.proto(), {-r, Fp(1, p)});
    while (!f.is_constant() && f.eval(r).is_zero()) {
      f = f.exact_div(lin);
      ++mult;
    }
    rep.roots.emplace_back(r, mult);
  }
  rep.rootless = f.monic();
  // Complete by construction: every field element was tested.
  return rep;
}

}  // namespace berkres

#endif  // BERKRES_RESIDUE_HPP
