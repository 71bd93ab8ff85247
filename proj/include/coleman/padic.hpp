#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coleman/errors.hpp"
#include "coleman/gmp_ring.hpp"
#include "coleman/mont_ring.hpp"

namespace coleman {

// p, target precision N and working exponent W = N + 1.
struct PrimeContext {
  mpz_class p;
  int N = 0;
  int W = 0;
  mpz_class modulus;  // p^W

  PrimeContext(const mpz_class& prime, int precision);
};

bool is_probable_prime(const mpz_class& n);

// v_p(x) capped at cap; x = 0 gives cap.
int valuation_mpz(const mpz_class& x, const mpz_class& p, int cap);

template <class R>
int valuation(const R& ring, const typename R::Elem& a) {
  return valuation_mpz(ring.to_mpz(a), ring.prime(), ring.exponent());
}

template <class R>
typename R::Elem invert_unit(const R& ring, const typename R::Elem& a) {
  mpz_class x = ring.to_mpz(a), r;
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), ring.modulus().get_mpz_t()) == 0)
    throw NonUnit("invert_unit: " + x.get_str() + " is not a unit mod " + ring.modulus().get_str());
  return ring.from_mpz(r);
}

// q with q*d = a mod p^W. For v(d) = 1 the quotient is only defined mod
// p^(W-1); the canonical representative in [0, p^(W-1)) is returned.
template <class R>
typename R::Elem divide_exact(const R& ring, const typename R::Elem& a, const typename R::Elem& d) {
  const int W = ring.exponent();
  mpz_class dz = ring.to_mpz(d);
  const int vd = valuation_mpz(dz, ring.prime(), W);
  if (vd == 0) return ring.mul(a, invert_unit(ring, d));
  if (vd >= 2) throw ExcessValuation("divide_exact: denominator has valuation " + std::to_string(vd));
  mpz_class az = ring.to_mpz(a);
  if (valuation_mpz(az, ring.prime(), W) < 1)
    throw InexactDivision("divide_exact: dividend not divisible by p");
  if (W == 1) return ring.zero();
  const mpz_class& p = ring.prime();
  mpz_class m1 = ring.modulus() / p;
  mpz_class a1 = az / p, d1 = dz / p, inv;
  mpz_invert(inv.get_mpz_t(), d1.get_mpz_t(), m1.get_mpz_t());
  mpz_class q = (a1 * inv) % m1;
  return ring.from_mpz(q);
}

template <class R>
typename R::Elem power(const R& ring, typename R::Elem base, mpz_class e) {
  typename R::Elem acc = ring.one();
  while (sgn(e) > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = ring.mul(acc, base);
    base = ring.mul(base, base);
    e >>= 1;
  }
  return acc;
}

// binom(-1/2, k) = (-1)^k (2k)! / (4^k (k!)^2)
template <class R>
typename R::Elem binomial_half(const R& ring, int k) {
  mpz_class num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= -(2 * i + 1);
    den *= 2 * (i + 1);
  }
  return ring.mul(ring.from_mpz(num), invert_unit(ring, ring.from_mpz(den)));
}

// Inverts every entry in place with a single modular inversion.
template <class R>
void batch_invert(const R& ring, std::span<typename R::Elem> xs) {
  if (xs.empty()) return;
  std::vector<typename R::Elem> prefix(xs.size());
  typename R::Elem acc = ring.one();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    acc = ring.mul(acc, xs[i]);
  }
  typename R::Elem inv = invert_unit(ring, acc);
  for (std::size_t i = xs.size(); i-- > 0;) {
    typename R::Elem xi = xs[i];
    xs[i] = ring.mul(inv, prefix[i]);
    inv = ring.mul(inv, xi);
  }
}

// Rational a/b reduced into the ring; b must be prime to p.
template <class R>
typename R::Elem from_rational(const R& ring, const mpq_class& x) {
  return ring.mul(ring.from_mpz(x.get_num()), invert_unit(ring, ring.from_mpz(x.get_den())));
}

enum class Backend { Auto, Gmp };

// Calls f(ring) with the fastest backend able to hold p^exponent.
template <class F>
decltype(auto) with_ring(const mpz_class& p, int exponent, F&& f, Backend backend = Backend::Auto) {
  mpz_class m;
  mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(exponent));
  const std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
  if (backend == Backend::Auto && mpz_odd_p(m.get_mpz_t())) {
    if (bits <= 62) return f(MontRing<1>(p, exponent));
    if (bits <= 126) return f(MontRing<2>(p, exponent));
    if (bits <= 254) return f(MontRing<4>(p, exponent));
    if (bits <= 510) return f(MontRing<8>(p, exponent));
  }
  return f(GmpRing(p, exponent));
}

}  // namespace coleman
