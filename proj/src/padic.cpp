#include "coleman/padic.hpp"

#include <algorithm>
#include <stdexcept>

#include "coleman/padic_value.hpp"

namespace coleman {

bool is_probable_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

PrimeContext::PrimeContext(const mpz_class& prime, int precision)
    : p(prime), N(precision), W(precision + 1) {
  if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_probable_prime(p))
    throw InvalidCurve("p = " + p.get_str() + " is not an odd prime");
  if (N < 1) throw InvalidCurve("precision N must be at least 1");
  mpz_pow_ui(modulus.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(W));
}

int valuation_mpz(const mpz_class& x, const mpz_class& p, int cap) {
  if (sgn(x) == 0) return cap;
  mpz_class t = x;
  int v = 0;
  while (v < cap && mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

namespace {

mpz_class ppow(const mpz_class& p, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? 0 : e));
  return r;
}

}  // namespace

PadicValue PadicValue::make(const mpz_class& numerator, long shift, long abs_prec, const mpz_class& p) {
  PadicValue v;
  v.shift = shift;
  v.abs_prec = abs_prec;
  mpz_class m = ppow(p, abs_prec + shift);
  mpz_mod(v.mantissa.get_mpz_t(), numerator.get_mpz_t(), m.get_mpz_t());
  while (v.shift > 0 && sgn(v.mantissa) != 0 && mpz_divisible_p(v.mantissa.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(v.mantissa.get_mpz_t(), v.mantissa.get_mpz_t(), p.get_mpz_t());
    --v.shift;
  }
  if (sgn(v.mantissa) == 0) v.shift = 0;
  return v;
}

std::string PadicValue::to_string(const mpz_class& p) const {
  std::string s = mantissa.get_str();
  if (shift > 0) s += "/" + p.get_str() + "^" + std::to_string(shift);
  return s + " + O(" + p.get_str() + "^" + std::to_string(abs_prec) + ")";
}

PadicValue negate(const PadicValue& a, const mpz_class& p) {
  return PadicValue::make(-a.mantissa, a.shift, a.abs_prec, p);
}

PadicValue add(const PadicValue& a, const PadicValue& b, const mpz_class& p) {
  long s = std::max(a.shift, b.shift);
  mpz_class x = a.mantissa * ppow(p, s - a.shift) + b.mantissa * ppow(p, s - b.shift);
  return PadicValue::make(x, s, std::min(a.abs_prec, b.abs_prec), p);
}

PadicValue sub(const PadicValue& a, const PadicValue& b, const mpz_class& p) { return add(a, negate(b, p), p); }

PadicValue scale(const PadicValue& a, const mpq_class& c, const mpz_class& p) {
  if (mpz_divisible_p(c.get_den().get_mpz_t(), p.get_mpz_t()))
    throw std::invalid_argument("PadicValue::scale: denominator divisible by p");
  mpz_class m = ppow(p, a.abs_prec + a.shift), inv;
  mpz_invert(inv.get_mpz_t(), c.get_den().get_mpz_t(), m.get_mpz_t());
  return PadicValue::make(a.mantissa * c.get_num() * inv, a.shift, a.abs_prec, p);
}

PadicValue with_precision(const PadicValue& a, long abs_prec, const mpz_class& p) {
  return PadicValue::make(a.mantissa, a.shift, std::min(abs_prec, a.abs_prec), p);
}

bool congruent(const PadicValue& a, const PadicValue& b, const mpz_class& p) { return sub(a, b, p).is_zero(); }

}  // namespace coleman
