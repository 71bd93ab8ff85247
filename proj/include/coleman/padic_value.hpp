#pragma once

#include <gmpxx.h>

#include <string>

namespace coleman {

// mantissa / p^shift, known modulo p^abs_prec.
struct PadicValue {
  mpz_class mantissa;
  long shift = 0;
  long abs_prec = 0;

  // Builds the value of an integer x with valuation at least -shift after
  // division by p^shift, normalizing so that p does not divide the mantissa
  // while shift > 0.
  static PadicValue make(const mpz_class& numerator, long shift, long abs_prec, const mpz_class& p);

  bool is_zero() const { return sgn(mantissa) == 0; }
  std::string to_string(const mpz_class& p) const;
};

PadicValue negate(const PadicValue& a, const mpz_class& p);
PadicValue add(const PadicValue& a, const PadicValue& b, const mpz_class& p);
PadicValue sub(const PadicValue& a, const PadicValue& b, const mpz_class& p);
PadicValue scale(const PadicValue& a, const mpq_class& c, const mpz_class& p);
PadicValue with_precision(const PadicValue& a, long abs_prec, const mpz_class& p);

// Equal modulo p^min(abs_prec).
bool congruent(const PadicValue& a, const PadicValue& b, const mpz_class& p);

}  // namespace coleman
