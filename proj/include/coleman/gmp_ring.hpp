#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>

#include "coleman/ntt.hpp"

namespace coleman {

// Z/p^e Z on GMP integers, residues kept in [0, p^e). Used for any modulus
// size and as the reference backend.
class GmpRing {
 public:
  using Elem = mpz_class;

  GmpRing(const mpz_class& p, int exponent) : p_(p), e_(exponent) {
    if (exponent < 1) throw std::invalid_argument("GmpRing: exponent must be >= 1");
    mpz_pow_ui(m_.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(exponent));
  }

  const mpz_class& prime() const { return p_; }
  int exponent() const { return e_; }
  const mpz_class& modulus() const { return m_; }
  std::size_t bits() const { return mpz_sizeinbase(m_.get_mpz_t(), 2); }

  Elem zero() const { return 0; }
  Elem one() const { return m_ == 1 ? mpz_class(0) : mpz_class(1); }

  Elem from_mpz(const mpz_class& x) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m_.get_mpz_t());
    return r;
  }
  Elem from_int(long x) const { return from_mpz(mpz_class(x)); }
  mpz_class to_mpz(const Elem& a) const { return a; }

  bool is_zero(const Elem& a) const { return sgn(a) == 0; }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r = a + b;
    if (r >= m_) r -= m_;
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r = a - b;
    if (sgn(r) < 0) r += m_;
    return r;
  }
  Elem neg(const Elem& a) const { return sgn(a) == 0 ? a : Elem(m_ - a); }
  Elem mul(const Elem& a, const Elem& b) const {
    Elem r;
    mpz_mul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_tdiv_r(r.get_mpz_t(), r.get_mpz_t(), m_.get_mpz_t());
    return r;
  }

  std::uint64_t residue_mod(const Elem& a, std::uint64_t q) const {
    return mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(q));
  }

  Elem from_mixed_radix(std::span<const std::uint64_t> digits) const {
    mpz_class acc = static_cast<unsigned long>(digits.back());
    for (std::size_t i = digits.size() - 1; i-- > 0;) {
      acc *= static_cast<unsigned long>(ntt::prime(i));
      acc += static_cast<unsigned long>(digits[i]);
    }
    return from_mpz(acc);
  }

 private:
  mpz_class p_;
  int e_;
  mpz_class m_;
};

}  // namespace coleman
