#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "coleman/ntt.hpp"

namespace coleman {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Z/p^e Z with residues held in Montgomery form over K 64-bit limbs.
// The modulus must be odd and below 2^(64K - 2).
template <std::size_t K>
class MontRing {
 public:
  using Elem = std::array<u64, K>;
  static constexpr std::size_t kLimbs = K;

  MontRing(const mpz_class& p, int exponent) : p_(p), e_(exponent) {
    if (exponent < 1) throw std::invalid_argument("MontRing: exponent must be >= 1");
    mpz_pow_ui(m_.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(exponent));
    if (mpz_even_p(m_.get_mpz_t())) throw std::invalid_argument("MontRing: modulus must be odd");
    if (mpz_sizeinbase(m_.get_mpz_t(), 2) > 64 * K - 2)
      throw std::invalid_argument("MontRing: modulus too large for limb count");
    mod_ = limbs_of(m_);
    // -m^{-1} mod 2^64 by Newton iteration
    u64 inv = mod_[0];
    for (int i = 0; i < 6; ++i) inv *= 2 - mod_[0] * inv;
    ninv_ = ~inv + 1;
    mpz_class r = mpz_class(1) << (64 * K);
    r1_ = limbs_of(r % m_);
    r2_ = limbs_of((r * r) % m_);
    plain_one_ = Elem{};
    plain_one_[0] = 1;
    crt_q_.reserve(ntt::kNumPrimes);
    for (std::size_t i = 0; i < ntt::kNumPrimes; ++i)
      crt_q_.push_back(from_mpz(mpz_class(static_cast<unsigned long>(ntt::prime(i)))));
  }

  const mpz_class& prime() const { return p_; }
  int exponent() const { return e_; }
  const mpz_class& modulus() const { return m_; }
  std::size_t bits() const { return mpz_sizeinbase(m_.get_mpz_t(), 2); }

  Elem zero() const { return Elem{}; }
  Elem one() const { return r1_; }

  Elem from_mpz(const mpz_class& x) const {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m_.get_mpz_t());
    return mont_mul(limbs_of(r), r2_);
  }
  Elem from_int(long x) const { return from_mpz(mpz_class(x)); }

  mpz_class to_mpz(const Elem& a) const {
    Elem plain = mont_mul(a, plain_one_);
    mpz_class r;
    mpz_import(r.get_mpz_t(), K, -1, sizeof(u64), 0, 0, plain.data());
    return r;
  }

  bool is_zero(const Elem& a) const {
    for (std::size_t i = 0; i < K; ++i)
      if (a[i]) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r;
    if constexpr (K == 1) {
      u64 s = a[0] + b[0];
      r[0] = s >= mod_[0] ? s - mod_[0] : s;
    } else {
      u64 carry = 0;
      for (std::size_t i = 0; i < K; ++i) {
        u128 s = static_cast<u128>(a[i]) + b[i] + carry;
        r[i] = static_cast<u64>(s);
        carry = static_cast<u64>(s >> 64);
      }
      if (carry || !less(r, mod_)) sub_in_place(r, mod_);
    }
    return r;
  }

  Elem sub(const Elem& a, const Elem& b) const {
    Elem r;
    if constexpr (K == 1) {
      r[0] = a[0] >= b[0] ? a[0] - b[0] : a[0] + (mod_[0] - b[0]);
    } else {
      u64 borrow = 0;
      for (std::size_t i = 0; i < K; ++i) {
        u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
        r[i] = static_cast<u64>(d);
        borrow = static_cast<u64>(d >> 64) ? 1 : 0;
      }
      if (borrow) {
        u64 carry = 0;
        for (std::size_t i = 0; i < K; ++i) {
          u128 s = static_cast<u128>(r[i]) + mod_[i] + carry;
          r[i] = static_cast<u64>(s);
          carry = static_cast<u64>(s >> 64);
        }
      }
    }
    return r;
  }

  Elem neg(const Elem& a) const { return sub(Elem{}, a); }

  Elem mul(const Elem& a, const Elem& b) const { return mont_mul(a, b); }

  // NTT glue: residue of the stored representative modulo a word prime.
  u64 residue_mod(const Elem& a, u64 q) const {
    u128 r = 0;
    for (std::size_t i = K; i-- > 0;) r = ((r << 64) | a[i]) % q;
    return static_cast<u64>(r);
  }

  // Given the mixed-radix digits of an exact integer X built from products of
  // stored representatives, return the element those products represent.
  Elem from_mixed_radix(std::span<const u64> digits) const {
    Elem acc = small_plain(digits.back());
    for (std::size_t i = digits.size() - 1; i-- > 0;) {
      acc = mont_mul(acc, crt_q_[i]);
      acc = add(acc, small_plain(digits[i]));
    }
    return mont_mul(acc, plain_one_);
  }

 private:
  static Elem limbs_of(const mpz_class& x) {
    Elem r{};
    std::size_t count = 0;
    mpz_export(r.data(), &count, -1, sizeof(u64), 0, 0, x.get_mpz_t());
    return r;
  }

  static bool less(const Elem& a, const Elem& b) {
    for (std::size_t i = K; i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }

  static void sub_in_place(Elem& a, const Elem& b) {
    u64 borrow = 0;
    for (std::size_t i = 0; i < K; ++i) {
      u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
      a[i] = static_cast<u64>(d);
      borrow = static_cast<u64>(d >> 64) ? 1 : 0;
    }
  }

  // Plain (non-Montgomery) residue of a word-sized value.
  Elem small_plain(u64 v) const {
    Elem r{};
    if constexpr (K == 1) {
      r[0] = v % mod_[0];
    } else {
      r[0] = v;  // modulus exceeds 2^64 whenever K >= 2 is selected
      if (!less(r, mod_)) r[0] = v % mod_[0];
    }
    return r;
  }

  Elem mont_mul(const Elem& a, const Elem& b) const {
    if constexpr (K == 1) {
      u128 t = static_cast<u128>(a[0]) * b[0];
      u64 m = static_cast<u64>(t) * ninv_;
      u128 s = t + static_cast<u128>(m) * mod_[0];
      u64 r = static_cast<u64>(s >> 64);
      if (r >= mod_[0]) r -= mod_[0];
      return Elem{r};
    } else {
      std::array<u64, K + 2> t{};
      for (std::size_t i = 0; i < K; ++i) {
        u64 c = 0;
        for (std::size_t j = 0; j < K; ++j) {
          u128 s = static_cast<u128>(a[j]) * b[i] + t[j] + c;
          t[j] = static_cast<u64>(s);
          c = static_cast<u64>(s >> 64);
        }
        u128 s = static_cast<u128>(t[K]) + c;
        t[K] = static_cast<u64>(s);
        t[K + 1] = static_cast<u64>(s >> 64);
        u64 m = t[0] * ninv_;
        s = static_cast<u128>(m) * mod_[0] + t[0];
        c = static_cast<u64>(s >> 64);
        for (std::size_t j = 1; j < K; ++j) {
          s = static_cast<u128>(m) * mod_[j] + t[j] + c;
          t[j - 1] = static_cast<u64>(s);
          c = static_cast<u64>(s >> 64);
        }
        s = static_cast<u128>(t[K]) + c;
        t[K - 1] = static_cast<u64>(s);
        t[K] = t[K + 1] + static_cast<u64>(s >> 64);
      }
      Elem r;
      for (std::size_t i = 0; i < K; ++i) r[i] = t[i];
      if (t[K] || !less(r, mod_)) sub_in_place(r, mod_);
      return r;
    }
  }

  mpz_class p_;
  int e_;
  mpz_class m_;
  Elem mod_{};
  u64 ninv_ = 0;
  Elem r1_{};
  Elem r2_{};
  Elem plain_one_{};
  std::vector<Elem> crt_q_;
};

}  // namespace coleman
