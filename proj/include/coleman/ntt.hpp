#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Number-theoretic transforms over a fixed family of 62-bit primes
// q = c * 2^27 + 1, and mixed-radix (Garner) reconstruction across them.
namespace coleman::ntt {

inline constexpr std::size_t kNumPrimes = 24;
inline constexpr int kMaxLog = 27;

std::uint64_t prime(std::size_t i);

// Smallest count k such that the product of the first k primes exceeds bound.
std::size_t primes_needed(const mpz_class& bound);

// Arithmetic modulo one transform prime; values are kept reduced in [0, q).
struct Field {
  std::uint64_t q;
  std::uint64_t qneg_inv;  // -q^{-1} mod 2^64
  std::uint64_t r2;        // 2^128 mod q

  explicit Field(std::uint64_t modulus);

  std::uint64_t redc(unsigned __int128 t) const {
    std::uint64_t m = static_cast<std::uint64_t>(t) * qneg_inv;
    unsigned __int128 s = t + static_cast<unsigned __int128>(m) * q;
    std::uint64_t r = static_cast<std::uint64_t>(s >> 64);
    return r >= q ? r - q : r;
  }
  // a * b * 2^-64
  std::uint64_t mmul(std::uint64_t a, std::uint64_t b) const {
    return redc(static_cast<unsigned __int128>(a) * b);
  }
  std::uint64_t to_mont(std::uint64_t a) const { return mmul(a, r2); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return mmul(mmul(a, b), r2); }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= q ? s - q : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (q - b); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
  std::uint64_t inv(std::uint64_t a) const { return pow(a, q - 2); }
};

const Field& field(std::size_t i);

// In-place transforms of length 2^logn modulo prime i. forward takes natural
// order to bit-reversed order; inverse undoes it including the 1/n scale.
void forward(std::size_t i, std::uint64_t* a, int logn);
void inverse(std::size_t i, std::uint64_t* a, int logn);

// Pointwise a[j] = a[j] * b[j] mod prime i.
void pointwise(std::size_t i, std::uint64_t* a, const std::uint64_t* b, std::size_t n);

// Mixed-radix digits of the integer in [0, q_0...q_{k-1}) with the given residues.
class Garner {
 public:
  explicit Garner(std::size_t k);
  std::size_t size() const { return k_; }
  void digits(std::span<const std::uint64_t> residues, std::span<std::uint64_t> out) const;

 private:
  std::size_t k_;
  std::vector<std::uint64_t> inv_;  // inv_[j*k + i] = q_j^{-1} mod q_i, j < i
};

int ceil_log2(std::size_t n);

}  // namespace coleman::ntt
