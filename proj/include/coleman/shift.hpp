#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coleman/errors.hpp"
#include "coleman/ntt.hpp"
#include "coleman/padic.hpp"

namespace coleman {

// Given values F(0..d) of a polynomial of degree <= d, produces F(a..a+M-1)
// by Lagrange interpolation written as one convolution:
//   F(a+i) = Delta_i * sum_j F(j) w_j / (a + i - j),
//   w_j = 1 / (j! (d-j)! (-1)^(d-j)),  Delta_i = prod_{k=0}^{d} (a + i - k).
// The shift a may be any rational with unit denominator.
template <class R>
class Shifter {
 public:
  using Elem = typename R::Elem;

  static constexpr std::size_t kDirectCutoff = 48;

  Shifter(const R& ring, std::size_t d, std::size_t outputs) : ring_(ring), d_(d), M_(outputs) {
    // w_j from factorials; all of 1..d must be units
    if (mpz_cmp_ui(ring.prime().get_mpz_t(), static_cast<unsigned long>(d)) <= 0)
      throw NonUnitDenominator("shift: degree " + std::to_string(d) + " is not below p");
    std::vector<Elem> fact(d + 1);
    fact[0] = ring.one();
    for (std::size_t j = 1; j <= d; ++j) fact[j] = ring.mul(fact[j - 1], ring.from_int(static_cast<long>(j)));
    Elem inv_last = invert_unit(ring, fact[d]);
    std::vector<Elem> inv_fact(d + 1);
    inv_fact[d] = inv_last;
    for (std::size_t j = d; j > 0; --j) inv_fact[j - 1] = ring.mul(inv_fact[j], ring.from_int(static_cast<long>(j)));
    w_.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
      Elem v = ring.mul(inv_fact[j], inv_fact[d - j]);
      w_[j] = ((d - j) % 2) ? ring.neg(v) : v;
    }
    direct_ = d < kDirectCutoff;
    if (!direct_) {
      logL_ = ntt::ceil_log2(M_ + d_);
      mpz_class bound = ring.modulus() * ring.modulus() * static_cast<unsigned long>(d + 1);
      nprimes_ = ntt::primes_needed(bound);
      garner_ = std::make_unique<ntt::Garner>(nprimes_);
    }
  }

  std::size_t degree() const { return d_; }
  std::size_t outputs() const { return M_; }
  std::size_t transform_length() const { return direct_ ? 0 : std::size_t{1} << logL_; }

  // Prepares the kernel for shift a = num/den.
  void set_shift(const mpq_class& a) {
    if (d_ == 0) return;  // constants need no kernel
    const R& ring = ring_;
    const std::size_t K = M_ + d_;
    const mpz_class& p = ring.prime();
    Elem a_elem = from_rational(ring, a);
    std::vector<Elem> den(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
      // a - d + k, checked for being a unit through its numerator
      mpz_class num = a.get_num() - (static_cast<long>(d_) - static_cast<long>(k)) * a.get_den();
      if (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t()))
        throw NonUnitDenominator("shift: a - d + " + std::to_string(k) + " is not a unit");
      den[k] = ring.add(a_elem, ring.from_int(static_cast<long>(k) - static_cast<long>(d_)));
    }
    kernel_.assign(den.begin(), den.begin() + static_cast<std::ptrdiff_t>(K));
    batch_invert(ring, std::span<Elem>(kernel_));
    delta_.resize(M_);
    Elem acc = ring.one();
    for (std::size_t k = 0; k <= d_; ++k) acc = ring.mul(acc, den[k]);
    for (std::size_t i = 0; i < M_; ++i) {
      delta_[i] = acc;
      if (i + 1 < M_) acc = ring.mul(ring.mul(acc, den[i + d_ + 1]), kernel_[i]);
    }
    if (!direct_) {
      const std::size_t L = std::size_t{1} << logL_;
      kernel_hat_.assign(nprimes_, std::vector<std::uint64_t>(L, 0));
      for (std::size_t q = 0; q < nprimes_; ++q) {
        auto& buf = kernel_hat_[q];
        const std::uint64_t qq = ntt::prime(q);
        for (std::size_t k = 0; k < K; ++k) buf[k] = ring.residue_mod(kernel_[k], qq);
        ntt::forward(q, buf.data(), logL_);
      }
    }
  }

  void set_shift(long a) { set_shift(mpq_class(a)); }

  // values: F(0..d). out: F(a..a+M-1).
  void apply(std::span<const Elem> values, std::span<Elem> out) const {
    const R& ring = ring_;
    if (d_ == 0) {
      for (std::size_t i = 0; i < M_; ++i) out[i] = values[0];
      return;
    }
    std::vector<Elem> f(d_ + 1);
    for (std::size_t j = 0; j <= d_; ++j) f[j] = ring.mul(values[j], w_[j]);
    if (direct_) {
      for (std::size_t i = 0; i < M_; ++i) {
        Elem acc = ring.zero();
        for (std::size_t j = 0; j <= d_; ++j) acc = ring.add(acc, ring.mul(f[j], kernel_[i + d_ - j]));
        out[i] = ring.mul(acc, delta_[i]);
      }
      return;
    }
    const std::size_t L = std::size_t{1} << logL_;
    std::vector<std::vector<std::uint64_t>> bufs(nprimes_, std::vector<std::uint64_t>(L, 0));
    for (std::size_t q = 0; q < nprimes_; ++q) {
      auto& buf = bufs[q];
      const std::uint64_t qq = ntt::prime(q);
      for (std::size_t j = 0; j <= d_; ++j) buf[j] = ring.residue_mod(f[j], qq);
      ntt::forward(q, buf.data(), logL_);
      ntt::pointwise(q, buf.data(), kernel_hat_[q].data(), L);
      ntt::inverse(q, buf.data(), logL_);
    }
    std::vector<std::uint64_t> res(nprimes_), dig(nprimes_);
    for (std::size_t i = 0; i < M_; ++i) {
      for (std::size_t q = 0; q < nprimes_; ++q) res[q] = bufs[q][i + d_];
      garner_->digits(res, dig);
      out[i] = ring.mul(ring.from_mixed_radix(dig), delta_[i]);
    }
  }

  std::vector<Elem> apply(std::span<const Elem> values) const {
    std::vector<Elem> out(M_);
    apply(values, out);
    return out;
  }

  // Rough count of ring-operation equivalents for one apply call.
  std::uint64_t cost() const {
    if (direct_) return static_cast<std::uint64_t>(M_) * (d_ + 1);
    const std::uint64_t L = std::uint64_t{1} << logL_;
    return nprimes_ * L * static_cast<std::uint64_t>(logL_);
  }

 private:
  const R& ring_;
  std::size_t d_, M_;
  bool direct_ = true;
  int logL_ = 0;
  std::size_t nprimes_ = 0;
  std::unique_ptr<ntt::Garner> garner_;
  std::vector<Elem> w_, kernel_, delta_;
  std::vector<std::vector<std::uint64_t>> kernel_hat_;
};

// Convenience wrapper: one-shot shift of a single value sequence.
template <class R>
std::vector<typename R::Elem> shift_evaluations(const R& ring, std::span<const typename R::Elem> values,
                                                const mpq_class& a, std::size_t outputs) {
  if (values.empty()) return {};
  Shifter<R> s(ring, values.size() - 1, outputs);
  s.set_shift(a);
  return s.apply(values);
}

}  // namespace coleman
