#pragma once

#include <vector>

#include "coleman/poly.hpp"

namespace coleman {

// B[j][r] for 0 <= j <= N-1, 0 <= r <= (2g+1)j: coefficient of
// x^{p(i+r+1)-1} y^{-p(2j+1)+1} dx/2y in the truncated Frobenius pullback of
// x^i dx/2y (independent of i).
template <class R>
struct FrobTerms {
  int genus = 0;
  std::vector<Poly<R>> B;

  std::size_t term_count() const {
    std::size_t n = 0;
    for (const auto& row : B) n += row.size();
    return n;
  }
};

template <class R>
FrobTerms<R> frob_terms(const R& ring, const Poly<R>& Q, int N) {
  const int g = (degree(ring, Q) - 1) / 2;
  std::vector<Poly<R>> C = power_coeffs(ring, Q, N - 1);
  std::vector<typename R::Elem> half(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) half[static_cast<std::size_t>(k)] = binomial_half(ring, k);
  const auto p = ring.from_mpz(ring.prime());
  FrobTerms<R> out;
  out.genus = g;
  for (int j = 0; j < N; ++j) {
    typename R::Elem sum = ring.zero();
    for (int k = j; k < N; ++k) {
      mpz_class bin;
      mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
      if ((k + j) % 2) bin = -bin;
      sum = ring.add(sum, ring.mul(ring.from_mpz(bin), half[static_cast<std::size_t>(k)]));
    }
    const auto factor = ring.mul(p, sum);
    Poly<R> row(static_cast<std::size_t>((2 * g + 1) * j + 1), ring.zero());
    for (std::size_t r = 0; r < row.size(); ++r)
      if (r < C[static_cast<std::size_t>(j)].size()) row[r] = ring.mul(factor, C[static_cast<std::size_t>(j)][r]);
    out.B.push_back(std::move(row));
  }
  return out;
}

}  // namespace coleman
