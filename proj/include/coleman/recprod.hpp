#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "coleman/matrix.hpp"
#include "coleman/parallel.hpp"
#include "coleman/shift.hpp"

namespace coleman {

struct ProductOptions {
  // Intervals shorter than this are multiplied out directly.
  std::size_t cutoff = 256;
  // Upper limit on the baby-step block size.
  std::size_t max_block = std::size_t{1} << 20;
  // Rough cap on memory held by stored evaluations, in bytes.
  std::size_t memory_budget = std::size_t{3} << 30;
  int threads = 1;
};

// Instrumentation; counts are approximate ring-operation equivalents.
struct ProductStats {
  std::atomic<std::uint64_t> ring_ops{0};
  std::atomic<std::uint64_t> single_steps{0};
  std::atomic<std::uint64_t> shifts{0};
};

template <class R>
std::uint64_t block_mul_cost(const BlockMat<R>& x) {
  const std::uint64_t m = x.m(), n = x.n();
  return m * m * m + n * m * m + n * m + n;
}

// M(a+1) M(a+2) ... M(b), lowest index leftmost.
template <class R>
BlockMat<R> interval_product_naive(const R& ring, const BlockLinMat<R>& M, const mpz_class& a, const mpz_class& b,
                                   ProductStats* stats = nullptr) {
  if (b < a) throw std::invalid_argument("interval_product_naive: a > b");
  BlockMat<R> acc = BlockMat<R>::identity(ring, M.m(), M.n());
  // build right to left so each step is a single multiply
  for (mpz_class s = b; s > a; --s) {
    acc = block_mul(ring, M.eval(ring, ring.from_mpz(s)), acc);
    if (stats) {
      stats->single_steps++;
      stats->ring_ops += block_mul_cost(acc);
    }
  }
  return acc;
}

namespace detail {

// Entries of a block matrix laid out as: A row-major, then B row-major, then d.
template <class R>
std::size_t entry_count(std::size_t m, std::size_t n) {
  return m * m + n * m + n;
}

template <class R>
void scatter(const BlockMat<R>& x, std::vector<std::vector<typename R::Elem>>& soa, std::size_t z) {
  std::size_t e = 0;
  for (const auto& v : x.A.data) soa[e++][z] = v;
  for (const auto& v : x.B.data) soa[e++][z] = v;
  for (const auto& v : x.d) soa[e++][z] = v;
}

template <class R>
BlockMat<R> gather(const R& ring, std::size_t m, std::size_t n, const std::vector<std::vector<typename R::Elem>>& soa,
                   std::size_t z) {
  BlockMat<R> x{Matrix<R>(ring, m, m), Matrix<R>(ring, n, m), std::vector<typename R::Elem>(n)};
  std::size_t e = 0;
  for (auto& v : x.A.data) v = soa[e++][z];
  for (auto& v : x.B.data) v = soa[e++][z];
  for (auto& v : x.d) v = soa[e++][z];
  return x;
}

// M(c + x) as a matrix linear in x.
template <class R>
BlockLinMat<R> translate(const R& ring, const BlockLinMat<R>& M, const mpz_class& c) {
  BlockLinMat<R> out = M;
  const auto ce = ring.from_mpz(c);
  for (std::size_t i = 0; i < out.A.c0.data.size(); ++i)
    out.A.c0.data[i] = ring.add(M.A.c0.data[i], ring.mul(M.A.c1.data[i], ce));
  for (std::size_t i = 0; i < out.B.c0.data.size(); ++i)
    out.B.c0.data[i] = ring.add(M.B.c0.data[i], ring.mul(M.B.c1.data[i], ce));
  for (std::size_t i = 0; i < out.d0.size(); ++i) out.d0[i] = ring.add(M.d0[i], ring.mul(M.d1[i], ce));
  return out;
}

}  // namespace detail

// Block size for an interval of length n: the largest power of two k with
// (2k+1)^2 <= n, limited by the options. Returns 0 when the naive product
// should be used.
template <class R>
std::size_t choose_block(const R& ring, std::size_t n, std::size_t entries, const ProductOptions& opt) {
  if (n < opt.cutoff || n < 9) return 0;
  std::size_t k = 1;
  while ((2 * k + 1) * (2 * k + 1) <= n) k *= 2;
  const std::size_t elem_bytes = sizeof(typename R::Elem) + (std::is_same_v<R, GmpRing> ? 24 : 0);
  while (k > 2 && (k > opt.max_block || 4 * k * entries * elem_bytes > opt.memory_budget)) k /= 2;
  (void)ring;
  return k < 2 ? 0 : k;
}

// Product G(1) G(2) ... G(n) for G(x) = M(c + x), n < p, by baby steps of
// size k and giant steps via shifted evaluations.
template <class R>
BlockMat<R> interval_product_bgs(const R& ring, const BlockLinMat<R>& M, const mpz_class& c, std::size_t n,
                                 const ProductOptions& opt, ProductStats* stats = nullptr) {
  const std::size_t m = M.m(), nn = M.n();
  const std::size_t E = detail::entry_count<R>(m, nn);
  const std::size_t k0 = choose_block(ring, n, E, opt);
  if (k0 == 0) return interval_product_naive(ring, M, c, c + static_cast<unsigned long>(n), stats);
  if (mpz_cmp_ui(ring.prime().get_mpz_t(), static_cast<unsigned long>(n)) <= 0)
    throw std::invalid_argument("interval_product_bgs: interval must be shorter than p");
  const BlockLinMat<R> G = detail::translate(ring, M, c);
  using Elem = typename R::Elem;
  using SoA = std::vector<std::vector<Elem>>;
  auto count = [&](std::uint64_t ops) {
    if (stats) stats->ring_ops += ops;
  };

  // V_1(z) = G(k0 z + 1) at z = 0, 1
  SoA V(E, std::vector<Elem>(2));
  detail::scatter(G.eval(ring, ring.one()), V, 0);
  detail::scatter(G.eval(ring, ring.from_int(static_cast<long>(k0 + 1))), V, 1);

  // V_{2d}(z) = V_d(z) V_d(z + d/k0)
  for (std::size_t d = 1; d < k0; d *= 2) {
    Shifter<R> upper(ring, d, d);
    upper.set_shift(static_cast<long>(d + 1));
    Shifter<R> half(ring, d, 2 * d + 1);
    half.set_shift(mpq_class(static_cast<long>(d), static_cast<long>(k0)));
    SoA left(E, std::vector<Elem>(2 * d + 1)), right(E, std::vector<Elem>(2 * d + 1));
    for (std::size_t e = 0; e < E; ++e) {
      std::copy(V[e].begin(), V[e].end(), left[e].begin());
      upper.apply(V[e], std::span<Elem>(left[e]).subspan(d + 1));
      half.apply(V[e], right[e]);
      std::vector<Elem>().swap(V[e]);
    }
    count(E * (upper.cost() + half.cost()));
    if (stats) stats->shifts += 2 * E;
    for (std::size_t z = 0; z <= 2 * d; ++z) {
      BlockMat<R> x = block_mul(ring, detail::gather(ring, m, nn, left, z), detail::gather(ring, m, nn, right, z));
      count(block_mul_cost(x));
      detail::scatter(x, left, z);
    }
    SoA().swap(right);
    V = std::move(left);
  }

  // Giant steps: V(z) = G(k0 z + 1) ... G(k0 z + k0) for z < U.
  const std::size_t U = n / k0;
  BlockMat<R> prod = BlockMat<R>::identity(ring, m, nn);
  const std::size_t have = std::min(U, k0 + 1);
  for (std::size_t z = 0; z < have; ++z) {
    prod = block_mul(ring, prod, detail::gather(ring, m, nn, V, z));
    count(block_mul_cost(prod));
  }
  if (U > k0 + 1) {
    const std::size_t chunk = 3 * k0;
    Shifter<R> ext(ring, k0, chunk);
    SoA out(E, std::vector<Elem>(chunk));
    for (std::size_t z0 = k0 + 1; z0 < U; z0 += chunk) {
      ext.set_shift(static_cast<long>(z0));
      for (std::size_t e = 0; e < E; ++e) ext.apply(V[e], out[e]);
      count(E * ext.cost());
      if (stats) stats->shifts += E;
      const std::size_t lim = std::min(chunk, U - z0);
      for (std::size_t z = 0; z < lim; ++z) {
        prod = block_mul(ring, prod, detail::gather(ring, m, nn, out, z));
        count(block_mul_cost(prod));
      }
    }
  }
  // Remaining single steps G(U k0 + 1) ... G(n).
  if (U * k0 < n) {
    BlockMat<R> tail = interval_product_naive(ring, G, mpz_class(static_cast<unsigned long>(U * k0)),
                                              mpz_class(static_cast<unsigned long>(n)), stats);
    prod = block_mul(ring, prod, tail);
    count(block_mul_cost(prod));
  }
  return prod;
}

// M(a, b) for one interval; long intervals are split into pieces shorter than p.
template <class R>
BlockMat<R> interval_product(const R& ring, const BlockLinMat<R>& M, const mpz_class& a, const mpz_class& b,
                             const ProductOptions& opt, ProductStats* stats = nullptr) {
  if (b < a) throw std::invalid_argument("interval_product: a > b");
  const mpz_class& p = ring.prime();
  mpz_class limit = p - 1;
  if (limit > mpz_class(std::numeric_limits<long>::max() / 4)) limit = std::numeric_limits<long>::max() / 4;
  BlockMat<R> acc = BlockMat<R>::identity(ring, M.m(), M.n());
  bool first = true;
  for (mpz_class lo = a; lo < b;) {
    mpz_class len = b - lo;
    if (len > limit) len = limit;
    BlockMat<R> piece = interval_product_bgs(ring, M, lo, len.get_ui(), opt, stats);
    acc = first ? std::move(piece) : block_mul(ring, acc, piece);
    first = false;
    lo += len;
  }
  return acc;
}

// Products over a sorted list of disjoint intervals.
template <class R>
std::vector<BlockMat<R>> interval_products(const R& ring, const BlockLinMat<R>& M,
                                           const std::vector<std::pair<mpz_class, mpz_class>>& intervals,
                                           const ProductOptions& opt, ProductStats* stats = nullptr) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].second < intervals[i].first) throw std::invalid_argument("interval_products: empty-reversed interval");
    if (i > 0 && intervals[i].first < intervals[i - 1].second)
      throw std::invalid_argument("interval_products: intervals overlap or are unsorted");
  }
  std::vector<BlockMat<R>> out(intervals.size());
  parallel_for(intervals.size(), opt.threads, [&](std::size_t i) {
    out[i] = interval_product(ring, M, intervals[i].first, intervals[i].second, opt, stats);
  });
  return out;
}

}  // namespace coleman
