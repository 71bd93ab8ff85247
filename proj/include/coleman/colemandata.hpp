#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cstdint>
#include <vector>

#include "coleman/curve.hpp"
#include "coleman/frobpull.hpp"
#include "coleman/recprod.hpp"
#include "coleman/redmat.hpp"

namespace coleman {

// Matrix of Frobenius and primitive evaluations, reduced mod p^N.
// frobenius[r][c]: coefficient of omega_r in the reduction of phi^* omega_c.
// evaluations[i][l]: f_i(P_l).
struct ColemanData {
  mpz_class p;
  int N = 0;
  int genus = 0;
  std::vector<std::vector<mpz_class>> frobenius;
  std::vector<std::vector<mpz_class>> evaluations;
  std::vector<PointMod> points;  // evaluation points, mod p^(N+1)
};

struct DataOptions {
  ProductOptions products;
  int threads = 1;
  // Naive path only: also carry each row primitive as an explicit polynomial
  // and check direct substitution against the recurrence.
  bool check_primitives = false;
  Backend backend = Backend::Auto;
};

struct DataStats {
  ProductStats products;
  std::atomic<std::uint64_t> valuation_one_divisions{0};
  std::atomic<std::uint64_t> row_end_checks{0};
  std::atomic<std::uint64_t> primitive_checks{0};
};

ColemanData coleman_data(const Curve& curve, const std::vector<PointMod>& points, const DataOptions& opt = {},
                         DataStats* stats = nullptr);
ColemanData coleman_data_naive(const Curve& curve, const std::vector<PointMod>& points, const DataOptions& opt = {},
                               DataStats* stats = nullptr);

namespace detail {

template <class R>
struct Setup {
  using Elem = typename R::Elem;
  const R& ring;
  int g, N;
  mpz_class p;
  Poly<R> Q;
  BezoutData<R> bez;
  FrobTerms<R> frob;
  EvalSet<R> ev;

  Setup(const R& r, const Curve& c, const std::vector<PointMod>& pts)
      : ring(r), g(c.genus), N(c.N), p(c.p), Q(curve_poly(r, c)), bez(bezout_data(r, Q)), frob(frob_terms(r, Q, c.N)) {
    std::vector<Elem> xs, ys;
    for (const auto& P : pts) {
      if (P.at_infinity) throw NonWeierstrassRequired("evaluation point at infinity");
      xs.push_back(r.from_mpz(P.x));
      ys.push_back(r.from_mpz(P.y));
    }
    ev = make_evalset(r, Q, bez, xs, ys);
  }

  mpz_class row_t(int j) const { return (p * (2 * j + 1) - 1) / 2; }
  int top_k(int j) const { return 2 * g + (2 * g + 1) * j; }
};

// One horizontal step from W_{s,t} to W_{s-1,t}: h <- R_H^t(s) h.
template <class R>
void horiz_step(const R& ring, const Poly<R>& Q, const EvalSet<R>& ev, const typename R::Elem& tm,
                const typename R::Elem& s, const typename R::Elem& qdiv, std::vector<typename R::Elem>& h,
                std::vector<typename R::Elem>& e) {
  // qdiv = h[2g] / D_H(s), already computed by the caller
  const std::size_t m = h.size();
  const auto two_s = ring.add(s, s);
  for (std::size_t i = m; i-- > 0;) {
    // p_i(s) = (2s - (2t-1) i) P_i
    const auto& Pi = Q[i];
    auto pi = ring.mul(ring.sub(two_s, ring.mul(tm, ring.from_int(static_cast<long>(i)))), Pi);
    auto prev = i > 0 ? h[i - 1] : ring.zero();
    h[i] = ring.add(prev, ring.mul(pi, qdiv));
  }
  for (std::size_t l = 0; l < e.size(); ++l) e[l] = ring.sub(ring.mul(ev.x[l], e[l]), qdiv);
}

template <class R>
BlockMat<R> scale_block(const R& ring, BlockMat<R> x, const typename R::Elem& c) {
  for (auto& v : x.A.data) v = ring.mul(v, c);
  for (auto& v : x.B.data) v = ring.mul(v, c);
  for (auto& v : x.d) v = ring.mul(v, c);
  return x;
}

// 1x1 block matrix holding D(s) = c0 + c1 s.
template <class R>
BlockLinMat<R> scalar_linmat(const R& ring, const typename R::Elem& c0, const typename R::Elem& c1) {
  BlockLinMat<R> M{LinMat<R>(ring, 1, 1), LinMat<R>(ring, 0, 1), {}, {}};
  M.A.c0(0, 0) = c0;
  M.A.c1(0, 0) = c1;
  return M;
}

// Row results: diff[i] (2g entries) and evals[i] (L entries) for basis index i.
template <class R>
struct RowResult {
  std::vector<std::vector<typename R::Elem>> diff, evals;
};

template <class R>
void check_row_end(const R& ring, const std::vector<typename R::Elem>& h, DataStats* stats) {
  if (!ring.is_zero(h[0])) throw PrecisionViolation("x^-1 coefficient did not vanish at the end of a row");
  if (stats) stats->row_end_checks++;
}

template <class R>
RowResult<R> horizontal_row_fast(const Setup<R>& S, int j, const DataOptions& opt, DataStats* stats) {
  const R& ring = S.ring;
  const int g = S.g;
  const std::size_t m = static_cast<std::size_t>(2 * g + 1), L = S.ev.size();
  const mpz_class t = S.row_t(j);
  const auto tm = ring.from_mpz(2 * t - 1);
  const BlockLinMat<R> MH = horiz_matrix(ring, S.Q, S.ev, t);
  const BlockLinMat<R> DH = scalar_linmat(ring, ring.from_mpz((2 * t - 1) * (2 * g + 1)), ring.from_int(-2));
  const int K = S.top_k(j);

  // R_H((k-1)p, kp-2g-2) for k = 1..K
  std::vector<BlockMat<R>> RH(static_cast<std::size_t>(K) + 1);
  ProductStats* ps = stats ? &stats->products : nullptr;
  ProductOptions po = opt.products;
  po.threads = 1;
  parallel_for(static_cast<std::size_t>(K), opt.threads, [&](std::size_t idx) {
    const long k = static_cast<long>(idx) + 1;
    mpz_class a = (k - 1) * S.p, b = k * S.p - 2 * g - 2;
    BlockMat<R> num = interval_product(ring, MH, a, b, po, ps);
    BlockMat<R> den = interval_product(ring, DH, a, b, po, ps);
    RH[idx + 1] = scale_block(ring, std::move(num), invert_unit(ring, den.A(0, 0)));
  });

  RowResult<R> out;
  out.diff.resize(static_cast<std::size_t>(2 * g));
  out.evals.resize(static_cast<std::size_t>(2 * g));
  parallel_for(static_cast<std::size_t>(2 * g), opt.threads, [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    std::vector<typename R::Elem> h(m, ring.zero()), e(L, ring.zero());
    const auto& Bj = S.frob.B[static_cast<std::size_t>(j)];
    auto step = [&](const mpz_class& s) {
      auto se = ring.from_mpz(s);
      auto D = horiz_denominator(ring, t, s, g);
      if (stats && valuation(ring, D) > 0) stats->valuation_one_divisions++;
      auto q = divide_exact(ring, h[m - 1], D);
      horiz_step(ring, S.Q, S.ev, tm, se, q, h, e);
    };
    for (int k = i + 1 + (2 * g + 1) * j; k >= 1; --k) {
      const int r = k - i - 1;
      if (r >= 0 && static_cast<std::size_t>(r) < Bj.size()) h[0] = ring.add(h[0], Bj[static_cast<std::size_t>(r)]);
      const mpz_class kp = S.p * k;
      for (int d = 1; d <= 2 * g + 1; ++d) step(kp - d);
      block_apply(ring, RH[static_cast<std::size_t>(k)], h, e);
      step(kp - S.p);
    }
    check_row_end(ring, h, stats);
    apply_correction(ring, e, S.ev, 2);
    out.diff[ii].assign(h.begin() + 1, h.end());
    out.evals[ii] = std::move(e);
  });
  return out;
}

// Horizontal row by single steps only. When `primitive` is set, the row
// primitive coefficients c_s are collected and checked against the Horner
// accumulators by direct substitution.
template <class R>
RowResult<R> horizontal_row_naive(const Setup<R>& S, int j, const DataOptions& opt, DataStats* stats) {
  const R& ring = S.ring;
  const int g = S.g;
  const std::size_t m = static_cast<std::size_t>(2 * g + 1), L = S.ev.size(), G2 = static_cast<std::size_t>(2 * g);
  const mpz_class t = S.row_t(j);
  const auto tm = ring.from_mpz(2 * t - 1);
  const auto& Bj = S.frob.B[static_cast<std::size_t>(j)];
  using Elem = typename R::Elem;

  std::vector<std::vector<Elem>> h(G2, std::vector<Elem>(m, ring.zero())), e(G2, std::vector<Elem>(L, ring.zero()));
  std::vector<std::vector<Elem>> prim(opt.check_primitives ? G2 : 0);
  const mpz_class s_top = S.p * S.top_k(j) + S.p - 1;  // above every injection
  // unit denominators are inverted in blocks
  const std::size_t block = 4096;
  std::vector<Elem> dens;
  std::vector<bool> unit;
  mpz_class s = s_top;
  while (s >= 0) {
    mpz_class lo = s - static_cast<long>(block) + 1;
    if (lo < 0) lo = 0;
    const std::size_t cnt = mpz_class(s - lo + 1).get_ui();
    dens.assign(cnt, ring.one());
    unit.assign(cnt, true);
    std::vector<Elem> raw(cnt);
    for (std::size_t u = 0; u < cnt; ++u) {
      raw[u] = horiz_denominator(ring, t, mpz_class(s - static_cast<long>(u)), g);
      if (valuation(ring, raw[u]) > 0) unit[u] = false;
      else dens[u] = raw[u];
    }
    batch_invert(ring, std::span<Elem>(dens));
    for (std::size_t u = 0; u < cnt; ++u) {
      const mpz_class src = s - static_cast<long>(u);
      const auto se = ring.from_mpz(src);
      for (std::size_t i = 0; i < G2; ++i) {
        // inject B[j][r] at s = p(i+r+1) - 1
        mpz_class rr = src + 1;
        if (mpz_divisible_p(rr.get_mpz_t(), S.p.get_mpz_t())) {
          mpz_class r = rr / S.p - static_cast<long>(i) - 1;
          if (r >= 0 && r < static_cast<long>(Bj.size())) h[i][0] = ring.add(h[i][0], Bj[r.get_ui()]);
        }
        Elem q;
        if (unit[u]) {
          q = ring.mul(h[i][m - 1], dens[u]);
        } else {
          if (stats) stats->valuation_one_divisions++;
          q = divide_exact(ring, h[i][m - 1], raw[u]);
        }
        horiz_step(ring, S.Q, S.ev, tm, se, q, h[i], e[i]);
        if (opt.check_primitives) prim[i].push_back(ring.neg(q));
      }
    }
    s = lo - 1;
  }
  RowResult<R> out;
  out.diff.resize(G2);
  out.evals.resize(G2);
  for (std::size_t i = 0; i < G2; ++i) {
    check_row_end(ring, h[i], stats);
    if (opt.check_primitives) {
      // prim[i] holds c_s for s = s_top down to 0
      for (std::size_t l = 0; l < L; ++l) {
        Elem acc = ring.zero(), xp = ring.one();
        for (std::size_t u = prim[i].size(); u-- > 0;) {
          acc = ring.add(acc, ring.mul(prim[i][u], xp));
          xp = ring.mul(xp, S.ev.x[l]);
        }
        if (ring.to_mpz(acc) != ring.to_mpz(e[i][l]))
          throw PrecisionViolation("row primitive substitution disagrees with the Horner recurrence");
        if (stats) stats->primitive_checks++;
      }
    }
    apply_correction(ring, e[i], S.ev, 2);
    out.diff[i].assign(h[i].begin() + 1, h[i].end());
    out.evals[i] = std::move(e[i]);
  }
  return out;
}

// v <- M_V(t) v / D_V(t), with an exact division when D_V(t) has valuation 1.
template <class R>
void vert_step(const R& ring, const BlockLinMat<R>& MV, const EvalSet<R>& ev, const mpz_class& t,
               std::vector<typename R::Elem>& top, std::vector<typename R::Elem>& bottom, DataStats* stats) {
  (void)ev;
  block_apply(ring, MV.eval(ring, ring.from_mpz(t)), top, bottom);
  auto D = vert_denominator(ring, t);
  if (valuation(ring, D) == 0) {
    auto inv = invert_unit(ring, D);
    for (auto& v : top) v = ring.mul(v, inv);
    for (auto& v : bottom) v = ring.mul(v, inv);
  } else {
    if (stats) stats->valuation_one_divisions++;
    for (auto& v : top) v = divide_exact(ring, v, D);
    for (auto& v : bottom) v = divide_exact(ring, v, D);
  }
}

template <class R>
ColemanData finish(const Setup<R>& S, const std::vector<std::vector<typename R::Elem>>& top,
                   const std::vector<std::vector<typename R::Elem>>& bottom, const std::vector<PointMod>& pts) {
  const R& ring = S.ring;
  ColemanData out;
  out.p = S.p;
  out.N = S.N;
  out.genus = S.g;
  mpz_class pN;
  mpz_pow_ui(pN.get_mpz_t(), S.p.get_mpz_t(), static_cast<unsigned long>(S.N));
  const std::size_t G2 = static_cast<std::size_t>(2 * S.g);
  out.frobenius.assign(G2, std::vector<mpz_class>(G2));
  out.evaluations.assign(G2, std::vector<mpz_class>(S.ev.size()));
  for (std::size_t i = 0; i < G2; ++i) {
    for (std::size_t r = 0; r < G2; ++r) out.frobenius[r][i] = ring.to_mpz(top[i][r]) % pN;
    for (std::size_t l = 0; l < S.ev.size(); ++l) out.evaluations[i][l] = ring.to_mpz(bottom[i][l]) % pN;
  }
  out.points = pts;
  return out;
}

template <class R>
ColemanData run(const R& ring, const Curve& curve, const std::vector<PointMod>& pts, const DataOptions& opt,
                DataStats* stats, bool naive) {
  Setup<R> S(ring, curve, pts);
  const int N = S.N;
  const std::size_t G2 = static_cast<std::size_t>(2 * S.g), L = S.ev.size();
  std::vector<RowResult<R>> rows(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j)
    rows[static_cast<std::size_t>(j)] = naive ? horizontal_row_naive(S, j, opt, stats) : horizontal_row_fast(S, j, opt, stats);

  const BlockLinMat<R> MV = vert_matrix(ring, S.bez, S.ev);
  using Elem = typename R::Elem;
  std::vector<std::vector<Elem>> top(G2, std::vector<Elem>(G2, ring.zero())), bottom(G2, std::vector<Elem>(L, ring.zero()));
  auto add_row = [&](int j) {
    for (std::size_t i = 0; i < G2; ++i) {
      for (std::size_t r = 0; r < G2; ++r) top[i][r] = ring.add(top[i][r], rows[static_cast<std::size_t>(j)].diff[i][r]);
      for (std::size_t l = 0; l < L; ++l)
        bottom[i][l] = ring.add(bottom[i][l], rows[static_cast<std::size_t>(j)].evals[i][l]);
    }
  };

  if (naive) {
    for (int j = N - 1; j >= 0; --j) {
      add_row(j);
      const mpz_class hi = S.row_t(j), lo = j > 0 ? S.row_t(j - 1) : mpz_class(0);
      for (mpz_class t = hi; t > lo; --t)
        for (std::size_t i = 0; i < G2; ++i) vert_step(ring, MV, S.ev, t, top[i], bottom[i], stats);
    }
  } else {
    const BlockLinMat<R> DV = scalar_linmat(ring, ring.from_int(-1), ring.from_int(2));
    ProductStats* ps = stats ? &stats->products : nullptr;
    ProductOptions po = opt.products;
    po.threads = 1;
    // blocks[j] reduces row t_j to t_{j-1} (to 0 for j = 0), excluding the
    // step at the bad index t_{j-1}+1 which is applied separately.
    std::vector<BlockMat<R>> blocks(static_cast<std::size_t>(N));
    parallel_for(static_cast<std::size_t>(N), opt.threads, [&](std::size_t jj) {
      const int j = static_cast<int>(jj);
      const mpz_class hi = S.row_t(j), lo = j > 0 ? S.row_t(j - 1) + 1 : mpz_class(0);
      BlockMat<R> num = interval_product(ring, MV, lo, hi, po, ps);
      BlockMat<R> den = interval_product(ring, DV, lo, hi, po, ps);
      blocks[jj] = scale_block(ring, std::move(num), invert_unit(ring, den.A(0, 0)));
    });
    for (int j = N - 1; j >= 0; --j) {
      add_row(j);
      for (std::size_t i = 0; i < G2; ++i) {
        block_apply(ring, blocks[static_cast<std::size_t>(j)], top[i], bottom[i]);
        if (j > 0) vert_step(ring, MV, S.ev, S.row_t(j - 1) + 1, top[i], bottom[i], stats);
      }
    }
  }
  for (std::size_t i = 0; i < G2; ++i) apply_correction(ring, bottom[i], S.ev, -1);
  return finish(S, top, bottom, pts);
}

}  // namespace detail

}  // namespace coleman
