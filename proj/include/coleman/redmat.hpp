#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "coleman/matrix.hpp"
#include "coleman/poly.hpp"

namespace coleman {

// Points at which primitives are evaluated, with the per-point constants the
// reduction matrices need.
template <class R>
struct EvalSet {
  using Elem = typename R::Elem;
  std::vector<Elem> x, y, y2, yinv, yinv2;
  std::vector<std::vector<Elem>> S;  // S[l][i] = S_i(x_l)

  std::size_t size() const { return x.size(); }
};

template <class R>
EvalSet<R> make_evalset(const R& ring, const Poly<R>& Q, const BezoutData<R>& bez,
                        const std::vector<typename R::Elem>& xs, const std::vector<typename R::Elem>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("make_evalset: size mismatch");
  EvalSet<R> e;
  for (std::size_t l = 0; l < xs.size(); ++l) {
    if (valuation(ring, ys[l]) > 0)
      throw NonWeierstrassRequired("evaluation point " + std::to_string(l) + " lies in a Weierstrass disk");
    auto y2 = ring.mul(ys[l], ys[l]);
    if (ring.to_mpz(y2) != ring.to_mpz(poly_eval(ring, Q, xs[l])))
      throw InvalidPoint("evaluation point " + std::to_string(l) + " is not on the curve");
    e.x.push_back(xs[l]);
    e.y.push_back(ys[l]);
    e.y2.push_back(y2);
    e.yinv.push_back(invert_unit(ring, ys[l]));
    e.yinv2.push_back(ring.mul(e.yinv.back(), e.yinv.back()));
    std::vector<typename R::Elem> s;
    for (const auto& Si : bez.S) s.push_back(poly_eval(ring, Si, xs[l]));
    e.S.push_back(std::move(s));
  }
  return e;
}

// (2t-1)(2g+1) - 2s
template <class R>
typename R::Elem horiz_denominator(const R& ring, const mpz_class& t, const mpz_class& s, int g) {
  return ring.from_mpz((2 * t - 1) * (2 * g + 1) - 2 * s);
}

template <class R>
typename R::Elem vert_denominator(const R& ring, const mpz_class& t) {
  return ring.from_mpz(2 * t - 1);
}

// M_H^t(s) as a block matrix linear in s. Coordinates 0..2g of the top block
// are the coefficients of x^i x^s y^{-2t} dx/2y.
template <class R>
BlockLinMat<R> horiz_matrix(const R& ring, const Poly<R>& Q, const EvalSet<R>& ev, const mpz_class& t) {
  const int g = (degree(ring, Q) - 1) / 2;
  const std::size_t m = static_cast<std::size_t>(2 * g + 1), n = ev.size();
  const auto two = ring.from_int(2);
  const auto neg_two = ring.from_int(-2);
  const auto tm = ring.from_mpz(2 * t - 1);
  const auto d_const = ring.from_mpz((2 * t - 1) * (2 * g + 1));
  BlockLinMat<R> M{LinMat<R>(ring, m, m), LinMat<R>(ring, n, m), {}, {}};
  for (std::size_t i = 1; i < m; ++i) {
    M.A.c0(i, i - 1) = d_const;
    M.A.c1(i, i - 1) = neg_two;
  }
  // p_i(s) = coefficient of x^i in 2sP(x) - (2t-1)xP'(x)
  for (std::size_t i = 0; i < m; ++i) {
    const auto& Pi = i < Q.size() ? Q[i] : ring.zero();
    M.A.c0(i, m - 1) = ring.add(M.A.c0(i, m - 1), ring.neg(ring.mul(ring.mul(tm, ring.from_int(static_cast<long>(i))), Pi)));
    M.A.c1(i, m - 1) = ring.add(M.A.c1(i, m - 1), ring.mul(two, Pi));
  }
  for (std::size_t l = 0; l < n; ++l) {
    M.B.c0(l, m - 1) = ring.from_int(-1);
    M.d0.push_back(ring.mul(ev.x[l], d_const));
    M.d1.push_back(ring.mul(ev.x[l], neg_two));
  }
  return M;
}

// M_V(t) as a block matrix linear in t.
template <class R>
BlockLinMat<R> vert_matrix(const R& ring, const BezoutData<R>& bez, const EvalSet<R>& ev) {
  const std::size_t m = bez.S.size(), n = ev.size();
  const auto two = ring.from_int(2);
  BlockLinMat<R> M{LinMat<R>(ring, m, m), LinMat<R>(ring, n, m), {}, {}};
  auto coeff = [&](const Poly<R>& f, std::size_t j) { return j < f.size() ? f[j] : ring.zero(); };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto r = coeff(bez.Rp[i], j);
      const auto sp = coeff(bez.Sprime[i], j);
      // (2t-1) r + 2 s'
      M.A.c0(j, i) = ring.add(ring.neg(r), ring.mul(two, sp));
      M.A.c1(j, i) = ring.mul(two, r);
    }
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < m; ++i) M.B.c0(l, i) = ring.neg(ev.S[l][i]);
    M.d0.push_back(ring.neg(ev.yinv2[l]));
    M.d1.push_back(ring.mul(two, ev.yinv2[l]));
  }
  return M;
}

// Scales evaluation slot l by y_l^power, power in {2, -1, -2}.
template <class R>
void apply_correction(const R& ring, std::vector<typename R::Elem>& evals, const EvalSet<R>& ev, int power) {
  for (std::size_t l = 0; l < evals.size(); ++l) {
    switch (power) {
      case 2: evals[l] = ring.mul(evals[l], ev.y2[l]); break;
      case -1: evals[l] = ring.mul(evals[l], ev.yinv[l]); break;
      case -2: evals[l] = ring.mul(evals[l], ev.yinv2[l]); break;
      case 1: evals[l] = ring.mul(evals[l], ev.y[l]); break;
      default: throw std::invalid_argument("apply_correction: unsupported power");
    }
  }
}

}  // namespace coleman
