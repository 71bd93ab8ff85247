#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "coleman/errors.hpp"
#include "coleman/padic.hpp"

namespace coleman {

// Dense polynomials, ascending coefficients. Trailing zeros are allowed.
template <class R>
using Poly = std::vector<typename R::Elem>;

template <class R>
int degree(const R& ring, const Poly<R>& a) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (!ring.is_zero(a[i])) return static_cast<int>(i);
  return -1;
}

template <class R>
Poly<R> trimmed(const R& ring, Poly<R> a) {
  a.resize(static_cast<std::size_t>(degree(ring, a) + 1));
  return a;
}

template <class R>
Poly<R> poly_add(const R& ring, const Poly<R>& a, const Poly<R>& b) {
  Poly<R> r(std::max(a.size(), b.size()), ring.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = ring.add(r[i], b[i]);
  return r;
}

template <class R>
Poly<R> poly_sub(const R& ring, const Poly<R>& a, const Poly<R>& b) {
  Poly<R> r(std::max(a.size(), b.size()), ring.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = ring.sub(r[i], b[i]);
  return r;
}

template <class R>
Poly<R> poly_scale(const R& ring, const Poly<R>& a, const typename R::Elem& c) {
  Poly<R> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = ring.mul(a[i], c);
  return r;
}

template <class R>
Poly<R> poly_mul(const R& ring, const Poly<R>& a, const Poly<R>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<R> r(a.size() + b.size() - 1, ring.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ring.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = ring.add(r[i + j], ring.mul(a[i], b[j]));
  }
  return r;
}

template <class R>
Poly<R> derivative(const R& ring, const Poly<R>& a) {
  if (a.size() <= 1) return {};
  Poly<R> r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = ring.mul(a[i], ring.from_int(static_cast<long>(i)));
  return r;
}

template <class R>
typename R::Elem poly_eval(const R& ring, const Poly<R>& a, const typename R::Elem& x) {
  typename R::Elem acc = ring.zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = ring.add(ring.mul(acc, x), a[i]);
  return acc;
}

// Quotient and remainder by a monic polynomial m.
template <class R>
std::pair<Poly<R>, Poly<R>> divrem_monic(const R& ring, const Poly<R>& a, const Poly<R>& m) {
  const int dm = degree(ring, m);
  Poly<R> rem = trimmed(ring, a);
  const int da = static_cast<int>(rem.size()) - 1;
  if (da < dm) return {Poly<R>{}, rem};
  Poly<R> quo(static_cast<std::size_t>(da - dm + 1), ring.zero());
  for (int k = da; k >= dm; --k) {
    typename R::Elem c = rem[static_cast<std::size_t>(k)];
    quo[static_cast<std::size_t>(k - dm)] = c;
    if (ring.is_zero(c)) continue;
    for (int j = 0; j <= dm; ++j) {
      auto idx = static_cast<std::size_t>(k - dm + j);
      rem[idx] = ring.sub(rem[idx], ring.mul(c, m[static_cast<std::size_t>(j)]));
    }
  }
  rem.resize(static_cast<std::size_t>(dm));
  return {quo, rem};
}

template <class R>
Poly<R> mod_monic(const R& ring, const Poly<R>& a, const Poly<R>& m) {
  return divrem_monic(ring, a, m).second;
}

// Exact division by a monic polynomial.
template <class R>
Poly<R> div_exact_monic(const R& ring, const Poly<R>& a, const Poly<R>& m) {
  auto [q, r] = divrem_monic(ring, a, m);
  if (degree(ring, r) >= 0) throw InexactDivision("polynomial division is not exact");
  return q;
}

// C[j][r] = coefficient of x^r in Q^j for 0 <= j <= jmax.
template <class R>
std::vector<Poly<R>> power_coeffs(const R& ring, const Poly<R>& Q, int jmax) {
  std::vector<Poly<R>> C;
  C.push_back(Poly<R>{ring.one()});
  for (int j = 1; j <= jmax; ++j) C.push_back(poly_mul(ring, C.back(), Q));
  return C;
}

namespace detail {

// Inverse of Q' modulo Q over F_p by the extended Euclidean algorithm.
inline std::vector<mpz_class> inverse_mod_p(const GmpRing& fp, const std::vector<mpz_class>& Q) {
  using P = Poly<GmpRing>;
  P dq = derivative(fp, Q);
  // invariant: r0 = s0 * Q' (mod Q), r1 = s1 * Q' (mod Q)
  P r0 = trimmed(fp, Q), r1 = trimmed(fp, dq);
  P s0{}, s1{fp.one()};
  while (degree(fp, r1) > 0) {
    mpz_class lead_inv = invert_unit(fp, r1.back());
    P r1m = poly_scale(fp, r1, lead_inv);
    auto [q, r] = divrem_monic(fp, r0, r1m);
    P q_scaled = poly_scale(fp, q, lead_inv);
    P s2 = poly_sub(fp, s0, poly_mul(fp, q_scaled, s1));
    r0 = std::move(r1);
    s0 = std::move(s1);
    r1 = trimmed(fp, r);
    s1 = trimmed(fp, s2);
  }
  if (degree(fp, r1) < 0) throw NotSquarefree("Q is not squarefree modulo p");
  return trimmed(fp, poly_scale(fp, s1, invert_unit(fp, r1[0])));
}

}  // namespace detail

template <class R>
struct Bezout {
  Poly<R> A, B;
};

// A*Q + B*Q' = 1 with deg A <= 2g-1, deg B <= 2g. Q must be monic.
template <class R>
Bezout<R> bezout(const R& ring, const Poly<R>& Q) {
  const int n = degree(ring, Q);
  if (n < 1) throw InvalidCurve("bezout: Q must have positive degree");
  GmpRing fp(ring.prime(), 1);
  std::vector<mpz_class> Qp(Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) Qp[i] = fp.from_mpz(ring.to_mpz(Q[i]));
  std::vector<mpz_class> B0 = detail::inverse_mod_p(fp, Qp);

  Poly<R> dq = derivative(ring, Q);
  Poly<R> B(B0.size());
  for (std::size_t i = 0; i < B0.size(); ++i) B[i] = ring.from_mpz(B0[i]);
  Poly<R> two{ring.from_int(2)};
  for (int prec = 1; prec < ring.exponent(); prec *= 2) {
    Poly<R> e = mod_monic(ring, poly_mul(ring, B, dq), Q);
    B = mod_monic(ring, poly_mul(ring, B, poly_sub(ring, two, e)), Q);
  }
  B = trimmed(ring, mod_monic(ring, B, Q));
  Poly<R> rest = poly_sub(ring, Poly<R>{ring.one()}, poly_mul(ring, B, dq));
  Poly<R> A = trimmed(ring, div_exact_monic(ring, rest, Q));
  return {A, B};
}

// Same pair from a direct linear solve of the Sylvester system mod p^W.
template <class R>
Bezout<R> bezout_linear(const R& ring, const Poly<R>& Q) {
  const int n = degree(ring, Q);  // 2g+1
  const int na = n - 1, nb = n;   // unknown counts: deg A <= n-2, deg B <= n-1
  const int size = na + nb;       // equations for x^0..x^{2n-2}
  Poly<R> dq = derivative(ring, Q);
  using E = typename R::Elem;
  std::vector<std::vector<E>> m(static_cast<std::size_t>(size), std::vector<E>(static_cast<std::size_t>(size + 1), ring.zero()));
  for (int k = 0; k < na; ++k)
    for (int j = 0; j <= n; ++j) m[static_cast<std::size_t>(j + k)][static_cast<std::size_t>(k)] = Q[static_cast<std::size_t>(j)];
  for (int k = 0; k < nb; ++k)
    for (int j = 0; j < n; ++j) m[static_cast<std::size_t>(j + k)][static_cast<std::size_t>(na + k)] = dq[static_cast<std::size_t>(j)];
  m[0][static_cast<std::size_t>(size)] = ring.one();
  for (int c = 0; c < size; ++c) {
    int piv = -1;
    for (int r = c; r < size; ++r)
      if (valuation(ring, m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) == 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw NotSquarefree("Sylvester system has no unit pivot");
    std::swap(m[static_cast<std::size_t>(c)], m[static_cast<std::size_t>(piv)]);
    auto& row = m[static_cast<std::size_t>(c)];
    E inv = invert_unit(ring, row[static_cast<std::size_t>(c)]);
    for (auto& v : row) v = ring.mul(v, inv);
    for (int r = 0; r < size; ++r) {
      if (r == c) continue;
      auto& other = m[static_cast<std::size_t>(r)];
      E f = other[static_cast<std::size_t>(c)];
      if (ring.is_zero(f)) continue;
      for (int k = c; k <= size; ++k)
        other[static_cast<std::size_t>(k)] = ring.sub(other[static_cast<std::size_t>(k)], ring.mul(f, row[static_cast<std::size_t>(k)]));
    }
  }
  Bezout<R> out;
  for (int k = 0; k < na; ++k) out.A.push_back(m[static_cast<std::size_t>(k)][static_cast<std::size_t>(size)]);
  for (int k = 0; k < nb; ++k) out.B.push_back(m[static_cast<std::size_t>(na + k)][static_cast<std::size_t>(size)]);
  out.A = trimmed(ring, out.A);
  out.B = trimmed(ring, out.B);
  return out;
}

// x^i = R_i Q + S_i Q' for 0 <= i <= 2g-1, with S_i' alongside.
template <class R>
struct BezoutData {
  Poly<R> A, B;
  std::vector<Poly<R>> Rp, S, Sprime;
};

template <class R>
std::pair<Poly<R>, Poly<R>> reduce_power(const R& ring, const Poly<R>& Q, const Bezout<R>& bz, int i) {
  Poly<R> xi(static_cast<std::size_t>(i + 1), ring.zero());
  xi[static_cast<std::size_t>(i)] = ring.one();
  Poly<R> S = trimmed(ring, mod_monic(ring, poly_mul(ring, xi, bz.B), Q));
  Poly<R> rest = poly_sub(ring, xi, poly_mul(ring, S, derivative(ring, Q)));
  Poly<R> Ri = trimmed(ring, div_exact_monic(ring, rest, Q));
  return {Ri, S};
}

template <class R>
BezoutData<R> bezout_data(const R& ring, const Poly<R>& Q) {
  const int g = (degree(ring, Q) - 1) / 2;
  Bezout<R> bz = bezout(ring, Q);
  BezoutData<R> d{bz.A, bz.B, {}, {}, {}};
  for (int i = 0; i < 2 * g; ++i) {
    auto [Ri, Si] = reduce_power(ring, Q, bz, i);
    d.Rp.push_back(Ri);
    d.Sprime.push_back(derivative(ring, Si));
    d.S.push_back(std::move(Si));
  }
  return d;
}

}  // namespace coleman
