#pragma once

// Slow reference computations and random generators shared by the tests.
// Nothing here calls into the library's arithmetic beyond plain mpz/mpq.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "coleman/colemanint.hpp"

namespace oracle {

using coleman::Curve;
using coleman::RationalPoint;

inline mpz_class pw(const mpz_class& p, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

inline mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  return r;
}

// a/b mod m by trial: the b-multiple of candidates (only for small m).
inline mpz_class inverse_by_search(const mpz_class& a, const mpz_class& m) {
  for (mpz_class x = 1; x < m; ++x)
    if (mod(a * x, m) == 1) return x;
  return 0;
}

inline mpz_class reduce(const mpq_class& q, const mpz_class& m) {
  mpz_class inv;
  mpz_class den = q.get_den();
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  return mod(q.get_num() * inv, m);
}

// binom(a, k) for rational a.
inline mpq_class binom(const mpq_class& a, int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
  return r;
}

using QPoly = std::vector<mpq_class>;

inline QPoly qmul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline QPoly qtrim(QPoly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline mpq_class qeval(const QPoly& a, const mpq_class& x) {
  mpq_class r = 0, xp = 1;
  for (const auto& c : a) {
    r += c * xp;
    xp *= x;
  }
  return r;
}

// Schoolbook product of integer polynomials mod m.
inline std::vector<mpz_class> zmul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                   const mpz_class& m) {
  if (a.empty() || b.empty()) return {};
  std::vector<mpz_class> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  for (auto& v : c) v = mod(v, m);
  return c;
}

// Solve A x = b over Q by Gaussian elimination; A square and invertible.
inline std::vector<mpq_class> qsolve(std::vector<std::vector<mpq_class>> A, std::vector<mpq_class> b) {
  const std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (A[r][c] == 0) ++r;
    std::swap(A[r], A[c]);
    std::swap(b[r], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || A[i][c] == 0) continue;
      mpq_class f = A[i][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= A[i][i];
  return b;
}

// A Q + B Q' = x^i over Q with deg A <= 2g-1, deg B <= 2g, by a linear solve.
inline std::pair<QPoly, QPoly> rational_bezout(const QPoly& Q, int i) {
  const int d = static_cast<int>(Q.size()) - 1;  // 2g+1
  QPoly dQ;
  for (int k = 1; k <= d; ++k) dQ.push_back(Q[k] * k);
  const int na = d - 1, nb = d;  // coefficient counts of A (deg <= d-2) and B (deg <= d-1)
  const int n = na + nb;         // unknowns; equations are coefficients of x^0..x^{2d-2}
  std::vector<std::vector<mpq_class>> M(static_cast<std::size_t>(2 * d - 1), std::vector<mpq_class>(n, 0));
  for (int a = 0; a < na; ++a)
    for (int k = 0; k <= d; ++k) M[a + k][a] += Q[k];
  for (int b = 0; b < nb; ++b)
    for (int k = 0; k < d; ++k) M[b + k][na + b] += dQ[k];
  std::vector<mpq_class> rhs(static_cast<std::size_t>(2 * d - 1), 0);
  rhs[i] = 1;
  // square system: 2d-1 equations, 2d-1 unknowns
  auto x = qsolve(M, rhs);
  QPoly A(x.begin(), x.begin() + na), B(x.begin() + na, x.end());
  return {qtrim(A), qtrim(B)};
}

// Elliptic curves y^2 = x^3 + a x + b over Q: the group law and the formal
// logarithm of the invariant differential dx / 2y.
struct EllPoint {
  mpq_class x, y;
  bool inf = false;
};

inline EllPoint ell_add(const EllPoint& P, const EllPoint& Q, const mpq_class& a) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  mpq_class l;
  if (P.x == Q.x) {
    if (P.y + Q.y == 0) return {0, 0, true};
    l = (3 * P.x * P.x + a) / (2 * P.y);
  } else {
    l = (Q.y - P.y) / (Q.x - P.x);
  }
  mpq_class x = l * l - P.x - Q.x;
  return {x, l * (P.x - x) - P.y, false};
}

inline EllPoint ell_mul(long m, const EllPoint& P, const mpq_class& a) {
  EllPoint R{0, 0, true};
  for (long i = 0; i < m; ++i) R = ell_add(R, P, a);
  return R;
}

// log(t) = int_0^t omega for t = -x/y, from w = t^3 + a t w^2 + b w^3
// (w = -1/y) and omega = -(1/2)(1 - t w'/w) dt.
inline mpq_class formal_log(const mpq_class& a, const mpq_class& b, const mpq_class& t, int terms) {
  const std::size_t D = static_cast<std::size_t>(terms) + 3;
  QPoly w(D + 1, 0);
  for (std::size_t it = 0; it < D; ++it) {
    QPoly w2 = qmul(w, w);
    w2.resize(D + 1);
    QPoly w3 = qmul(w2, w);
    w3.resize(D + 1);
    QPoly next(D + 1, 0);
    next[3] = 1;
    for (std::size_t k = 0; k < D; ++k) next[k + 1] += a * w2[k];
    for (std::size_t k = 0; k <= D; ++k) next[k] += b * w3[k];
    w = next;
  }
  QPoly u(w.begin() + 3, w.end());  // w = t^3 u
  QPoly inv(u.size(), 0);
  inv[0] = 1 / u[0];
  for (std::size_t n = 1; n < u.size(); ++n) {
    mpq_class s = 0;
    for (std::size_t k = 1; k <= n; ++k) s += u[k] * inv[n - k];
    inv[n] = -s / u[0];
  }
  QPoly tdu(u.size(), 0);
  for (std::size_t k = 0; k < u.size(); ++k) tdu[k] = u[k] * static_cast<long>(k);
  QPoly q = qmul(tdu, inv);  // t u'/u, so t w'/w = 3 + q
  q.resize(u.size());
  mpq_class L = 0, tp = t;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const mpq_class coeff = (k == 0 ? mpq_class(1) : mpq_class(0)) + q[k] / 2;
    L += coeff * tp / static_cast<long>(k + 1);
    tp *= t;
  }
  return L;
}

// Random source with the small generators the property tests need.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  mpz_class below(const mpz_class& m) {
    mpz_class r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 64) + mpz_class(static_cast<unsigned long>(rng()));
    return r % m;
  }
  bool coin() { return rng() & 1; }

  long prime_in(long lo, long hi) {
    for (;;) {
      long n = uniform(lo, hi);
      if (n > 2 && coleman::is_probable_prime(n)) return n;
    }
  }

  // Small rational with denominator prime to p.
  mpq_class rational(long p) {
    long den = 1;
    if (uniform(0, 3) == 0) {
      do den = uniform(2, 9);
      while (den % p == 0);
    }
    mpq_class q(uniform(-30, 30), den);
    q.canonicalize();
    return q;
  }

  // Random valid curve; retries until squarefree mod p.
  Curve curve(long p, int g, int N, bool rational_coeffs = true) {
    for (;;) {
      std::vector<mpq_class> Q;
      for (int i = 0; i <= 2 * g; ++i) Q.push_back(rational_coeffs ? rational(p) : mpq_class(uniform(0, p - 1)));
      Q.push_back(1);
      try {
        return Curve::make(p, N, Q);
      } catch (const coleman::NotSquarefree&) {
      }
    }
  }

  // Point with integer x in [0, p) and y^2 = Q(x) mod p, y nonzero; y is the
  // small square root so the point is only an approximation of a p-adic point.
  std::optional<RationalPoint> non_weierstrass_point(const Curve& c) {
    const long p = c.p.get_si();
    for (int tries = 0; tries < 200; ++tries) {
      long x = uniform(0, p - 1);
      mpz_class v = reduce(qeval(c.Q, mpq_class(x)), c.p);
      if (v == 0) continue;
      for (long y = 1; y < p; ++y)
        if (mod(mpz_class(y * y) - v, c.p) == 0) return RationalPoint{x, coin() ? y : -y, false};
    }
    return std::nullopt;
  }

  std::vector<RationalPoint> weierstrass_points(const Curve& c) {
    std::vector<RationalPoint> out;
    const long p = c.p.get_si();
    for (long x = 0; x < p; ++x)
      if (reduce(qeval(c.Q, mpq_class(x)), c.p) == 0) out.push_back(RationalPoint{x, 0, false});
    return out;
  }
};

}  // namespace oracle
