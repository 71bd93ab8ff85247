#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "coleman/poly.hpp"

namespace coleman {

// y^2 = Q(x), Q monic of degree 2g+1 with rational coefficients prime to p.
struct Curve {
  mpz_class p;
  int N = 1;
  int genus = 0;
  std::vector<mpq_class> Q;  // ascending, Q.back() == 1

  // Validates and builds; throws InvalidCurve / NotSquarefree.
  static Curve make(const mpz_class& p, int N, std::vector<mpq_class> Q);

  int working_exponent() const { return N + 1; }
  // (2N-1)(2g+1); p must exceed it.
  long precision_bound() const { return static_cast<long>(2 * N - 1) * (2 * genus + 1); }
  Curve with_precision(int newN) const { return make(p, newN, Q); }
};

// Parses "a/b", "-a", "a" into a canonical rational.
mpq_class parse_rational(const std::string& s);

template <class R>
Poly<R> curve_poly(const R& ring, const Curve& c) {
  Poly<R> q;
  for (const auto& a : c.Q) q.push_back(from_rational(ring, a));
  return q;
}

// A point as residues mod p^W; at_infinity marks the point at infinity.
struct PointMod {
  mpz_class x, y;
  bool at_infinity = false;
};

}  // namespace coleman
