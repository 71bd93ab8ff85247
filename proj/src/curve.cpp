#include "coleman/curve.hpp"

#include <stdexcept>

namespace coleman {

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

Curve Curve::make(const mpz_class& p, int N, std::vector<mpq_class> Q) {
  if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_probable_prime(p))
    throw InvalidCurve("p = " + p.get_str() + " must be an odd prime");
  if (N < 1) throw InvalidCurve("N must be at least 1");
  if (Q.size() < 4 || Q.size() % 2 != 0)
    throw InvalidCurve("Q must have odd degree 2g+1 >= 3 (got " + std::to_string(Q.size()) + " coefficients)");
  if (Q.back() != 1) throw InvalidCurve("Q must be monic");
  for (const auto& a : Q)
    if (mpz_divisible_p(a.get_den().get_mpz_t(), p.get_mpz_t()))
      throw InvalidCurve("coefficient " + a.get_str() + " has p in its denominator");
  Curve c;
  c.p = p;
  c.N = N;
  c.genus = static_cast<int>(Q.size() - 2) / 2;
  c.Q = std::move(Q);
  const long bound = c.precision_bound();
  if (p <= bound)
    throw InvalidCurve("precision assumption violated: need p > (2N-1)(2g+1) = " + std::to_string(bound) +
                       ", got p = " + p.get_str());
  GmpRing fp(p, 1);
  try {
    (void)bezout(fp, curve_poly(fp, c));
  } catch (const NotSquarefree&) {
    throw NotSquarefree("Q is not squarefree modulo p = " + p.get_str());
  }
  return c;
}

}  // namespace coleman
