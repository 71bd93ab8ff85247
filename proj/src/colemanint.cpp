#include "coleman/colemanint.hpp"

#include <algorithm>
#include <stdexcept>

namespace coleman {

namespace {

mpz_class ppow(const mpz_class& p, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(std::max(0L, e)));
  return r;
}

int floor_log(const mpz_class& p, long n) {
  int k = 0;
  mpz_class q = p;
  while (q <= n) {
    ++k;
    q *= p;
  }
  return k;
}

// u^{m+1}/(m+1) with v(u) >= 1 can affect the result mod p^N.
bool term_needed(long m, const mpz_class& p, int N) { return (m + 1) - floor_log(p, m + 1) < N; }

long last_needed_term(const mpz_class& p, int N) {
  long m = -1;
  for (long k = 0; k < 4L * N + 8; ++k)
    if (term_needed(k, p, N)) m = k;
  return m;
}

using Series = std::vector<mpz_class>;

Series series_mul(const GmpRing& R, const Series& a, const Series& b, std::size_t len) {
  Series c(len, 0);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
  }
  return c;
}

// Coefficients of Q(x0 + u) in u.
Series taylor_shift(const GmpRing& R, const Poly<GmpRing>& Q, const mpz_class& x0) {
  Series out(Q.size(), 0);
  // Horner in the polynomial ring: acc = acc*(x0 + u) + Q_i
  for (std::size_t i = Q.size(); i-- > 0;) {
    Series next(Q.size(), 0);
    for (std::size_t k = 0; k < Q.size(); ++k) {
      if (sgn(out[k]) == 0) continue;
      next[k] = R.add(next[k], R.mul(out[k], x0));
      if (k + 1 < Q.size()) next[k + 1] = R.add(next[k + 1], out[k]);
    }
    next[0] = R.add(next[0], Q[i]);
    out = std::move(next);
  }
  return out;
}

mpz_class hensel_sqrt(const GmpRing& R, const mpz_class& a, const mpz_class& seed) {
  mpz_class y = R.from_mpz(seed);
  for (int prec = 1; prec < 2 * R.exponent() + 2; prec *= 2) {
    // y <- y - (y^2 - a) / (2y)
    mpz_class num = R.sub(R.mul(y, y), a);
    y = R.sub(y, R.mul(num, invert_unit(R, R.add(y, y))));
  }
  return y;
}

// Root of Q(x) = target near x0 with Q'(x0) a unit.
mpz_class newton_root(const GmpRing& R, const Poly<GmpRing>& Q, const mpz_class& target, const mpz_class& x0) {
  Poly<GmpRing> dQ = derivative(R, Q);
  mpz_class x = R.from_mpz(x0);
  for (int prec = 1; prec < 2 * R.exponent() + 2; prec *= 2) {
    mpz_class f = R.sub(poly_eval(R, Q, x), target);
    x = R.sub(x, R.mul(f, invert_unit(R, poly_eval(R, dQ, x))));
  }
  return x;
}

// sum over included m of a_m d^{m+1}/(m+1), mod p^N.
mpz_class integrate_series(const GmpRing& R, const Series& a, const mpz_class& d, int N, long stride = 1) {
  const mpz_class& p = R.prime();
  const mpz_class pN = ppow(p, N);
  mpz_class total = 0;
  for (std::size_t m = 0; m < a.size(); m += static_cast<std::size_t>(stride)) {
    const long k = static_cast<long>(m) + 1;
    if (!term_needed(static_cast<long>(m), p, N)) continue;
    mpz_class dk;
    mpz_powm_ui(dk.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(k), R.modulus().get_mpz_t());
    mpz_class kk = k;
    int v = 0;
    while (mpz_divisible_p(kk.get_mpz_t(), p.get_mpz_t())) {
      kk /= p;
      ++v;
    }
    const mpz_class pv = ppow(p, v);
    if (!mpz_divisible_p(dk.get_mpz_t(), pv.get_mpz_t()))
      throw PrecisionViolation("tiny integral: term not divisible by its denominator");
    mpz_class term = (dk / pv) * a[m], inv;
    mpz_invert(inv.get_mpz_t(), kk.get_mpz_t(), pN.get_mpz_t());
    total += term * inv;
  }
  return mpz_class(((total % pN) + pN) % pN);
}

mpz_class bareiss_det(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t r = k + 1;
      while (r < n && sgn(a[r][k]) == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<std::vector<mpz_class>> system_matrix(const ColemanData& data) {
  const std::size_t n = data.frobenius.size();
  std::vector<std::vector<mpz_class>> A(n, std::vector<mpz_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = data.frobenius[j][i] - (i == j ? 1 : 0);
  return A;
}

bool same_residue(const mpz_class& a, const mpz_class& b, const mpz_class& p) {
  return mpz_congruent_p(a.get_mpz_t(), b.get_mpz_t(), p.get_mpz_t()) != 0;
}

}  // namespace

PointMod lift_point(const Curve& c, const RationalPoint& P, int exponent) {
  if (P.at_infinity) return PointMod{0, 0, true};
  for (const auto* q : {&P.x, &P.y})
    if (mpz_divisible_p(q->get_den().get_mpz_t(), c.p.get_mpz_t()))
      throw InvalidPoint("point coordinate " + q->get_str() + " is not p-integral");
  GmpRing R(c.p, exponent);
  GmpRing F(c.p, 1);
  Poly<GmpRing> Q = curve_poly(R, c);
  mpz_class x = from_rational(R, P.x), y = from_rational(R, P.y);
  if (F.from_mpz(R.mul(y, y)) != F.from_mpz(poly_eval(R, Q, x)))
    throw InvalidPoint("point (" + P.x.get_str() + ", " + P.y.get_str() + ") does not satisfy y^2 = Q(x) mod p");
  if (F.from_mpz(y) != 0) {
    y = hensel_sqrt(R, poly_eval(R, Q, x), y);
  } else {
    x = newton_root(R, Q, R.mul(y, y), x);
  }
  return PointMod{x, y, false};
}

Disk classify_disk(const Curve& c, const PointMod& P, int exponent) {
  Disk d;
  if (P.at_infinity) return d;
  d.xbar = P.x % c.p;
  d.ybar = P.y % c.p;
  if (sgn(d.ybar) != 0) {
    d.kind = DiskKind::NonWeierstrass;
    return d;
  }
  d.kind = DiskKind::WeierstrassFinite;
  GmpRing R(c.p, exponent);
  d.root = newton_root(R, curve_poly(R, c), 0, P.x);
  return d;
}

PointMod teichmuller(const Curve& c, const PointMod& P, int exponent) {
  if (P.at_infinity) throw WeierstrassDisk("the point at infinity has no Teichmuller point");
  if (mpz_divisible_p(P.y.get_mpz_t(), c.p.get_mpz_t()))
    throw WeierstrassDisk("point lies in a Weierstrass residue disk");
  GmpRing R(c.p, exponent);
  mpz_class x = P.x % c.p;
  for (int i = 0; i < exponent; ++i) mpz_powm(x.get_mpz_t(), x.get_mpz_t(), c.p.get_mpz_t(), R.modulus().get_mpz_t());
  mpz_class y = hensel_sqrt(R, poly_eval(R, curve_poly(R, c), x), P.y % c.p);
  return PointMod{x, y, false};
}

int tiny_exponent(const Curve& c) {
  const long m = last_needed_term(c.p, c.N);
  return c.N + 1 + (m >= 0 ? floor_log(c.p, m + 1) : 0);
}

std::vector<mpz_class> tiny_integrals(const Curve& c, const PointMod& P, const PointMod& Q, int exponent) {
  const std::size_t G2 = static_cast<std::size_t>(2 * c.genus);
  std::vector<mpz_class> out(G2, 0);
  Disk dp = classify_disk(c, P, exponent), dq = classify_disk(c, Q, exponent);
  if (dp.kind != dq.kind || dp.xbar != dq.xbar || dp.ybar != dq.ybar)
    throw DifferentDisks("tiny integral endpoints lie in different residue disks");
  if (dp.kind == DiskKind::Infinity) return out;
  GmpRing R(c.p, exponent);
  Poly<GmpRing> Qp = curve_poly(R, c);
  const long last = last_needed_term(c.p, c.N);
  if (last < 0) return out;
  const std::size_t T = static_cast<std::size_t>(last) + 1;

  if (dp.kind == DiskKind::NonWeierstrass) {
    // y(u)^2 = Q(x_P + u), y(0) = y_P
    Series F = taylor_shift(R, Qp, P.x);
    F.resize(std::max(F.size(), T), 0);
    Series y(T, 0), yinv(T, 0);
    y[0] = P.y;
    const mpz_class inv2y = invert_unit(R, R.add(P.y, P.y));
    for (std::size_t m = 1; m < T; ++m) {
      mpz_class s = F[m];
      for (std::size_t k = 1; k < m; ++k) s = R.sub(s, R.mul(y[k], y[m - k]));
      y[m] = R.mul(s, inv2y);
    }
    yinv[0] = invert_unit(R, P.y);
    for (std::size_t m = 1; m < T; ++m) {
      mpz_class s = 0;
      for (std::size_t k = 1; k <= m; ++k) s = R.add(s, R.mul(y[k], yinv[m - k]));
      yinv[m] = R.neg(R.mul(s, yinv[0]));
    }
    const mpz_class half = invert_unit(R, R.from_int(2));
    Series base = yinv;
    for (auto& v : base) v = R.mul(v, half);  // 1/(2y)
    const mpz_class delta = R.sub(Q.x, P.x);
    Series xi{R.one()};
    for (std::size_t i = 0; i < G2; ++i) {
      out[i] = integrate_series(R, series_mul(R, xi, base, T), delta, c.N);
      xi = series_mul(R, xi, Series{P.x, R.one()}, T);
    }
    return out;
  }

  // Weierstrass disk: x = a + W(y^2) with Q(a + W(z)) = z; integrate
  // (a + W(z))^i W'(z) dy in y.
  const mpz_class a = dp.root;
  Series F = taylor_shift(R, Qp, a);
  const std::size_t Tz = T / 2 + 2;
  const mpz_class f1inv = invert_unit(R, F[1]);
  Series W(Tz, 0);
  for (std::size_t it = 0; it < Tz; ++it) {
    Series rhs(Tz, 0);
    if (Tz > 1) rhs[1] = R.one();
    Series Wk = W;  // W^m
    for (std::size_t m = 2; m < F.size(); ++m) {
      Wk = series_mul(R, Wk, W, Tz);
      for (std::size_t k = 0; k < Tz; ++k) rhs[k] = R.sub(rhs[k], R.mul(F[m], Wk[k]));
    }
    for (auto& v : rhs) v = R.mul(v, f1inv);
    W = std::move(rhs);
  }
  Series dW(Tz, 0);
  for (std::size_t k = 1; k < Tz; ++k) dW[k - 1] = R.mul(W[k], R.from_int(static_cast<long>(k)));
  Series xs = W;
  xs[0] = R.add(xs[0], a);
  Series xi{R.one()};
  for (std::size_t i = 0; i < G2; ++i) {
    Series hz = series_mul(R, xi, dW, Tz);
    // spread z^n to y^{2n}
    Series hy(2 * Tz, 0);
    for (std::size_t n = 0; n < Tz; ++n) hy[2 * n] = hz[n];
    hy.resize(std::min(hy.size(), T));
    mpz_class vq = integrate_series(R, hy, Q.y, c.N, 2);
    mpz_class vp = integrate_series(R, hy, P.y, c.N, 2);
    const mpz_class pN = ppow(c.p, c.N);
    out[i] = ((vq - vp) % pN + pN) % pN;
    xi = series_mul(R, xi, xs, Tz);
  }
  return out;
}

int det_valuation(const ColemanData& data) {
  mpz_class d = bareiss_det(system_matrix(data));
  return valuation_mpz(d, data.p, data.N);
}

std::vector<PadicValue> solve_frobenius_system(const ColemanData& data, const std::vector<mpz_class>& rhs) {
  const auto A = system_matrix(data);
  const std::size_t n = A.size();
  const mpz_class pN = ppow(data.p, data.N);
  mpz_class D = bareiss_det(A);
  const int h = valuation_mpz(D, data.p, data.N);
  if (h >= data.N)
    throw SingularSystem("det(M - I) vanishes to precision p^" + std::to_string(data.N) +
                         "; rerun with a larger N (e.g. --auto-bump-precision)");
  mpz_class u = D / ppow(data.p, h), uinv;
  u = ((u % pN) + pN) % pN;
  mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), pN.get_mpz_t());
  std::vector<PadicValue> out;
  for (std::size_t k = 0; k < n; ++k) {
    auto Ak = A;
    for (std::size_t i = 0; i < n; ++i) Ak[i][k] = rhs[i];
    mpz_class Dk = bareiss_det(Ak) % pN;
    out.push_back(PadicValue::make(Dk * uinv, h, data.N - h, data.p));
  }
  return out;
}

IntegralResult integrals_to_infinity(const Curve& c, const ColemanData& data, const RationalPoint& P) {
  const std::size_t G2 = static_cast<std::size_t>(2 * c.genus);
  const int N = data.N;
  IntegralResult res;
  res.abs_prec = N;
  if (P.at_infinity) {
    res.values.assign(G2, PadicValue::make(0, 0, N, c.p));
    return res;
  }
  const int e = std::max(tiny_exponent(c), N + 1);
  PointMod Pm = lift_point(c, P, e);
  Disk disk = classify_disk(c, Pm, e);
  if (disk.kind == DiskKind::WeierstrassFinite) {
    PointMod Wp{disk.root, 0, false};
    auto tiny = tiny_integrals(c, Pm, Wp, e);
    for (const auto& v : tiny) res.values.push_back(PadicValue::make(v, 0, N, c.p));
    return res;
  }
  PointMod T = teichmuller(c, Pm, e);
  std::size_t idx = data.points.size();
  for (std::size_t l = 0; l < data.points.size(); ++l)
    if (!data.points[l].at_infinity && same_residue(data.points[l].x, T.x, c.p) &&
        same_residue(data.points[l].y, T.y, c.p))
      idx = l;
  if (idx == data.points.size())
    throw InvalidPoint("no Coleman data for the residue disk of (" + P.x.get_str() + ", " + P.y.get_str() + ")");
  std::vector<mpz_class> rhs(G2);
  for (std::size_t i = 0; i < G2; ++i) rhs[i] = data.evaluations[i][idx];
  auto v = solve_frobenius_system(data, rhs);
  auto tiny = tiny_integrals(c, Pm, T, e);
  for (std::size_t i = 0; i < G2; ++i) res.values.push_back(add(v[i], PadicValue::make(tiny[i], 0, N, c.p), c.p));
  res.abs_prec = v.empty() ? N : v[0].abs_prec;
  return res;
}

IntegralResult integrate(const Curve& c, const ColemanData& data, const RationalPoint& P, const RationalPoint& Q) {
  IntegralResult a = integrals_to_infinity(c, data, P), b = integrals_to_infinity(c, data, Q);
  IntegralResult r;
  r.abs_prec = std::min(a.abs_prec, b.abs_prec);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    r.values.push_back(with_precision(sub(a.values[i], b.values[i], c.p), r.abs_prec, c.p));
  return r;
}

PadicValue combine(const IntegralResult& r, const std::vector<mpq_class>& coeffs, const mpz_class& p) {
  if (coeffs.size() != r.values.size()) throw std::invalid_argument("combine: coefficient count mismatch");
  PadicValue acc = PadicValue::make(0, 0, r.abs_prec, p);
  for (std::size_t i = 0; i < coeffs.size(); ++i) acc = add(acc, scale(r.values[i], coeffs[i], p), p);
  return acc;
}

std::vector<PointMod> teichmuller_points(const Curve& c, const std::vector<RationalPoint>& pts) {
  std::vector<PointMod> out;
  const int W = c.N + 1;
  for (const auto& P : pts) {
    if (P.at_infinity) continue;
    PointMod Pm = lift_point(c, P, W);
    if (classify_disk(c, Pm, W).kind != DiskKind::NonWeierstrass) continue;
    PointMod T = teichmuller(c, Pm, W);
    bool seen = false;
    for (const auto& U : out) seen = seen || (same_residue(U.x, T.x, c.p) && same_residue(U.y, T.y, c.p));
    if (!seen) out.push_back(T);
  }
  return out;
}

IntegrationRun integrate_pairs(const Curve& c, const std::vector<std::pair<RationalPoint, RationalPoint>>& pairs,
                               const IntegrateOptions& opt) {
  std::vector<RationalPoint> pts;
  for (const auto& [P, Q] : pairs) {
    pts.push_back(P);
    pts.push_back(Q);
  }
  IntegrationRun run{c, {}, {}};
  const int target = c.N;
  for (;;) {
    auto T = teichmuller_points(run.curve, pts);
    run.data = opt.naive ? coleman_data_naive(run.curve, T, opt.data) : coleman_data(run.curve, T, opt.data);
    if (!opt.auto_bump) break;
    const int h = det_valuation(run.data);
    if (run.data.N - h >= target || h == 0) break;
    const int next = target + h > run.curve.N ? target + h : run.curve.N + 1;
    if (c.p <= static_cast<long>(2 * next - 1) * (2 * c.genus + 1))
      throw SingularSystem("raising N to " + std::to_string(next) + " would violate p > (2N-1)(2g+1)");
    run.curve = run.curve.with_precision(next);
  }
  for (const auto& [P, Q] : pairs) run.results.push_back(integrate(run.curve, run.data, P, Q));
  return run;
}

}  // namespace coleman
