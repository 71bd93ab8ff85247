#include <doctest.h>

#include "coleman/colemanint.hpp"
#include "coleman/verify.hpp"
#include "oracles.hpp"

using namespace coleman;

namespace {

std::vector<PointMod> random_points(oracle::Gen& gen, const Curve& c, int count) {
  std::vector<PointMod> pts;
  for (int i = 0; i < count; ++i)
    if (auto P = gen.non_weierstrass_point(c)) pts.push_back(lift_point(c, *P, c.working_exponent()));
  return pts;
}

}  // namespace

TEST_CASE("supersingular curve has trace 0") {
  Curve c = Curve::make(7, 1, {0, 1, 0, 1});
  CHECK(point_count(c, 1) == 8);
  auto d = coleman_data(c, {});
  CHECK(oracle::mod(d.frobenius[0][0] + d.frobenius[1][1], 7) == 0);
  CHECK(d.evaluations.size() == 2);
  CHECK(d.evaluations[0].empty());
}

TEST_CASE("curve validation") {
  CHECK_THROWS_AS(Curve::make(3, 1, {0, 1, 0, 1}), InvalidCurve);   // 3 <= (2-1)*3
  CHECK_THROWS_AS(Curve::make(9, 1, {0, 1, 0, 1}), InvalidCurve);   // not prime
  CHECK_THROWS_AS(Curve::make(11, 1, {0, 1, 0, 2}), InvalidCurve);  // not monic
  CHECK_THROWS_AS(Curve::make(11, 1, {0, 1, 1}), InvalidCurve);     // even degree
  CHECK_THROWS_AS(Curve::make(11, 1, {mpq_class(1, 11), 1, 0, 1}), InvalidCurve);
  CHECK_THROWS_AS(Curve::make(11, 1, {0, 0, 0, 1}), NotSquarefree);
  CHECK_THROWS_AS(Curve::make(11, 2, {0, 1, 0, 0, 0, 1}), InvalidCurve);  // 11 <= 3*5
  try {
    (void)Curve::make(13, 2, {1, 0, 0, 0, 0, 1});
  } catch (const InvalidCurve& e) {
    CHECK(std::string(e.what()).find("15") != std::string::npos);
  }
}

TEST_CASE("Frobenius block does not depend on evaluation points") {
  oracle::Gen gen(101);
  for (int it = 0; it < 6; ++it) {
    Curve c = gen.curve(gen.prime_in(17, 60), static_cast<int>(gen.uniform(1, 2)), 1);
    auto pts = random_points(gen, c, 3);
    auto a = coleman_data(c, {}), b = coleman_data(c, pts);
    CHECK(a.frobenius == b.frobenius);
    CHECK(b.evaluations[0].size() == pts.size());
  }
}

TEST_CASE("fast and naive paths agree, with primitive substitution checks") {
  oracle::Gen gen(202);
  for (int it = 0; it < 8; ++it) {
    const int g = static_cast<int>(gen.uniform(1, 3));
    const int N = static_cast<int>(gen.uniform(1, 2));
    const long bound = (2L * N - 1) * (2 * g + 1);
    Curve c = gen.curve(gen.prime_in(bound + 1, 101), g, N);
    auto pts = random_points(gen, c, static_cast<int>(gen.uniform(0, 3)));
    DataOptions o;
    o.products.cutoff = 4;
    o.check_primitives = true;
    DataStats sf, sn;
    auto fast = coleman_data(c, pts, o, &sf);
    auto naive = coleman_data_naive(c, pts, o, &sn);
    CHECK(fast.frobenius == naive.frobenius);
    CHECK(fast.evaluations == naive.evaluations);
    CHECK((pts.empty() || sn.primitive_checks.load() > 0));
    CHECK(sf.row_end_checks.load() > 0);
    CHECK(sf.valuation_one_divisions.load() > 0);
  }
}

TEST_CASE("threads and backends give identical data") {
  oracle::Gen gen(303);
  Curve c = gen.curve(53, 2, 2);
  auto pts = random_points(gen, c, 2);
  DataOptions base;
  base.products.cutoff = 4;
  auto ref = coleman_data(c, pts, base);
  DataOptions threaded = base;
  threaded.threads = 3;
  threaded.products.threads = 3;
  auto t = coleman_data(c, pts, threaded);
  CHECK(t.frobenius == ref.frobenius);
  CHECK(t.evaluations == ref.evaluations);
  DataOptions gmp = base;
  gmp.backend = Backend::Gmp;
  auto m = coleman_data(c, pts, gmp);
  CHECK(m.frobenius == ref.frobenius);
  CHECK(m.evaluations == ref.evaluations);
}

TEST_CASE("evaluation points must avoid Weierstrass disks") {
  Curve c = Curve::make(11, 1, {0, 1, 0, 1});
  CHECK_THROWS_AS(coleman_data(c, {PointMod{0, 0, false}}), NonWeierstrassRequired);
}

TEST_CASE("evaluations are primitives: f(P) - f(Q) is Frobenius-equivariant") {
  // For P, Q in one non-Weierstrass disk with Frobenius images phi(P), phi(Q):
  // f(Q) - f(P) = tiny(phi P, phi Q) - M^T tiny(P, Q) (all mod p^N).
  oracle::Gen gen(404);
  for (int it = 0; it < 6; ++it) {
    const int g = static_cast<int>(gen.uniform(1, 2));
    Curve c = gen.curve(gen.prime_in(23, 90), g, 2);
    auto P0 = gen.non_weierstrass_point(c);
    if (!P0) continue;
    const int e = std::max(tiny_exponent(c), c.N + 1);
    PointMod P = lift_point(c, *P0, e);
    // second point in the same disk: x + p
    PointMod Q = lift_point(c, RationalPoint{P0->x + c.p, P0->y, false}, e);
    // Frobenius lift: x -> x^p, y -> y^p sqrt(1 + (Q(x^p) - Q(x)^p)/Q(x)^p)
    GmpRing R(c.p, e);
    auto Qr = curve_poly(R, c);
    auto frob = [&](const PointMod& X) {
      mpz_class xp = power(R, X.x, c.p), yp = power(R, X.y, c.p);
      // Hensel: y with y^2 = Q(xp), y = yp mod p
      mpz_class y = yp;
      for (int k = 0; k < 8; ++k)
        y = R.sub(y, R.mul(R.sub(R.mul(y, y), poly_eval(R, Qr, xp)), invert_unit(R, R.add(y, y))));
      return PointMod{xp, y, false};
    };
    PointMod fP = frob(P), fQ = frob(Q);
    auto d = coleman_data(c, {PointMod{P.x % oracle::pw(c.p, 3), P.y % oracle::pw(c.p, 3), false},
                              PointMod{Q.x % oracle::pw(c.p, 3), Q.y % oracle::pw(c.p, 3), false}});
    auto tPQ = tiny_integrals(c, P, Q, e);
    auto tF = tiny_integrals(c, fP, fQ, e);
    const mpz_class pN = oracle::pw(c.p, c.N);
    for (int i = 0; i < 2 * g; ++i) {
      mpz_class rhs = tF[i];
      for (int r = 0; r < 2 * g; ++r) rhs -= d.frobenius[r][i] * tPQ[r];
      CHECK(oracle::mod(d.evaluations[i][1] - d.evaluations[i][0] - rhs, pN) == 0);
    }
  }
}
