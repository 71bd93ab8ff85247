#include <doctest.h>

#include "coleman/recprod.hpp"
#include "coleman/shift.hpp"
#include "oracles.hpp"

using namespace coleman;

namespace {

using ZMat = std::vector<std::vector<mpz_class>>;

template <class R>
ZMat to_z(const R& ring, const Matrix<R>& m) {
  ZMat out(m.rows, std::vector<mpz_class>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out[i][j] = ring.to_mpz(m(i, j));
  return out;
}

ZMat zmatmul(const ZMat& a, const ZMat& b, const mpz_class& m) {
  ZMat c(a.size(), std::vector<mpz_class>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  for (auto& row : c)
    for (auto& v : row) v = oracle::mod(v, m);
  return c;
}

// Left-to-right fold of dense evaluations M(a+1) ... M(b).
template <class R>
ZMat fold_oracle(const R& ring, const BlockLinMat<R>& M, long a, long b) {
  const std::size_t n = M.m() + M.n();
  ZMat acc(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) acc[i][i] = 1;
  for (long s = a + 1; s <= b; ++s) acc = zmatmul(acc, to_z(ring, M.eval(ring, ring.from_int(s)).dense(ring)), ring.modulus());
  return acc;
}

template <class R>
BlockLinMat<R> random_linmat(const R& ring, oracle::Gen& gen, std::size_t m, std::size_t n) {
  BlockLinMat<R> M{LinMat<R>(ring, m, m), LinMat<R>(ring, n, m), {}, {}};
  auto rnd = [&] { return ring.from_mpz(gen.below(ring.modulus())); };
  for (auto& v : M.A.c0.data) v = rnd();
  for (auto& v : M.A.c1.data) v = rnd();
  for (auto& v : M.B.c0.data) v = rnd();
  for (auto& v : M.B.c1.data) v = rnd();
  for (std::size_t i = 0; i < n; ++i) {
    M.d0.push_back(rnd());
    M.d1.push_back(rnd());
  }
  return M;
}

}  // namespace

TEST_CASE("shift: constants and linear functions") {
  GmpRing R(101, 2);
  auto c = shift_evaluations(R, std::vector<mpz_class>{42}, mpq_class(17), 5);
  for (const auto& v : c) CHECK(v == 42);
  auto lin = shift_evaluations(R, std::vector<mpz_class>{0, 1}, mpq_class(2), 2);
  CHECK(lin == std::vector<mpz_class>{2, 3});
}

TEST_CASE("shift: matches Lagrange interpolation over Q") {
  oracle::Gen gen(21);
  for (std::size_t d : {2, 5, 47, 48, 60, 200}) {
    MontRing<2> R(mpz_class("1000000007"), 3);
    // random integer polynomial of degree d, evaluated exactly
    oracle::QPoly f;
    for (std::size_t i = 0; i <= d; ++i) f.push_back(mpq_class(gen.uniform(-1000, 1000)));
    std::vector<MontRing<2>::Elem> vals;
    for (std::size_t j = 0; j <= d; ++j) vals.push_back(from_rational(R, oracle::qeval(f, mpq_class(static_cast<long>(j)))));
    for (mpq_class a : {mpq_class(d + 1), mpq_class(5, 3), mpq_class(-7, 2), mpq_class(1000)}) {
      const std::size_t M = d + 7;
      Shifter<MontRing<2>> sh(R, d, M);
      sh.set_shift(a);
      auto out = sh.apply(vals);
      bool ok = true;
      for (std::size_t i = 0; i < M; ++i)
        ok = ok && R.to_mpz(out[i]) == oracle::reduce(oracle::qeval(f, a + static_cast<long>(i)), R.modulus());
      CHECK(ok);
    }
  }
}

TEST_CASE("shift: non-unit denominators are rejected") {
  GmpRing R(11, 2);
  Shifter<GmpRing> sh(R, 3, 4);
  CHECK_THROWS_AS(sh.set_shift(mpq_class(9)), NonUnitDenominator);  // a - 3 + 5 = 11
  CHECK_THROWS_AS(Shifter<GmpRing>(R, 11, 2), NonUnitDenominator);
}

TEST_CASE("interval product: trivial intervals") {
  GmpRing R(101, 2);
  oracle::Gen gen(1);
  auto M = random_linmat(R, gen, 3, 2);
  CHECK(equal(R, interval_product_naive(R, M, 5, 5), BlockMat<GmpRing>::identity(R, 3, 2)));
  CHECK(equal(R, interval_product_naive(R, M, 5, 6), M.eval(R, R.from_int(6))));
  auto z = fold_oracle(R, M, 0, 10);
  CHECK(to_z(R, interval_product_naive(R, M, 0, 10).dense(R)) == z);
}

TEST_CASE("interval product: baby-step giant-step equals naive") {
  oracle::Gen gen(33);
  for (int it = 0; it < 40; ++it) {
    MontRing<1> R(1000003, 2);
    const std::size_t m = static_cast<std::size_t>(gen.uniform(1, 5)), n = static_cast<std::size_t>(gen.uniform(0, 3));
    auto M = random_linmat(R, gen, m, n);
    const long a = gen.uniform(0, 5000), len = gen.uniform(0, 3000);
    ProductOptions opt;
    opt.cutoff = static_cast<std::size_t>(gen.uniform(1, 64));
    opt.max_block = std::size_t{1} << gen.uniform(1, 6);
    ProductStats st;
    auto fast = interval_product(R, M, a, a + len, opt, &st);
    auto slow = interval_product_naive(R, M, a, a + len);
    CHECK(equal(R, fast, slow));
  }
}

TEST_CASE("interval product: small intervals against dense fold, several rings") {
  oracle::Gen gen(34);
  for (long k = 0; k <= 16; ++k) {
    GmpRing G(31, 3);
    auto M = random_linmat(G, gen, 3, 1);
    ProductOptions opt;
    opt.cutoff = 1;
    CHECK(to_z(G, interval_product(G, M, 0, k, opt).dense(G)) == fold_oracle(G, M, 0, k));
  }
  MontRing<4> R4(mpz_class("35184372088891"), 4);
  auto M4 = random_linmat(R4, gen, 2, 2);
  ProductOptions opt;
  opt.cutoff = 4;
  CHECK(equal(R4, interval_product(R4, M4, 100, 900, opt), interval_product_naive(R4, M4, 100, 900)));
}

TEST_CASE("interval product: intervals longer than p are split") {
  GmpRing R(101, 2);
  oracle::Gen gen(8);
  auto M = random_linmat(R, gen, 2, 1);
  ProductOptions opt;
  opt.cutoff = 4;
  CHECK(equal(R, interval_product(R, M, 3, 350, opt), interval_product_naive(R, M, 3, 350)));
}

TEST_CASE("interval products: batches, validation, and square-root growth") {
  MontRing<1> R(1000003, 2);
  oracle::Gen gen(5);
  auto M = random_linmat(R, gen, 4, 2);
  CHECK(interval_products(R, M, {}, ProductOptions{}).empty());
  CHECK_THROWS_AS(interval_products(R, M, {{10, 20}, {15, 30}}, ProductOptions{}), std::invalid_argument);

  std::vector<double> ops;
  for (long K : {10000L, 40000L, 160000L}) {
    std::vector<std::pair<mpz_class, mpz_class>> iv{{0, K}, {K + 5, 2 * K}, {3 * K, 4 * K}};
    ProductStats st;
    auto out = interval_products(R, M, iv, ProductOptions{}, &st);
    if (K == 10000L)
      for (std::size_t i = 0; i < iv.size(); ++i) CHECK(equal(R, out[i], interval_product_naive(R, M, iv[i].first, iv[i].second)));
    ops.push_back(static_cast<double>(st.ring_ops.load()));
  }
  // 4x longer intervals should cost about 2x, certainly well below 4x
  for (std::size_t i = 1; i < ops.size(); ++i) {
    const double ratio = ops[i] / ops[i - 1];
    CHECK(ratio > 1.3);
    CHECK(ratio < 3.2);
  }
}
