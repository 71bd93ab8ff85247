#include "coleman/verify.hpp"

#include <stdexcept>

namespace coleman {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Fq = std::vector<u64>;  // element of F_p[x]/(f), k coefficients

struct SmallField {
  u64 p;
  int k;
  std::vector<u64> f;  // monic, degree k

  u64 mulp(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }

  Fq mul(const Fq& a, const Fq& b) const {
    std::vector<u64> t(2 * k - 1, 0);
    for (int i = 0; i < k; ++i)
      if (a[i])
        for (int j = 0; j < k; ++j) t[i + j] = (t[i + j] + mulp(a[i], b[j])) % p;
    for (int d = 2 * k - 2; d >= k; --d) {
      const u64 c = t[d];
      if (!c) continue;
      for (int i = 0; i < k; ++i) t[d - k + i] = (t[d - k + i] + p - mulp(c, f[i])) % p;
      t[d] = 0;
    }
    t.resize(k);
    return t;
  }
  Fq add(const Fq& a, const Fq& b) const {
    Fq r(k);
    for (int i = 0; i < k; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  Fq pow(Fq a, mpz_class e) const {
    Fq r(k, 0);
    r[0] = 1;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
};

// Polynomials over F_p, ascending, trimmed.
using SPoly = std::vector<u64>;

void trim(SPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 inv_mod(u64 a, u64 p) {
  mpz_class r, aa = static_cast<unsigned long>(a), pp = static_cast<unsigned long>(p);
  mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), pp.get_mpz_t());
  return r.get_ui();
}

SPoly poly_mod(SPoly a, const SPoly& m, u64 p) {
  trim(a);
  const u64 lead = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const u64 c = static_cast<u64>(static_cast<u128>(a.back()) * lead % p);
    const std::size_t off = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[off + i] = (a[off + i] + p - static_cast<u64>(static_cast<u128>(c) * m[i] % p)) % p;
    trim(a);
  }
  return a;
}

SPoly poly_gcd(SPoly a, SPoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    SPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^e) mod f
SPoly frob_power(const SmallField& F, int e) {
  Fq x(F.k, 0);
  if (F.k > 1) x[1] = 1;
  else x[0] = (F.p - F.f[0]) % F.p;
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), F.p, static_cast<unsigned long>(e));
  return F.pow(x, q);
}

bool is_irreducible(u64 p, const std::vector<u64>& f) {
  const int k = static_cast<int>(f.size()) - 1;
  SmallField F{p, k, f};
  SPoly xq = frob_power(F, k);
  SPoly x(static_cast<std::size_t>(k), 0);
  if (k > 1) x[1] = 1;
  else x[0] = (p - f[0]) % p;
  if (xq != x) return false;
  for (int q = 2; q <= k; ++q) {
    if (k % q != 0) continue;
    bool prime = true;
    for (int r = 2; r * r <= q; ++r) prime = prime && q % r != 0;
    if (!prime) continue;
    SPoly h = frob_power(F, k / q);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    SPoly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

mpz_class ppow(const mpz_class& p, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

mpz_class binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

std::vector<u64> irreducible_poly(u64 p, int k) {
  if (k == 1) return {0, 1};
  std::vector<u64> f(static_cast<std::size_t>(k) + 1, 0);
  f[static_cast<std::size_t>(k)] = 1;
  // enumerate lower coefficients as base-p counter
  for (;;) {
    if (f[0] != 0 && is_irreducible(p, f)) return f;
    std::size_t i = 0;
    while (i < static_cast<std::size_t>(k) && ++f[i] == p) f[i++] = 0;
    if (i == static_cast<std::size_t>(k)) throw std::runtime_error("no irreducible polynomial found");
  }
}

std::uint64_t point_count(const Curve& c, int k) {
  if (!c.p.fits_ulong_p()) throw std::invalid_argument("point_count: p too large");
  const u64 p = c.p.get_ui();
  mpz_class q = ppow(c.p, k);
  if (q > 100000000) throw std::invalid_argument("point_count: field too large to enumerate");
  SmallField F{p, k, irreducible_poly(p, k)};
  std::vector<Fq> Q;
  for (const auto& a : c.Q) {
    mpz_class num = a.get_num() % c.p, den = a.get_den(), inv;
    if (num < 0) num += c.p;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), c.p.get_mpz_t());
    Fq e(k, 0);
    e[0] = mpz_class(num * inv % c.p).get_ui();
    Q.push_back(e);
  }
  const mpz_class half = (q - 1) / 2;
  const u64 total = q.get_ui();
  u64 count = 1;
  Fq x(k, 0);
  for (u64 n = 0; n < total; ++n) {
    u64 m = n;
    for (int i = 0; i < k; ++i) {
      x[i] = m % p;
      m /= p;
    }
    Fq v = Q.back();
    for (std::size_t i = Q.size() - 1; i-- > 0;) v = F.add(F.mul(v, x), Q[i]);
    bool zero = true;
    for (u64 d : v) zero = zero && d == 0;
    if (zero) {
      count += 1;
      continue;
    }
    Fq chi = F.pow(v, half);
    bool one = chi[0] == 1;
    for (int i = 1; i < k; ++i) one = one && chi[i] == 0;
    if (one) count += 2;
  }
  return count;
}

std::vector<mpz_class> frobenius_charpoly(const ColemanData& data) {
  const std::size_t n = data.frobenius.size();
  const mpz_class m = ppow(data.p, data.N);
  auto red = [&](mpz_class v) {
    v %= m;
    if (v < 0) v += m;
    return v;
  };
  using Mat = std::vector<std::vector<mpz_class>>;
  const Mat& A = data.frobenius;
  auto mul = [&](const Mat& X, const Mat& Y) {
    Mat Z(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) Z[i][j] += X[i][l] * Y[l][j];
    for (auto& row : Z)
      for (auto& v : row) v = red(v);
    return Z;
  };
  // Faddeev-LeVerrier; the divisions by k <= 2g are by units since p > 2g.
  std::vector<mpz_class> c(n + 1, 0);
  c[0] = 1;
  Mat Mk(n, std::vector<mpz_class>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) Mk[i][i] += c[k - 1];
    Mat AM = mul(A, Mk);
    mpz_class tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AM[i][i];
    mpz_class inv, kk = static_cast<unsigned long>(k);
    mpz_invert(inv.get_mpz_t(), kk.get_mpz_t(), m.get_mpz_t());
    c[k] = red(-tr * inv);
    Mk = std::move(AM);
  }
  return c;
}

std::vector<mpz_class> lpoly_from_counts(const mpz_class& p, int g, const std::vector<u64>& counts) {
  std::vector<mpq_class> s(static_cast<std::size_t>(g) + 1), e(static_cast<std::size_t>(g) + 1);
  for (int k = 1; k <= g; ++k) {
    mpz_class nk;
    mpz_import(nk.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &counts[static_cast<std::size_t>(k - 1)]);
    s[k] = mpq_class(ppow(p, k) + 1 - nk);
  }
  e[0] = 1;
  for (int k = 1; k <= g; ++k) {
    mpq_class acc = 0;
    for (int i = 1; i <= k; ++i) acc += ((i % 2) ? 1 : -1) * e[k - i] * s[i];
    e[k] = acc / k;
  }
  std::vector<mpz_class> a(static_cast<std::size_t>(2 * g) + 1);
  for (int k = 0; k <= g; ++k) {
    mpq_class v = (k % 2 ? -1 : 1) * e[k];
    if (v.get_den() != 1) throw std::runtime_error("point counts are inconsistent with an L-polynomial");
    a[k] = v.get_num();
  }
  for (int k = 0; k < g; ++k) a[2 * g - k] = ppow(p, g - k) * a[k];
  return a;
}

std::vector<mpz_class> counts_from_lpoly(const mpz_class& p, const std::vector<mpz_class>& a) {
  const int n = static_cast<int>(a.size()) - 1, g = n / 2;
  std::vector<mpz_class> e(a.size()), s(static_cast<std::size_t>(g) + 1), out;
  for (int i = 0; i <= n; ++i) e[i] = (i % 2 ? -1 : 1) * a[i];
  for (int k = 1; k <= g; ++k) {
    mpz_class acc = (k % 2 ? 1 : -1) * k * e[k];
    for (int i = 1; i < k; ++i) acc += (i % 2 ? 1 : -1) * e[i] * s[k - i];
    s[k] = acc;
    out.push_back(ppow(p, k) + 1 - s[k]);
  }
  return out;
}

ZetaReport zeta_consistency(const Curve& c, const ColemanData& data) {
  ZetaReport r;
  const int g = data.genus;
  const mpz_class m = ppow(data.p, data.N);
  r.charpoly = frobenius_charpoly(data);
  for (int k = 1; k <= g; ++k) r.counts.push_back(point_count(c, k));
  r.expected = lpoly_from_counts(data.p, g, r.counts);
  r.residues_match = true;
  for (std::size_t i = 0; i < r.charpoly.size(); ++i) {
    mpz_class d = (r.charpoly[i] - r.expected[i]) % m;
    r.residues_match = r.residues_match && d == 0;
  }
  r.fully_conclusive = true;
  std::vector<mpz_class> lifted(static_cast<std::size_t>(2 * g) + 1);
  for (int i = 0; i <= g; ++i) {
    // |a_i| <= C(2g,i) p^{i/2}: conclusive when p^{2N} > 4 C^2 p^i
    const mpz_class C = binom(2 * g, i);
    const bool ok = m * m > 4 * C * C * ppow(data.p, i);
    r.conclusive.push_back(ok);
    r.fully_conclusive = r.fully_conclusive && ok;
    mpz_class v = r.charpoly[static_cast<std::size_t>(i)];
    if (2 * v > m) v -= m;
    lifted[static_cast<std::size_t>(i)] = v;
  }
  if (r.fully_conclusive) {
    for (int i = 0; i < g; ++i) lifted[2 * g - i] = ppow(data.p, g - i) * lifted[i];
    r.lifted = lifted;
    r.lifted_counts = counts_from_lpoly(data.p, lifted);
    r.lifted_match = true;
    for (int k = 0; k < g; ++k) {
      mpz_class nk;
      mpz_import(nk.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &r.counts[static_cast<std::size_t>(k)]);
      r.lifted_match = r.lifted_match && r.lifted_counts[static_cast<std::size_t>(k)] == nk;
    }
  }
  return r;
}

}  // namespace coleman
