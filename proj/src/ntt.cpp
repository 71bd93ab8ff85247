#include "coleman/ntt.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <mutex>
#include <stdexcept>

namespace coleman::ntt {

namespace {

struct PrimeInfo {
  std::uint64_t q;
  std::uint64_t g;
};

constexpr std::array<PrimeInfo, kNumPrimes> kPrimes{{
    {4611686009971671041ULL, 6},  {4611686007555751937ULL, 3},  {4611686004066091009ULL, 13},
    {4611686003260784641ULL, 11}, {4611685996013027329ULL, 7},  {4611685993060237313ULL, 3},
    {4611685989973229569ULL, 7},  {4611685984336084993ULL, 15}, {4611685982725472257ULL, 5},
    {4611685982322819073ULL, 5},  {4611685981383294977ULL, 3},  {4611685977759416321ULL, 7},
    {4611685976283021313ULL, 11}, {4611685975746150401ULL, 3},  {4611685961653288961ULL, 3},
    {4611685960847982593ULL, 3},  {4611685954405531649ULL, 3},  {4611685944339202049ULL, 3},
    {4611685943131242497ULL, 3},  {4611685942862807041ULL, 11}, {4611685942728589313ULL, 3},
    {4611685941520629761ULL, 6},  {4611685941117976577ULL, 3},  {4611685940849541121ULL, 11},
}};

// Twiddles for one prime, level k holding w^j (j < 2^k) for w of order 2^(k+1),
// with the quotients floor(w^j 2^64 / q) for Shoup multiplication. Levels are
// filled on demand and never move once built.
struct Tables {
  std::mutex mu;
  std::atomic<int> built{-1};
  std::array<std::vector<std::uint64_t>, kMaxLog> w, wq;
  std::array<std::uint64_t, kMaxLog + 1> inv_n{}, inv_nq{};  // (2^k)^{-1} and its quotient
};

std::array<Tables, kNumPrimes>& tables() {
  static std::array<Tables, kNumPrimes> t;
  return t;
}

const std::array<Field, kNumPrimes>& fields() {
  static const std::array<Field, kNumPrimes> f = [] {
    return std::array<Field, kNumPrimes>{
        Field(kPrimes[0].q),  Field(kPrimes[1].q),  Field(kPrimes[2].q),  Field(kPrimes[3].q),
        Field(kPrimes[4].q),  Field(kPrimes[5].q),  Field(kPrimes[6].q),  Field(kPrimes[7].q),
        Field(kPrimes[8].q),  Field(kPrimes[9].q),  Field(kPrimes[10].q), Field(kPrimes[11].q),
        Field(kPrimes[12].q), Field(kPrimes[13].q), Field(kPrimes[14].q), Field(kPrimes[15].q),
        Field(kPrimes[16].q), Field(kPrimes[17].q), Field(kPrimes[18].q), Field(kPrimes[19].q),
        Field(kPrimes[20].q), Field(kPrimes[21].q), Field(kPrimes[22].q), Field(kPrimes[23].q)};
  }();
  return f;
}

std::uint64_t shoup_quotient(std::uint64_t w, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(w) << 64) / q);
}

// w * x mod q up to one extra q: result in [0, 2q) for any 64-bit x.
inline std::uint64_t shoup_mul(std::uint64_t x, std::uint64_t w, std::uint64_t wq, std::uint64_t q) {
  const std::uint64_t hi = static_cast<std::uint64_t>((static_cast<unsigned __int128>(wq) * x) >> 64);
  return w * x - hi * q;
}

void ensure(std::size_t i, int logn) {
  Tables& t = tables()[i];
  if (t.built.load(std::memory_order_acquire) >= logn) return;
  std::lock_guard<std::mutex> lock(t.mu);
  int have = t.built.load(std::memory_order_relaxed);
  if (have >= logn) return;
  const Field& f = field(i);
  for (int k = have + 1; k <= logn; ++k) {
    if (k < kMaxLog) {
      const std::uint64_t wm = f.to_mont(f.pow(kPrimes[i].g, (f.q - 1) >> (k + 1)));
      const std::size_t h = std::size_t{1} << k;
      t.w[k].resize(h);
      t.wq[k].resize(h);
      std::uint64_t cur = f.to_mont(1);
      for (std::size_t j = 0; j < h; ++j) {
        t.w[k][j] = f.redc(cur);
        t.wq[k][j] = shoup_quotient(t.w[k][j], f.q);
        cur = f.mmul(cur, wm);
      }
    }
    t.inv_n[k] = f.inv(f.pow(2, static_cast<std::uint64_t>(k)));
    t.inv_nq[k] = shoup_quotient(t.inv_n[k], f.q);
  }
  t.built.store(logn, std::memory_order_release);
}

}  // namespace

Field::Field(std::uint64_t modulus) : q(modulus) {
  std::uint64_t inv = q;
  for (int i = 0; i < 6; ++i) inv *= 2 - q * inv;
  qneg_inv = ~inv + 1;
  unsigned __int128 r = (static_cast<unsigned __int128>(1) << 64) % q;
  r2 = static_cast<std::uint64_t>((r * r) % q);
}

std::uint64_t Field::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t base = to_mont(a % q);
  std::uint64_t acc = to_mont(1);
  while (e) {
    if (e & 1) acc = mmul(acc, base);
    base = mmul(base, base);
    e >>= 1;
  }
  return redc(acc);
}

std::uint64_t prime(std::size_t i) { return kPrimes.at(i).q; }

const Field& field(std::size_t i) { return fields()[i]; }

std::size_t primes_needed(const mpz_class& bound) {
  mpz_class prod = 1;
  for (std::size_t k = 0; k < kNumPrimes; ++k) {
    prod *= static_cast<unsigned long>(kPrimes[k].q);
    if (prod > bound) return k + 1;
  }
  throw std::length_error("ntt: convolution exceeds the capacity of the prime family");
}

int ceil_log2(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

// Both transforms keep values in [0, 2q) between stages (q < 2^62) and
// reduce to [0, q) at the end. Stages with short butterflies run block by
// block so that a block stays in cache across them.
constexpr int kBlockLog = 13;

void forward_stage(const Tables& t, std::uint64_t q, int k, std::uint64_t* a, std::size_t n) {
  const std::uint64_t q2 = 2 * q;
  const std::size_t h = std::size_t{1} << k;
  const std::uint64_t* w = t.w[k].data();
  const std::uint64_t* wq = t.wq[k].data();
  for (std::size_t s = 0; s < n; s += 2 * h) {
    std::uint64_t* x = a + s;
    std::uint64_t* y = a + s + h;
    for (std::size_t j = 0; j < h; ++j) {
      const std::uint64_t u = x[j], v = y[j];
      std::uint64_t sum = u + v;
      sum -= sum >= q2 ? q2 : 0;
      x[j] = sum;
      y[j] = shoup_mul(u - v + q2, w[j], wq[j], q);
    }
  }
}

void inverse_stage(const Tables& t, std::uint64_t q, int k, std::uint64_t* a, std::size_t n) {
  const std::uint64_t q2 = 2 * q;
  const std::size_t h = std::size_t{1} << k;
  const std::uint64_t* w = t.w[k].data();
  const std::uint64_t* wq = t.wq[k].data();
  for (std::size_t s = 0; s < n; s += 2 * h) {
    std::uint64_t* x = a + s;
    std::uint64_t* y = a + s + h;
    {
      const std::uint64_t u = x[0], v = y[0];
      std::uint64_t sum = u + v, diff = u - v + q2;
      x[0] = sum - (sum >= q2 ? q2 : 0);
      y[0] = diff - (diff >= q2 ? q2 : 0);
    }
    for (std::size_t j = 1; j < h; ++j) {
      // w^{-j} = -w^{h-j}; the quotient of q - w is the complement of w's
      const std::uint64_t u = x[j];
      const std::uint64_t v = shoup_mul(y[j], q - w[h - j], ~wq[h - j], q);
      std::uint64_t sum = u + v, diff = u - v + q2;
      x[j] = sum - (sum >= q2 ? q2 : 0);
      y[j] = diff - (diff >= q2 ? q2 : 0);
    }
  }
}

void forward(std::size_t i, std::uint64_t* a, int logn) {
  if (logn > kMaxLog) throw std::length_error("ntt: transform too long");
  ensure(i, logn);
  const Tables& t = tables()[i];
  const std::size_t n = std::size_t{1} << logn;
  const std::uint64_t q = field(i).q;
  const int blog = std::min(logn, kBlockLog);
  const std::size_t B = std::size_t{1} << blog;
  for (int k = logn - 1; k >= blog; --k) forward_stage(t, q, k, a, n);
  for (std::size_t s = 0; s < n; s += B)
    for (int k = blog - 1; k >= 0; --k) forward_stage(t, q, k, a + s, B);
  for (std::size_t j = 0; j < n; ++j) a[j] -= a[j] >= q ? q : 0;
}

void inverse(std::size_t i, std::uint64_t* a, int logn) {
  if (logn > kMaxLog) throw std::length_error("ntt: transform too long");
  ensure(i, logn);
  const Tables& t = tables()[i];
  const std::size_t n = std::size_t{1} << logn;
  const std::uint64_t q = field(i).q;
  const int blog = std::min(logn, kBlockLog);
  const std::size_t B = std::size_t{1} << blog;
  for (std::size_t s = 0; s < n; s += B)
    for (int k = 0; k < blog; ++k) inverse_stage(t, q, k, a + s, B);
  for (int k = blog; k < logn; ++k) inverse_stage(t, q, k, a, n);
  const std::uint64_t sc = t.inv_n[logn], scq = t.inv_nq[logn];
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t v = shoup_mul(a[j], sc, scq, q);
    a[j] = v - (v >= q ? q : 0);
  }
}

void pointwise(std::size_t i, std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  const Field& f = field(i);
  for (std::size_t j = 0; j < n; ++j) a[j] = f.mul(a[j], b[j]);
}

Garner::Garner(std::size_t k) : k_(k), inv_(k * k, 0) {
  if (k == 0 || k > kNumPrimes) throw std::invalid_argument("Garner: bad prime count");
  for (std::size_t i = 0; i < k; ++i) {
    const Field& f = field(i);
    for (std::size_t j = 0; j < i; ++j) inv_[j * k + i] = f.to_mont(f.inv(prime(j) % f.q));
  }
}

void Garner::digits(std::span<const std::uint64_t> residues, std::span<std::uint64_t> out) const {
  for (std::size_t i = 0; i < k_; ++i) {
    const Field& f = field(i);
    std::uint64_t x = residues[i];
    for (std::size_t j = 0; j < i; ++j) {
      std::uint64_t v = out[j];
      if (v >= f.q) v -= f.q;
      x = f.mmul(f.sub(x, v), inv_[j * k_ + i]);
    }
    out[i] = x;
  }
}

}  // namespace coleman::ntt
