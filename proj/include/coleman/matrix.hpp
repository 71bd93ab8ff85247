#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace coleman {

// Dense row-major matrix over a ring backend.
template <class R>
struct Matrix {
  using Elem = typename R::Elem;
  std::size_t rows = 0, cols = 0;
  std::vector<Elem> data;

  Matrix() = default;
  Matrix(const R& ring, std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, ring.zero()) {}

  Elem& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Elem& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(const R& ring, std::size_t n) {
    Matrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
  }
};

template <class R>
bool equal(const R& ring, const Matrix<R>& a, const Matrix<R>& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (ring.to_mpz(a.data[i]) != ring.to_mpz(b.data[i])) return false;
  return true;
}

template <class R>
Matrix<R> mat_mul(const R& ring, const Matrix<R>& a, const Matrix<R>& b) {
  Matrix<R> c(ring, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const auto& aik = a(i, k);
      if (ring.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = ring.add(c(i, j), ring.mul(aik, b(k, j)));
    }
  return c;
}

template <class R>
std::vector<typename R::Elem> mat_vec(const R& ring, const Matrix<R>& a, const std::vector<typename R::Elem>& v) {
  std::vector<typename R::Elem> out(a.rows, ring.zero());
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) out[i] = ring.add(out[i], ring.mul(a(i, k), v[k]));
  return out;
}

// M(s) = c0 + s * c1, entry-wise.
template <class R>
struct LinMat {
  Matrix<R> c0, c1;

  LinMat() = default;
  LinMat(const R& ring, std::size_t r, std::size_t c) : c0(ring, r, c), c1(ring, r, c) {}

  std::size_t rows() const { return c0.rows; }
  std::size_t cols() const { return c0.cols; }

  Matrix<R> eval(const R& ring, const typename R::Elem& s) const {
    Matrix<R> m(ring, c0.rows, c0.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = ring.add(c0.data[i], ring.mul(c1.data[i], s));
    return m;
  }
};

// [[A, 0], [B, diag(d)]] with A m x m, B n x m.
template <class R>
struct BlockMat {
  Matrix<R> A, B;
  std::vector<typename R::Elem> d;

  std::size_t m() const { return A.rows; }
  std::size_t n() const { return d.size(); }

  static BlockMat identity(const R& ring, std::size_t m, std::size_t n) {
    return {Matrix<R>::identity(ring, m), Matrix<R>(ring, n, m), std::vector<typename R::Elem>(n, ring.one())};
  }

  Matrix<R> dense(const R& ring) const {
    Matrix<R> full(ring, m() + n(), m() + n());
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 0; j < m(); ++j) full(i, j) = A(i, j);
    for (std::size_t i = 0; i < n(); ++i) {
      for (std::size_t j = 0; j < m(); ++j) full(m() + i, j) = B(i, j);
      full(m() + i, m() + i) = d[i];
    }
    return full;
  }
};

template <class R>
BlockMat<R> block_mul(const R& ring, const BlockMat<R>& x, const BlockMat<R>& y) {
  BlockMat<R> z;
  z.A = mat_mul(ring, x.A, y.A);
  z.B = mat_mul(ring, x.B, y.A);
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.m(); ++j) z.B(i, j) = ring.add(z.B(i, j), ring.mul(x.d[i], y.B(i, j)));
  z.d.resize(x.n());
  for (std::size_t i = 0; i < x.n(); ++i) z.d[i] = ring.mul(x.d[i], y.d[i]);
  return z;
}

template <class R>
bool equal(const R& ring, const BlockMat<R>& a, const BlockMat<R>& b) {
  if (!equal(ring, a.A, b.A) || !equal(ring, a.B, b.B) || a.d.size() != b.d.size()) return false;
  for (std::size_t i = 0; i < a.d.size(); ++i)
    if (ring.to_mpz(a.d[i]) != ring.to_mpz(b.d[i])) return false;
  return true;
}

// Applies [[A,0],[B,diag d]] to (top, bottom) in place.
template <class R>
void block_apply(const R& ring, const BlockMat<R>& x, std::vector<typename R::Elem>& top,
                 std::vector<typename R::Elem>& bottom) {
  std::vector<typename R::Elem> new_bottom(x.n(), ring.zero());
  for (std::size_t i = 0; i < x.n(); ++i) {
    typename R::Elem acc = ring.mul(x.d[i], bottom[i]);
    for (std::size_t j = 0; j < x.m(); ++j) acc = ring.add(acc, ring.mul(x.B(i, j), top[j]));
    new_bottom[i] = acc;
  }
  top = mat_vec(ring, x.A, top);
  bottom = std::move(new_bottom);
}

// Block matrix whose entries are linear in one variable.
template <class R>
struct BlockLinMat {
  LinMat<R> A, B;
  std::vector<typename R::Elem> d0, d1;

  std::size_t m() const { return A.rows(); }
  std::size_t n() const { return d0.size(); }

  BlockMat<R> eval(const R& ring, const typename R::Elem& s) const {
    BlockMat<R> out{A.eval(ring, s), B.eval(ring, s), std::vector<typename R::Elem>(d0.size())};
    for (std::size_t i = 0; i < d0.size(); ++i) out.d[i] = ring.add(d0[i], ring.mul(d1[i], s));
    return out;
  }
};

}  // namespace coleman
