#pragma once

// Fixed-size vector/matrix helpers over an arbitrary scalar (double or Jet).
// Matrices are row-major: m[row][col].

#include <array>
#include <cmath>
#include <cstddef>

namespace assocfam {

template <class S, std::size_t N>
using Vec = std::array<S, N>;

template <class S, std::size_t R, std::size_t C = R>
using Mat = std::array<std::array<S, C>, R>;

using Vec2 = Vec<double, 2>;
using Vec3 = Vec<double, 3>;
using Mat2 = Mat<double, 2>;
using Mat3 = Mat<double, 3>;

inline constexpr Mat2 kIdentity2{{{1.0, 0.0}, {0.0, 1.0}}};

template <class S, std::size_t R, std::size_t C>
Vec<S, R> mul(const Mat<S, R, C>& m, const Vec<S, C>& x) {
  Vec<S, R> out;
  for (std::size_t i = 0; i < R; ++i) {
    S acc = m[i][0] * x[0];
    for (std::size_t j = 1; j < C; ++j) acc = acc + m[i][j] * x[j];
    out[i] = acc;
  }
  return out;
}

template <class S, std::size_t R, std::size_t K, std::size_t C>
Mat<S, R, C> mul(const Mat<S, R, K>& a, const Mat<S, K, C>& b) {
  Mat<S, R, C> out;
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < C; ++j) {
      S acc = a[i][0] * b[0][j];
      for (std::size_t k = 1; k < K; ++k) acc = acc + a[i][k] * b[k][j];
      out[i][j] = acc;
    }
  }
  return out;
}

template <class S, std::size_t R, std::size_t C>
Mat<S, C, R> transpose(const Mat<S, R, C>& m) {
  Mat<S, C, R> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) out[j][i] = m[i][j];
  return out;
}

template <class S, std::size_t N>
Vec<S, N> operator+(const Vec<S, N>& a, const Vec<S, N>& b) {
  Vec<S, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + b[i];
  return out;
}

template <class S, std::size_t N>
Vec<S, N> operator-(const Vec<S, N>& a, const Vec<S, N>& b) {
  Vec<S, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] - b[i];
  return out;
}

template <class S, class T, std::size_t N>
Vec<S, N> scale(const T& s, const Vec<S, N>& a) {
  Vec<S, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] * s;
  return out;
}

template <class S, std::size_t R, std::size_t C>
Mat<S, R, C> operator+(const Mat<S, R, C>& a, const Mat<S, R, C>& b) {
  Mat<S, R, C> out;
  for (std::size_t i = 0; i < R; ++i) out[i] = a[i] + b[i];
  return out;
}

template <class S, std::size_t R, std::size_t C>
Mat<S, R, C> operator-(const Mat<S, R, C>& a, const Mat<S, R, C>& b) {
  Mat<S, R, C> out;
  for (std::size_t i = 0; i < R; ++i) out[i] = a[i] - b[i];
  return out;
}

template <class S, class T, std::size_t R, std::size_t C>
Mat<S, R, C> scale(const T& s, const Mat<S, R, C>& a) {
  Mat<S, R, C> out;
  for (std::size_t i = 0; i < R; ++i) out[i] = scale(s, a[i]);
  return out;
}

template <class S>
S det(const Mat<S, 2>& m) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

template <class S>
S trace(const Mat<S, 2>& m) {
  return m[0][0] + m[1][1];
}

template <class S>
S det(const Mat<S, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Inverse by cofactors. The caller guarantees det(m) != 0.
template <class S>
Mat<S, 2> inverse(const Mat<S, 2>& m) {
  const S inv_det = 1.0 / det(m);
  return {{{m[1][1] * inv_det, -(m[0][1] * inv_det)},
           {-(m[1][0] * inv_det), m[0][0] * inv_det}}};
}

template <class S>
Mat<S, 3> inverse(const Mat<S, 3>& m) {
  const S inv_det = 1.0 / det(m);
  Mat<S, 3> out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      out[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * inv_det;
    }
  }
  return out;
}

template <class S, std::size_t N>
S dot(const Vec<S, N>& a, const Vec<S, N>& b) {
  S acc = a[0] * b[0];
  for (std::size_t i = 1; i < N; ++i) acc = acc + a[i] * b[i];
  return acc;
}

/// Bilinear form x^T m y.
template <class S, std::size_t N>
S form(const Mat<S, N>& m, const Vec<S, N>& x, const Vec<S, N>& y) {
  return dot(x, mul(m, y));
}

inline double max_abs(const Mat2& m) {
  double r = 0.0;
  for (const auto& row : m)
    for (double x : row) r = std::fmax(r, std::fabs(x));
  return r;
}

/// Frobenius norm of a 2x2 matrix.
inline double frobenius(const Mat2& m) {
  return std::sqrt(m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] +
                   m[1][1] * m[1][1]);
}

/// Norm of a tangent vector with respect to a 2x2 metric.
inline double g_norm(const Mat2& g, const Vec2& x) {
  const double q = g[0][0] * x[0] * x[0] + 2.0 * g[0][1] * x[0] * x[1] +
                   g[1][1] * x[1] * x[1];
  return std::sqrt(std::fmax(q, 0.0));
}

inline double g_dot(const Mat2& g, const Vec2& x, const Vec2& y) {
  return x[0] * (g[0][0] * y[0] + g[0][1] * y[1]) +
         x[1] * (g[1][0] * y[0] + g[1][1] * y[1]);
}

}  // namespace assocfam
