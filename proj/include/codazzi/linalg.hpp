#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "codazzi/errors.hpp"

namespace codazzi {

// Dense row-major n x n matrices and length-n vectors. Everything here is
// sized for chart dimensions (n <= 8 or so); clarity and determinism beat
// asymptotics at that scale.

using Vec = std::vector<double>;

class Mat {
 public:
  Mat() : n_(0) {}
  explicit Mat(int n, double fill = 0.0) : n_(n), v_(static_cast<std::size_t>(n) * n, fill) {}

  int n() const { return n_; }
  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::fabs(x));
    return m;
  }

 private:
  int n_;
  std::vector<double> v_;
};

inline Mat matmul(const Mat& a, const Mat& b) {
  int n = a.n();
  Mat c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// Cholesky factor L (lower triangular, g = L L^T). Returns false if the
/// matrix is not positive definite.
inline bool cholesky(const Mat& g, Mat& lower) {
  int n = g.n();
  lower = Mat(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        lower(i, i) = std::sqrt(s);
      } else {
        lower(i, j) = s / lower(j, j);
      }
    }
  }
  return true;
}

inline double determinant(const Mat& m) {
  int n = m.n();
  Mat a = m;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      double f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Mat inverse(const Mat& m) {
  int n = m.n();
  Mat a = m;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) throw SingularMetricError("matrix is singular");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    double d = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

struct EigenSym {
  Vec values;  // ascending
  Mat vectors; // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi iteration for a symmetric matrix. Sweep order is fixed, so
/// results are bit-reproducible for identical input.
inline EigenSym eigen_symmetric(const Mat& m) {
  int n = m.n();
  Mat a = m;
  Mat v = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0, total = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        total += a(p, q) * a(p, q);
        if (q > p) off += a(p, q) * a(p, q);
      }
    if (off <= 1e-28 * std::max(total, 1e-300)) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x) < a(y, y); });

  EigenSym out;
  out.values.resize(n);
  out.vectors = Mat(n);
  for (int k = 0; k < n; ++k) {
    int src = order[k];
    out.values[k] = a(src, src);
    // Deterministic sign: largest-magnitude component positive.
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(v(i, src)) > std::fabs(v(arg, src))) arg = i;
    double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

/// Generalized symmetric-definite eigenproblem  b v = lambda g v  with g
/// positive definite. Returned eigenvectors are g-orthonormal columns.
inline EigenSym eigen_generalized(const Mat& b, const Mat& g) {
  int n = g.n();
  Mat lower;
  if (!cholesky(g, lower)) throw SingularMetricError("metric is not positive definite");

  // c = L^{-1} b L^{-T}, still symmetric.
  Mat linv = Mat(n);
  for (int col = 0; col < n; ++col) {
    Vec e(n, 0.0);
    e[col] = 1.0;
    for (int i = 0; i < n; ++i) {
      double s = e[i];
      for (int k = 0; k < i; ++k) s -= lower(i, k) * linv(k, col);
      linv(i, col) = s / lower(i, i);
    }
  }
  Mat tmp = matmul(linv, b);
  Mat c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += tmp(i, k) * linv(j, k);
      c(i, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double avg = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = c(j, i) = avg;
    }

  EigenSym es = eigen_symmetric(c);
  // Back-substitute v = L^{-T} u.
  Mat vecs(n);
  for (int col = 0; col < n; ++col) {
    for (int i = n - 1; i >= 0; --i) {
      double s = es.vectors(i, col);
      for (int k = i + 1; k < n; ++k) s -= lower(k, i) * vecs(k, col);
      vecs(i, col) = s / lower(i, i);
    }
  }
  es.vectors = vecs;
  return es;
}

}  // namespace codazzi
