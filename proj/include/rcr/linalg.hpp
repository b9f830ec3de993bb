#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

#include "rcr/errors.hpp"

namespace rcr {

/// Hard cap on problem dimension. Everything is stack-allocated dense
/// arithmetic; the cap keeps that cheap and the error analysis simple.
inline constexpr int kMaxDim = 16;

namespace detail {
inline void check_dim(int d) {
  if (d < 1 || d > kMaxDim) throw DomainError("dimension must be in [1, 16]");
}
inline void check_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite entry");
}
}  // namespace detail

/// Dense vector of dimension <= kMaxDim.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) { detail::check_dim(dim); a_.fill(0.0); }
  Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
    detail::check_dim(dim_);
    int i = 0;
    for (double x : xs) {
      detail::check_finite(x);
      a_[i++] = x;
    }
  }

  static Vec zeros(int dim) { return Vec(dim); }
  static Vec basis(int dim, int j) {
    Vec e(dim);
    e[j] = 1.0;
    return e;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return a_[i]; }
  double operator[](int i) const { return a_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) a_[i] += o.a_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) a_[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += a_[i] * o.a_[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(a_[i]));
    return m;
  }
  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(a_[i])) return false;
    return true;
  }

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> a_{};
};

/// Dense square matrix of dimension <= kMaxDim, row-major.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int dim) : dim_(dim) { detail::check_dim(dim); a_.fill(0.0); }

  static Mat zeros(int dim) { return Mat(dim); }
  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(std::initializer_list<double> xs) {
    Mat m(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) {
      detail::check_finite(x);
      m(i, i) = x;
      ++i;
    }
    return m;
  }
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Like from_rows but rejects asymmetry beyond 1e-12 * max(1, |a_ij|).
  static Mat symmetric(std::initializer_list<std::initializer_list<double>> rows);

  int dim() const { return dim_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * kMaxDim + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * kMaxDim + j]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) (*this)(i, j) *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  Vec operator*(const Vec& x) const {
    Vec y(dim_);
    for (int i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  Mat operator*(const Mat& b) const {
    Mat c(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        const double aik = (*this)(i, k);
        for (int j = 0; j < dim_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }
  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if (!std::isfinite((*this)(i, j))) return false;
    return true;
  }
  /// Largest |a_ij - a_ji|, as an absolute asymmetry measure.
  double asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
  }

 private:
  int dim_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

/// Cholesky factor L (lower triangular, positive diagonal) of a symmetric
/// positive-definite A, so that L * L^T = A. Throws NotPositiveDefinite when
/// a pivot satisfies l_ii^2 <= 1e-14 * a_ii.
Mat cholesky(const Mat& a);

/// Solves L x = b by forward substitution; L lower triangular.
Vec solve_lower(const Mat& l, const Vec& b);

/// Solves L^T x = b by back substitution; L lower triangular.
Vec solve_lower_transposed(const Mat& l, const Vec& b);

/// Inverse of a symmetric positive-definite matrix via its Cholesky factor.
Mat spd_inverse(const Mat& a);

}  // namespace rcr
