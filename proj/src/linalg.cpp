#include "rcr/linalg.hpp"

#include <cmath>

namespace rcr {

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m(static_cast<int>(rows.size()));
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m.dim_) throw DomainError("ragged matrix rows");
    int j = 0;
    for (double x : row) {
      detail::check_finite(x);
      m(i, j++) = x;
    }
    ++i;
  }
  return m;
}

Mat Mat::symmetric(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m = from_rows(rows);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j) {
      const double tol = 1e-12 * std::max(1.0, std::abs(m(i, j)));
      if (std::abs(m(i, j) - m(j, i)) > tol) throw DomainError("matrix not symmetric");
    }
  return m;
}

Mat cholesky(const Mat& a) {
  const int d = a.dim();
  Mat l(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        // Pivot test is scale-relative in a_ii so small well-conditioned
        // matrices are not rejected.
        if (s <= 1e-14 * a(i, i)) throw NotPositiveDefinite("cholesky pivot failure");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

Vec solve_lower(const Mat& l, const Vec& b) {
  const int d = l.dim();
  Vec x(d);
  for (int i = 0; i < d; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Vec solve_lower_transposed(const Mat& l, const Vec& b) {
  const int d = l.dim();
  Vec x(d);
  for (int i = d - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < d; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Mat spd_inverse(const Mat& a) {
  const int d = a.dim();
  const Mat l = cholesky(a);
  Mat inv(d);
  for (int j = 0; j < d; ++j) {
    const Vec col = solve_lower_transposed(l, solve_lower(l, Vec::basis(d, j)));
    for (int i = 0; i < d; ++i) inv(i, j) = col[i];
  }
  // Symmetrize away the last-ulp asymmetry from columnwise solves.
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  return inv;
}

}  // namespace rcr
