#include "gaussmem/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace gaussmem {

double g(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("g: argument must be finite and >= 0");
  }
  if (x == 0.0) return 0.0;
  // x ln x underflows meaning below ~1e-12; the series x(1 - ln x) keeps the
  // cutoff region of the capacity integrands smooth.
  if (x < 1e-12) return x * (1.0 - std::log(x));
  return std::log1p(x) + x * std::log1p(1.0 / x);
}

Matrix identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix gram(const Matrix& a) {
  const std::size_t n = a.rows(), k = a.cols();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ri = a.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const double* rj = a.row(j);
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t) s += ri[t] * rj[t];
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

double max_scaled_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double scale = std::max(1.0, std::abs(b(i, j)));
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
    }
  return worst;
}

namespace {

double frobenius(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

double off_diagonal_frobenius(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> sym_eigenvalues(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw std::domain_error("sym_eigenvalues: matrix must be square");

  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) max_abs = std::max(max_abs, std::abs(m(i, j)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, max_abs)) {
        throw std::domain_error("sym_eigenvalues: matrix is not symmetric");
      }

  Matrix a = m;
  const double norm = frobenius(a);
  const double target = 1e-13 * norm;

  for (int sweep = 0; sweep < 60; ++sweep) {
    if (off_diagonal_frobenius(a) <= target || norm == 0.0) break;
    if (sweep == 59) throw solver_error("sym_eigenvalues: Jacobi did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        if (std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) continue;
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip - s * (aiq + tau * aip);
          a(i, q) = aiq + s * (aip - tau * aiq);
          a(p, i) = a(i, p);
          a(q, i) = a(i, q);
        }
      }
    }
  }

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace detail {

namespace {
double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }
}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> off) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw std::domain_error("tridiagonal_eigenvalues: size mismatch");
  off.push_back(0.0);

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw solver_error("tridiagonal_eigenvalues: QL did not converge");
        double gshift = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
        double r = hypot2(gshift, 1.0);
        gshift = diag[m] - diag[l] + off[l] / (gshift + std::copysign(r, gshift));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * off[i];
          const double b = c * off[i];
          r = hypot2(f, gshift);
          off[i + 1] = r;
          if (r == 0.0) {
            diag[i + 1] -= p;
            off[m] = 0.0;
            break;
          }
          s = f / r;
          c = gshift / r;
          gshift = diag[i + 1] - p;
          r = (diag[i] - gshift) * s + 2.0 * c * b;
          p = s * r;
          diag[i + 1] = gshift + p;
          gshift = c * r - b;
          if (i == l) {
            diag[l] -= p;
            off[l] = gshift;
            off[m] = 0.0;
            p = 0.0;
          }
        }
        if (r == 0.0 && m >= l + 2) continue;
        if (p != 0.0 || m < l + 2) {
          diag[l] -= p;
          off[l] = gshift;
          off[m] = 0.0;
        }
      }
    } while (m != l);
  }

  std::sort(diag.begin(), diag.end());
  return diag;
}

std::vector<double> sym_eigenvalues_tridiagonal_path(const Matrix& m) {
  const std::size_t n = m.rows();
  // Householder reduction to tridiagonal form (no eigenvectors kept).
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  std::vector<double> d(n, 0.0), e(n, 0.0);

  for (std::size_t i = n; i-- > 1;) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (i > 1) {
      double scale = 0.0;
      for (std::size_t k = 0; k < i; ++k) scale += std::abs(a[i][k]);
      if (scale == 0.0) {
        e[i] = a[i][l];
      } else {
        for (std::size_t k = 0; k < i; ++k) {
          a[i][k] /= scale;
          h += a[i][k] * a[i][k];
        }
        double f = a[i][l];
        double gg = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * gg;
        h -= f * gg;
        a[i][l] = f - gg;
        f = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
          gg = 0.0;
          for (std::size_t k = 0; k <= j; ++k) gg += a[j][k] * a[i][k];
          for (std::size_t k = j + 1; k < i; ++k) gg += a[k][j] * a[i][k];
          e[j] = gg / h;
          f += e[j] * a[i][j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j < i; ++j) {
          const double fi = a[i][j];
          const double gj = e[j] - hh * fi;
          e[j] = gj;
          for (std::size_t k = 0; k <= j; ++k) a[j][k] -= fi * e[k] + gj * a[i][k];
        }
      }
    } else {
      e[i] = a[i][l];
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i < n; ++i) d[i] = a[i][i];

  std::vector<double> off(e.begin() + 1, e.end());
  return tridiagonal_eigenvalues(std::move(d), std::move(off));
}

std::vector<double> sym_eigenvalues_dense(const Matrix& m) {
  if (m.rows() <= 256) return sym_eigenvalues(m);
  return sym_eigenvalues_tridiagonal_path(m);
}

}  // namespace detail

}  // namespace gaussmem
