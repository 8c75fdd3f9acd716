#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gaussmem/errors.hpp"
#include "gaussmem/matrix.hpp"

namespace gaussmem {

/// Thermal-state entropy in nats: g(x) = (x+1) ln(x+1) - x ln x, g(0) = 0.
/// Strictly increasing and concave on x >= 0.
double g(double x);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

// Thrown when the evaluation budget runs out before the requested tolerance
// is met; carries the best estimate obtained so far.
class quadrature_error : public solver_error {
 public:
  quadrature_error(const std::string& msg, QuadratureResult best)
      : solver_error(msg), best_result(best) {}
  QuadratureResult best_result;
};

struct Bracket {
  double lo;
  double hi;
};

namespace detail {

template <class F>
class SimpsonState {
 public:
  SimpsonState(F& f, long budget) : f_(f), budget_(budget) {}

  double eval(double x) {
    ++evaluations;
    return f_(x);
  }

  // Classic adaptive Simpson with Richardson correction. `whole` is the
  // Simpson estimate over [a,b]; fm is f at the midpoint.
  double refine(double a, double fa, double m, double fm, double b, double fb,
                double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth <= 0 || evaluations >= budget_) {
      if (std::abs(err) > tol) exhausted = true;
      error_sum += std::abs(err);
      abs_sum += std::abs(left) + std::abs(right);
      return left + right + err;
    }
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
  }

  double segment(double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = eval(a);
    const double fm = eval(m);
    const double fb = eval(b);
    const double whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return refine(a, fa, m, fm, b, fb, whole, tol, kMaxDepth);
  }

  long evaluations = 0;
  double error_sum = 0.0;
  double abs_sum = 0.0;
  bool exhausted = false;

 private:
  static constexpr int kMaxDepth = 48;
  F& f_;
  long budget_;
};

}  // namespace detail

/// Adaptive-Simpson quadrature of f over [a, b] to absolute tolerance tol.
/// Interior kinks must be passed as split points (each sub-segment is
/// integrated independently with a proportional share of the tolerance).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double tol,
                           std::span<const double> split_points = {},
                           long max_evaluations = 4'000'000) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("integrate: need finite a < b");
  }
  if (!(tol > 0.0)) throw std::domain_error("integrate: tolerance must be positive");

  std::vector<double> knots;
  knots.push_back(a);
  for (double s : split_points) {
    if (s > a && s < b) knots.push_back(s);
  }
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());

  detail::SimpsonState<F> state(f, max_evaluations);
  double total = 0.0;
  const double span = b - a;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i], hi = knots[i + 1];
    if (hi <= lo) continue;
    total += state.segment(lo, hi, tol * ((hi - lo) / span));
  }

  QuadratureResult result;
  result.value = total;
  result.evaluations = state.evaluations;
  result.error_estimate =
      state.error_sum + 32.0 * std::numeric_limits<double>::epsilon() * state.abs_sum;
  if (state.exhausted && result.error_estimate > tol) {
    throw quadrature_error("integrate: evaluation budget exhausted before tolerance", result);
  }
  return result;
}

/// Bisection on a bracketed sign change. Robust for any continuous f with
/// f(lo) * f(hi) <= 0; returns the midpoint of the final bracket.
template <class F>
double find_root(F&& f, Bracket bracket, double tol = 1e-12) {
  double lo = bracket.lo, hi = bracket.hi;
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::domain_error("find_root: invalid bracket");
  }
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::domain_error("find_root: bracket endpoints have the same sign");
  }
  for (int iter = 0; iter < 200 && (hi - lo) > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Eigenvalues of a real symmetric matrix, ascending, via cyclic Jacobi
/// rotations. Input must be symmetric within 1e-12 relative.
std::vector<double> sym_eigenvalues(const Matrix& m);

namespace detail {

// Implicit-shift QL on a symmetric tridiagonal matrix; returns ascending
// eigenvalues. `off` holds the n-1 off-diagonal entries.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag,
                                            std::vector<double> off);

// Householder reduction + QL; same result as sym_eigenvalues but O(n^3)
// with a small constant, for large well-conditioned matrices. Skips the
// symmetry check.
std::vector<double> sym_eigenvalues_tridiagonal_path(const Matrix& m);

// Dispatch: Jacobi for small n, tridiagonal path for large.
std::vector<double> sym_eigenvalues_dense(const Matrix& m);

}  // namespace detail

}  // namespace gaussmem
