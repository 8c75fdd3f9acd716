#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gaussmem/errors.hpp"
#include "gaussmem/memory_model.hpp"
#include "gaussmem/numerics.hpp"
#include "gaussmem/spectrum.hpp"

// Above threshold (mu*kappa > 1) the Gram matrix M^(n) has entries growing
// like (mu*kappa)^n, so neither M nor its triangular factor can be handled
// by a fixed-precision dense eigensolver without losing the O(1) bulk next
// to the divergent eigenvalue. Instead we use the exact splitting
//
//   M = I + b T + a' u u^T,   T_{jj'} = d^{|j-j'|},  u_j = d^j,  d = sqrt(mu kappa),
//   a' = mu (kappa-1)^2 / ((mu kappa - 1) mu kappa),
//   b  = (kappa-1)(mu-1) / (mu kappa - 1).
//
// T is a Kac-Murdock-Szego matrix whose inverse J = T^{-1} is tridiagonal
// with O(1) entries, and J u = d e_1 exactly. Eigenvalues of I + b T are
// 1 + b / spec(J), and since a' u u^T is p.s.d. rank one they interlace the
// eigenvalues of M, giving one guaranteed bracket per bulk eigenvalue.
// Within a bracket the eigenvalue is the root of
//
//   psi(eta) = det K + a' d^2 sum_{j=1}^n r^{j-1} D_{j+1},
//   K = (1-eta) J + b I (tridiagonal),  r = -d * offdiag(K),
//
// where D_j are trailing minors of K. Evaluating psi requires ~n bits of
// precision (the sum cancels down from terms of size ~(mu kappa)^n), so the
// recurrence runs in MPFR with a precision ladder; correctness is checked
// by the root count, which must be exactly n-1.

namespace gaussmem::detail {

namespace {

class PsiEvaluator {
 public:
  PsiEvaluator(double kappa, double mu, std::size_t n, mpfr_prec_t prec) : n_(n) {
    for (mpfr_t* v : all()) mpfr_init2(*v, prec);
    const double d2 = mu * kappa;
    mpfr_set_d(d2_, d2, MPFR_RNDN);
    mpfr_sqrt(d_, d2_, MPFR_RNDN);
    // ce, ci, off: inverse-KMS tridiagonal entries 1/(1-d^2), (1+d^2)/(1-d^2), -d/(1-d^2)
    mpfr_ui_sub(t1_, 1, d2_, MPFR_RNDN);
    mpfr_ui_div(ce_, 1, t1_, MPFR_RNDN);
    mpfr_add_ui(t2_, d2_, 1, MPFR_RNDN);
    mpfr_div(ci_, t2_, t1_, MPFR_RNDN);
    mpfr_div(off_, d_, t1_, MPFR_RNDN);
    mpfr_neg(off_, off_, MPFR_RNDN);
    // b = (kappa-1)(mu-1)/(d^2-1); a' d^2 = mu (kappa-1)^2 / (d^2-1)
    mpfr_set_d(t1_, kappa - 1.0, MPFR_RNDN);
    mpfr_set_d(t2_, mu - 1.0, MPFR_RNDN);
    mpfr_mul(b_, t1_, t2_, MPFR_RNDN);
    mpfr_sub_ui(t2_, d2_, 1, MPFR_RNDN);
    mpfr_div(b_, b_, t2_, MPFR_RNDN);
    mpfr_mul(apd2_, t1_, t1_, MPFR_RNDN);
    mpfr_mul_d(apd2_, apd2_, mu, MPFR_RNDN);
    mpfr_div(apd2_, apd2_, t2_, MPFR_RNDN);
  }

  ~PsiEvaluator() {
    for (mpfr_t* v : all()) mpfr_clear(*v);
  }

  PsiEvaluator(const PsiEvaluator&) = delete;
  PsiEvaluator& operator=(const PsiEvaluator&) = delete;

  int sign_at(double eta) {
    mpfr_set_d(one_m_, 1.0, MPFR_RNDN);
    mpfr_sub_d(one_m_, one_m_, eta, MPFR_RNDN);
    mpfr_fma(a_end_, one_m_, ce_, b_, MPFR_RNDN);
    mpfr_fma(a_int_, one_m_, ci_, b_, MPFR_RNDN);
    mpfr_mul(beta_, one_m_, off_, MPFR_RNDN);
    mpfr_sqr(beta2_, beta_, MPFR_RNDN);
    mpfr_mul(r_, d_, beta_, MPFR_RNDN);
    mpfr_neg(r_, r_, MPFR_RNDN);
    if (mpfr_zero_p(r_)) return 0;  // eta == 1; caller treats as unresolved
    mpfr_ui_div(inv_r_, 1, r_, MPFR_RNDN);
    mpfr_pow_ui(p_, r_, static_cast<unsigned long>(n_ - 1), MPFR_RNDN);
    mpfr_set_ui(sum_, 0, MPFR_RNDN);
    mpfr_set_ui(dp1_, 1, MPFR_RNDN);  // D_{n+1}
    mpfr_set_ui(dp2_, 0, MPFR_RNDN);
    for (std::size_t j = n_; j >= 1; --j) {
      mpfr_fma(sum_, p_, dp1_, sum_, MPFR_RNDN);
      mpfr_srcptr aj = (j == 1 || j == n_) ? a_end_ : a_int_;
      mpfr_mul(t1_, aj, dp1_, MPFR_RNDN);
      mpfr_mul(t2_, beta2_, dp2_, MPFR_RNDN);
      mpfr_sub(dj_, t1_, t2_, MPFR_RNDN);
      mpfr_swap(dp2_, dp1_);
      mpfr_swap(dp1_, dj_);
      if (j > 1) mpfr_mul(p_, p_, inv_r_, MPFR_RNDN);
    }
    mpfr_fma(t1_, apd2_, sum_, dp1_, MPFR_RNDN);
    return mpfr_sgn(t1_);
  }

 private:
  std::vector<mpfr_t*> all() {
    return {&d2_, &d_, &ce_, &ci_, &off_, &b_,    &apd2_, &one_m_, &a_end_, &a_int_,
            &beta_, &beta2_, &r_,  &inv_r_, &p_, &sum_,  &dp1_,  &dp2_,   &dj_,    &t1_,
            &t2_};
  }

  std::size_t n_;
  mpfr_t d2_, d_, ce_, ci_, off_, b_, apd2_;
  mpfr_t one_m_, a_end_, a_int_, beta_, beta2_, r_, inv_r_;
  mpfr_t p_, sum_, dp1_, dp2_, dj_, t1_, t2_;
};

std::vector<double> interlacing_points(double kappa, double mu, std::size_t n) {
  const double d2 = mu * kappa;
  const double denom = 1.0 - d2;
  const double ce = 1.0 / denom;
  const double ci = (1.0 + d2) / denom;
  const double off = -std::sqrt(d2) / denom;
  std::vector<double> diag(n, ci);
  diag.front() = ce;
  diag.back() = ce;
  const std::vector<double> lam =
      tridiagonal_eigenvalues(std::move(diag), std::vector<double>(n - 1, off));
  const double b = (kappa - 1.0) * (mu - 1.0) / (d2 - 1.0);
  std::vector<double> nus;
  nus.reserve(n);
  for (double l : lam) {
    if (l != 0.0) nus.push_back(1.0 + b / l);
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

}  // namespace

std::vector<double> bulk_eigenvalues_above_threshold(const ChannelParams& params,
                                                     std::size_t n) {
  const std::size_t want = n - 1;
  if (want == 0) return {};

  if (params.mu == 1.0) {
    // b vanishes: M = I + a' u u^T, so the bulk is exactly 1.
    return std::vector<double>(want, 1.0);
  }

  const std::vector<double> nus = interlacing_points(params.kappa, params.mu, n);
  const double eta_sup = eta_of_z(params, 0.0);

  double lo = 0.999999;
  double hi = 1.5 * eta_sup + 1.0;
  mpfr_prec_t prec = static_cast<mpfr_prec_t>(96 + (11 * n) / 20);

  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<double> ends;
    ends.push_back(lo);
    for (double v : nus) {
      if (v > lo && v < hi) ends.push_back(v);
    }
    ends.push_back(hi);

    PsiEvaluator psi(params.kappa, params.mu, n, prec);
    std::vector<double> roots;
    roots.reserve(want);
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
      double a = ends[i], b = ends[i + 1];
      // a panel between two consecutive interlacing points holds exactly one
      // eigenvalue; the two window-edge panels hold at most one
      const bool interior = i >= 1 && i + 2 < ends.size();
      const double pad_a = 1e-13 * (1.0 + std::abs(a));
      const double pad_b = 1e-13 * (1.0 + std::abs(b));
      if (b - a <= 2.0 * (pad_a + pad_b)) {
        if (interior) roots.push_back(0.5 * (a + b));  // pinched eigenvalue
        continue;
      }
      a += pad_a;
      b -= pad_b;
      const int sa = psi.sign_at(a);
      const int sb = psi.sign_at(b);
      if (sa == 0 || sb == 0 || sa == sb) continue;  // empty panel (or retry later)
      for (int iter = 0; iter < 64 && (b - a) > 1e-13 * (1.0 + std::abs(b)); ++iter) {
        const double mid = 0.5 * (a + b);
        const int sm = psi.sign_at(mid);
        if (sm == sa) {
          a = mid;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }

    if (roots.size() == want) {
      std::sort(roots.begin(), roots.end());
      return roots;
    }
    // Wider window and more bits, then try again.
    lo = std::max(1e-3, lo * 0.5);
    hi *= 4.0;
    prec = static_cast<mpfr_prec_t>(prec * 8 / 5);
  }
  throw solver_error("finite_spectrum: above-threshold secular solve failed at n = " +
                     std::to_string(n));
}

}  // namespace gaussmem::detail
