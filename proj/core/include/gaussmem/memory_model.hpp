#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "gaussmem/channel.hpp"
#include "gaussmem/matrix.hpp"

namespace gaussmem {

// Coefficient matrices of the n-use dilation: output modes as linear
// combinations of input modes (A, n x n, lower triangular) and environment
// modes h = 0..n (E, n x (n+1); h = 0 is the initial memory mode).
// Contract-bearing quantities are A A^T and E E^T only; signs of individual
// entries follow the recursion as written.
struct ModeTransform {
  Matrix a_matrix;
  Matrix e_matrix;
  Regime regime;
};

struct DivergentEigenvalue {
  double value = 0.0;  // +inf once the closed form exceeds double range
  std::size_t index = 0;
};

struct FiniteSpectrum {
  std::vector<double> eigenvalues;  // ascending, length n
  std::optional<DivergentEigenvalue> divergent;
};

// Matrix-size cap from GAUSSMEM_MAX_N (default 4096).
std::size_t matrix_size_cap();

/// Per-use beam-splitter/squeezer recursion for n uses.
ModeTransform build_mode_transform(const ChannelParams& params, std::size_t n);

/// The closed-form Gram matrix M^(n) = A A^T. Entries grow like
/// (mu*kappa)^n above threshold; callers needing spectra there should use
/// finite_spectrum, which avoids forming M.
Matrix closed_form_m(const ChannelParams& params, std::size_t n);

/// Effective transmissivities/gains of the n-use normal-mode decomposition,
/// ascending. Above threshold the largest is flagged divergent.
FiniteSpectrum finite_spectrum(const ChannelParams& params, std::size_t n);

/// Covariance of the correlated additive noise in the kappa -> 1 limit:
/// entry (i, j) = n_c * mu^{|i-j|/2}.
Matrix additive_noise_covariance(double mu, double n_c, std::size_t n);

namespace detail {

// sqrt usable from the templated recursion; tests may specialize this for
// wider scalar types.
template <class Real>
Real sqrt_val(Real x) {
  using std::sqrt;
  return sqrt(x);
}

template <class Real>
struct TransformMatrices {
  std::size_t n = 0;
  std::vector<Real> a;  // n x n, row-major
  std::vector<Real> e;  // n x (n+1), row-major
};

// The recursion at arbitrary scalar precision. Memory state is tracked as
// input-part + environment-part coefficient vectors; for kappa > 1 the
// environment part of outputs multiplies creation operators.
template <class Real>
TransformMatrices<Real> build_transform(Real kappa, Real mu, std::size_t n) {
  const bool amplifier = kappa > Real(1);
  const Real sk = sqrt_val(kappa);
  const Real sm = sqrt_val(mu);
  const Real s1m = sqrt_val(Real(1) - mu);
  const Real sx = amplifier ? sqrt_val(kappa - Real(1)) : sqrt_val(Real(1) - kappa);

  TransformMatrices<Real> t;
  t.n = n;
  t.a.assign(n * n, Real(0));
  t.e.assign(n * (n + 1), Real(0));

  std::vector<Real> mem_in(n, Real(0));       // memory coefficients on inputs
  std::vector<Real> mem_env(n + 1, Real(0));  // ... and on environment modes
  mem_env[0] = Real(1);                       // initial memory = a^E_0

  for (std::size_t j = 0; j < n; ++j) {
    // memory-environment beam splitter
    for (std::size_t h = 0; h < n; ++h) mem_in[h] *= sm;
    for (std::size_t h = 0; h <= n; ++h) mem_env[h] *= sm;
    mem_env[j + 1] += s1m;

    Real* arow = &t.a[j * n];
    Real* erow = &t.e[j * (n + 1)];
    if (amplifier) {
      for (std::size_t h = 0; h < n; ++h) arow[h] = sx * mem_in[h];
      arow[j] += sk;
      for (std::size_t h = 0; h <= n; ++h) erow[h] = sx * mem_env[h];
    } else {
      for (std::size_t h = 0; h < n; ++h) arow[h] = -sx * mem_in[h];
      arow[j] += sk;
      for (std::size_t h = 0; h <= n; ++h) erow[h] = -sx * mem_env[h];
    }

    // memory update picks up the input mode (creation operator for kappa > 1)
    for (std::size_t h = 0; h < n; ++h) mem_in[h] *= sk;
    for (std::size_t h = 0; h <= n; ++h) mem_env[h] *= sk;
    mem_in[j] += sx;
  }
  return t;
}

// Entries of M^(n) at arbitrary scalar precision, row-major.
template <class Real>
std::vector<Real> closed_form_entries(Real kappa, Real mu, std::size_t n) {
  const Real mk = mu * kappa;
  std::vector<Real> result(n * n, Real(0));

  if (mk == Real(1)) {
    // threshold form: delta + (1-mu) + ((1-mu)^2/mu) min(j,j')
    const Real c1 = Real(1) - mu;
    const Real c2 = c1 * c1 / mu;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t jp = 0; jp < n; ++jp) {
        const std::size_t mn = (j < jp ? j : jp) + 1;  // 1-based min
        result[j * n + jp] = (j == jp ? Real(1) : Real(0)) + c1 + c2 * Real(mn);
      }
    return result;
  }

  // prefix sums S[t] = sum_{h=0}^{t-1} (mu kappa)^h, S[0] = 0
  std::vector<Real> prefix(n, Real(0));
  Real acc = Real(0), power = Real(1);
  for (std::size_t t = 1; t < n; ++t) {
    acc += power;
    power *= mk;
    prefix[t] = acc;
  }
  std::vector<Real> root_pow(n, Real(1));  // (sqrt(mu kappa))^d
  const Real root = sqrt_val(mk);
  for (std::size_t d = 1; d < n; ++d) root_pow[d] = root_pow[d - 1] * root;

  const Real coef = mu * (kappa - Real(1)) * (kappa - Real(1));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t jp = j; jp < n; ++jp) {
      const std::size_t mn = j + 1;  // 1-based min since jp >= j
      const Real kjj = kappa + coef * prefix[mn - 1];
      Real v = (kjj - Real(1)) * root_pow[jp - j];
      if (j == jp) v += Real(1);
      result[j * n + jp] = v;
      result[jp * n + j] = v;
    }
  return result;
}

// Bulk (all but the divergent) eigenvalues of M^(n) for mu*kappa > 1,
// ascending, length n-1. Uses interlacing brackets plus a multi-precision
// characteristic-function bisection; M itself is never formed.
std::vector<double> bulk_eigenvalues_above_threshold(const ChannelParams& params,
                                                     std::size_t n);

// trace of M^(n) in extended precision (exceeds double range above
// threshold for large n).
long double closed_form_trace(const ChannelParams& params, std::size_t n);

}  // namespace detail

}  // namespace gaussmem
