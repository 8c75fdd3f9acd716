#include "gaussmem/memory_model.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gaussmem/errors.hpp"
#include "gaussmem/numerics.hpp"

namespace gaussmem {

std::size_t matrix_size_cap() {
  if (const char* env = std::getenv("GAUSSMEM_MAX_N")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

namespace {

void check_size(std::size_t n) {
  if (n == 0) throw std::domain_error("memory model: n must be >= 1");
  if (n > matrix_size_cap()) {
    throw resource_error("memory model: n exceeds GAUSSMEM_MAX_N cap (" +
                         std::to_string(matrix_size_cap()) + ")");
  }
}

}  // namespace

ModeTransform build_mode_transform(const ChannelParams& params, std::size_t n) {
  validate(params);
  check_size(n);
  const auto t = detail::build_transform<double>(params.kappa, params.mu, n);
  ModeTransform out;
  out.regime = classify(params);
  out.a_matrix = Matrix(n, n);
  out.e_matrix = Matrix(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.a_matrix(i, j) = t.a[i * n + j];
    for (std::size_t j = 0; j <= n; ++j) out.e_matrix(i, j) = t.e[i * (n + 1) + j];
  }
  return out;
}

Matrix closed_form_m(const ChannelParams& params, std::size_t n) {
  validate(params);
  check_size(n);
  const auto entries = detail::closed_form_entries<double>(params.kappa, params.mu, n);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
  return m;
}

Matrix additive_noise_covariance(double mu, double n_c, std::size_t n) {
  if (!std::isfinite(mu) || mu < 0.0 || mu > 1.0) {
    throw std::domain_error("additive_noise_covariance: mu must lie in [0, 1]");
  }
  if (!std::isfinite(n_c) || n_c < 0.0) {
    throw std::domain_error("additive_noise_covariance: n_c must be >= 0");
  }
  check_size(n);
  std::vector<double> pow_half(n, 1.0);  // mu^{d/2}
  const double root = std::sqrt(mu);
  for (std::size_t d = 1; d < n; ++d) pow_half[d] = pow_half[d - 1] * root;
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = i > j ? i - j : j - i;
      m(i, j) = d == 0 ? n_c : n_c * pow_half[d];
    }
  return m;
}

namespace detail {

long double closed_form_trace(const ChannelParams& params, std::size_t n) {
  const long double kappa = params.kappa;
  const long double mu = params.mu;
  const long double mk = mu * kappa;
  const long double coef = mu * (kappa - 1.0L) * (kappa - 1.0L);
  long double trace = 0.0L, prefix = 0.0L, power = 1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const long double kjj = kappa + coef * prefix;  // kappa_{jj}, 1-based j+1
    trace += 1.0L + (kjj - 1.0L);
    prefix += power;
    power *= mk;
  }
  return trace;
}

}  // namespace detail

FiniteSpectrum finite_spectrum(const ChannelParams& params, std::size_t n) {
  validate(params);
  check_size(n);
  const Regime regime = classify(params);

  FiniteSpectrum out;
  if (regime.threshold == ThresholdSide::Above) {
    // The closed-form matrix overflows double range for large n here, and a
    // dense double eigensolve loses the O(1) bulk next to the divergent
    // eigenvalue; see detail::bulk_eigenvalues_above_threshold.
    std::vector<double> bulk =
        n > 1 ? detail::bulk_eigenvalues_above_threshold(params, n) : std::vector<double>{};
    long double rest = detail::closed_form_trace(params, n);
    for (double v : bulk) rest -= static_cast<long double>(v);
    const double divergent =
        rest > static_cast<long double>(std::numeric_limits<double>::max())
            ? std::numeric_limits<double>::infinity()
            : static_cast<double>(rest);
    out.eigenvalues = std::move(bulk);
    out.eigenvalues.push_back(divergent);
    out.divergent = DivergentEigenvalue{divergent, n - 1};
    return out;
  }

  Matrix m = closed_form_m(params, n);
  out.eigenvalues = detail::sym_eigenvalues_dense(m);
  for (double& v : out.eigenvalues) {
    if (v < 0.0) {
      if (v < -1e-8) throw solver_error("finite_spectrum: negative eigenvalue from solver");
      v = 0.0;  // p.s.d. up to roundoff
    }
  }
  return out;
}

}  // namespace gaussmem
