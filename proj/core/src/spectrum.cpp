#include "gaussmem/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaussmem/errors.hpp"
#include "gaussmem/memory_model.hpp"
#include "gaussmem/numerics.hpp"

namespace gaussmem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_z(double z) {
  if (!std::isfinite(z) || z < 0.0 || z > kTwoPi) {
    throw std::domain_error("eta_of_z: z must lie in [0, 2pi]");
  }
}

// denominator 1 + kappa mu - 2 sqrt(kappa mu) cos(z/2), written as
// (1 - s)^2 + 4 s sin^2(z/4) to stay exact near z = 0.
double symbol_denominator(const ChannelParams& p, double z) {
  const double s = std::sqrt(p.kappa * p.mu);
  const double sin_quarter = std::sin(0.25 * z);
  return (1.0 - s) * (1.0 - s) + 4.0 * s * sin_quarter * sin_quarter;
}

}  // namespace

double eta_of_z(const ChannelParams& p, double z) {
  validate(p);
  check_z(z);
  const double den = symbol_denominator(p, z);
  if (den == 0.0) {
    throw std::domain_error("eta_of_z: singular point (mu*kappa = 1, z = 0)");
  }
  const double root_diff = std::sqrt(p.kappa) - std::sqrt(p.mu);
  const double sin_quarter = std::sin(0.25 * z);
  const double num = root_diff * root_diff +
                     4.0 * std::sqrt(p.kappa * p.mu) * sin_quarter * sin_quarter;
  return num / den;
}

double thermal_noise_term(const ChannelParams& p, double z) {
  validate(p);
  check_z(z);
  const double den = symbol_denominator(p, z);
  if (den == 0.0) {
    throw std::domain_error("thermal_noise_term: singular point (mu*kappa = 1, z = 0)");
  }
  if (p.kappa <= 1.0) {
    return (1.0 - p.kappa) * (1.0 - p.mu) / den * p.nbar;
  }
  return (p.kappa - 1.0) * (1.0 - p.mu) / den * (p.nbar + 1.0);
}

ChannelParams dual_params(const ChannelParams& p) {
  validate(p);
  if (p.kappa <= 1.0) {
    return ChannelParams{p.mu, p.kappa, p.nbar};
  }
  if (p.mu == 0.0) {
    throw std::domain_error("dual_params: amplifier dual undefined at mu = 0");
  }
  return ChannelParams{1.0 / p.mu, 1.0 / p.kappa, p.nbar};
}

AsymptoticSpectrum asymptotic_spectrum(const ChannelParams& p) {
  validate(p);
  return AsymptoticSpectrum{p, p.kappa <= 1.0};
}

SzegoComparison szego_check(const ChannelParams& p,
                            const std::function<double(double)>& f, std::size_t n) {
  validate(p);
  if (p.mu * p.kappa == 1.0) {
    throw std::domain_error("szego_check: asymptotic spectrum undefined at mu*kappa = 1");
  }
  if (n == 0) throw std::domain_error("szego_check: n must be >= 1");

  const FiniteSpectrum spec = finite_spectrum(p, n);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
    if (spec.divergent && j == spec.divergent->index) continue;
    sum += f(spec.eigenvalues[j]);
    ++count;
  }
  SzegoComparison out;
  out.discrete_mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
  const auto quad = integrate([&](double z) { return f(eta_of_z(p, z)); }, 0.0, kTwoPi,
                              1e-11 * std::max(1.0, std::abs(out.discrete_mean)));
  out.integral = quad.value / kTwoPi;
  out.gap = std::abs(out.discrete_mean - out.integral);
  return out;
}

Matrix toeplitz_truncation(const ChannelParams& p, std::size_t n) {
  validate(p);
  if (n == 0) throw std::domain_error("toeplitz_truncation: n must be >= 1");
  if (n > matrix_size_cap()) throw resource_error("toeplitz_truncation: n exceeds cap");
  const double mk = p.mu * p.kappa;
  if (mk == 1.0) {
    throw std::domain_error("toeplitz_truncation: undefined at mu*kappa = 1");
  }

  // below: delta - (1-mu)(1-kappa)/(1-kappa mu) * sqrt(mu kappa)^{|j-j'|}
  // above: delta + (1-mu)(kappa-1)/(mu kappa-1) * (mu kappa)^{-|j-j'|/2}
  const bool above = mk > 1.0;
  const double coef = above ? (1.0 - p.mu) * (p.kappa - 1.0) / (mk - 1.0)
                            : -(1.0 - p.mu) * (1.0 - p.kappa) / (1.0 - mk);
  const double ratio = above ? 1.0 / std::sqrt(mk) : std::sqrt(mk);
  std::vector<double> pow_d(n, 1.0);
  for (std::size_t d = 1; d < n; ++d) pow_d[d] = pow_d[d - 1] * ratio;

  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t d = i > j ? i - j : j - i;
      m(i, j) = (i == j ? 1.0 : 0.0) + coef * pow_d[d];
    }
  return m;
}

}  // namespace gaussmem
