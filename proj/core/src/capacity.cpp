#include "gaussmem/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gaussmem/errors.hpp"
#include "gaussmem/memory_model.hpp"
#include "gaussmem/numerics.hpp"
#include "gaussmem/spectrum.hpp"

namespace gaussmem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_energy(double energy) {
  if (!std::isfinite(energy) || energy < 0.0) {
    throw std::domain_error("capacity: energy must be finite and >= 0");
  }
}

}  // namespace

std::optional<double> special_case_capacity(const ChannelParams& p, double energy) {
  validate(p);
  check_energy(energy);
  if (p.kappa == 1.0 || p.mu == 1.0) return g(energy);  // identity / perfect memory
  if (p.mu == 0.0) return memoryless_capacity(p.kappa, p.nbar, energy);
  if (p.kappa == 0.0) return memoryless_capacity(p.mu, p.nbar, energy);  // pure memory
  return std::nullopt;
}

double amplifier_limit(double mu, double nbar, double energy) {
  if (!(mu > 0.0) || mu > 1.0) {
    throw std::domain_error("amplifier_limit: mu must lie in (0, 1]");
  }
  if (nbar < 0.0) throw std::domain_error("amplifier_limit: nbar < 0");
  check_energy(energy);
  const double noise = (1.0 - mu) / mu * (nbar + 1.0);
  return g(energy / mu + noise) - g(noise);
}

CapacityResult capacity_integral(const ChannelParams& p, double energy, double tol) {
  validate(p);
  check_energy(energy);
  if (p.mu * p.kappa == 1.0) {
    throw std::domain_error("capacity_integral: unsupported at mu*kappa = 1");
  }
  if (energy == 0.0) {
    return CapacityResult{0.0, 0.0, CapacityMethod::Integral, std::nullopt};
  }

  EnergyDistribution dist = optimal_distribution(p, energy);
  const auto integrand = [&](double z) {
    const double nz = dist(z);
    const double noise = thermal_noise_term(p, z);
    return g(eta_of_z(p, z) * nz + noise) - g(noise);
  };
  // The integrand vanishes identically on [0, z0]; the positive-part kink
  // sits at the lower limit.
  const double abs_tol = tol * std::max(1.0, g(energy)) * kTwoPi;
  const auto quad = integrate(integrand, dist.z0, kTwoPi, abs_tol);

  CapacityResult result;
  result.nats_per_use = quad.value / kTwoPi;
  // Multiplier error propagates into the capacity with slope dC/dE = lambda.
  result.quadrature_error = quad.error_estimate / kTwoPi +
                            dist.lambda * energy * std::max(dist.energy_residual, 1e-12) +
                            1e-15 * std::max(1.0, result.nats_per_use);
  result.method = CapacityMethod::Integral;
  result.distribution = std::move(dist);
  return result;
}

CapacityResult asymptotic_capacity(const ChannelParams& p, double energy, double tol) {
  validate(p);
  check_energy(energy);
  if (energy == 0.0) {
    return CapacityResult{0.0, 0.0, CapacityMethod::SpecialCase, std::nullopt};
  }
  if (const auto special = special_case_capacity(p, energy)) {
    return CapacityResult{*special, 0.0, CapacityMethod::SpecialCase, std::nullopt};
  }
  if (p.mu * p.kappa == 1.0) {
    throw std::domain_error("asymptotic_capacity: unsupported at mu*kappa = 1");
  }
  return capacity_integral(p, energy, tol);
}

namespace detail {

double discrete_waterfill_capacity(std::span<const double> etas, double nbar,
                                   double energy) {
  const std::size_t count = etas.size();
  if (count == 0) throw std::domain_error("discrete_waterfill_capacity: no modes");
  if (energy == 0.0) return 0.0;

  const auto noise_of = [nbar](double eta) {
    return eta <= 1.0 ? (1.0 - eta) * nbar : (eta - 1.0) * (nbar + 1.0);
  };
  const auto photons = [&](double eta, double lambda) {
    if (eta <= 0.0) return 0.0;  // unusable mode
    const double u = lambda / eta;
    const double bose = u > 700.0 ? 0.0 : 1.0 / std::expm1(u);
    const double value = (bose - noise_of(eta)) / eta;
    return value > 0.0 ? value : 0.0;
  };
  const auto mean_energy = [&](double lambda) {
    double sum = 0.0;
    for (double eta : etas) sum += photons(eta, lambda);
    return sum / static_cast<double>(count);
  };

  double lo = 1.0;
  while (mean_energy(lo) <= energy) {
    lo *= 0.5;
    if (lo < 1e-300) throw solver_error("discrete_waterfill_capacity: bracket underflow");
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (mean_energy(hi) >= energy) {
    hi *= 2.0;
    if (hi > 1e300) throw solver_error("discrete_waterfill_capacity: bracket overflow");
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mean_energy(mid) > energy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);

  double total = 0.0;
  for (double eta : etas) {
    if (eta <= 0.0) continue;
    const double noise = noise_of(eta);
    total += g(eta * photons(eta, lambda) + noise) - g(noise);
  }
  return total / static_cast<double>(count);
}

}  // namespace detail

BoundsPair finite_p_bounds(const ChannelParams& p, double energy, std::size_t p_modes,
                           std::span<const std::size_t> ell_list) {
  validate(p);
  check_energy(energy);
  if (p_modes == 0) throw std::domain_error("finite_p_bounds: P must be >= 1");
  if (ell_list.empty()) throw std::domain_error("finite_p_bounds: ell list is empty");
  if (p.mu * p.kappa == 1.0) {
    throw std::domain_error("finite_p_bounds: unsupported at mu*kappa = 1");
  }

  std::vector<double> group_min(p_modes, std::numeric_limits<double>::infinity());
  std::vector<double> group_max(p_modes, -std::numeric_limits<double>::infinity());

  for (std::size_t ell : ell_list) {
    if (ell == 0) throw std::domain_error("finite_p_bounds: ell must be >= 1");
    const std::size_t n = ell * p_modes;
    const FiniteSpectrum spec = finite_spectrum(p, n);  // checks the size cap
    std::size_t included = spec.eigenvalues.size();
    if (spec.divergent) --included;  // eigenvalues are ascending; divergent is last
    if (included < p_modes) {
      throw std::domain_error("finite_p_bounds: ell too small to fill every group");
    }
    for (std::size_t grp = 0; grp < p_modes; ++grp) {
      const std::size_t begin = grp * ell;
      const std::size_t end = std::min((grp + 1) * ell, included);
      if (begin >= end) continue;
      group_min[grp] = std::min(group_min[grp], spec.eigenvalues[begin]);
      group_max[grp] = std::max(group_max[grp], spec.eigenvalues[end - 1]);
    }
  }

  // Attenuators improve with higher transmissivity; amplifiers with lower
  // gain. Orient the sandwich accordingly.
  const bool amplifier = p.kappa > 1.0;
  const double cap_min = detail::discrete_waterfill_capacity(group_min, p.nbar, energy);
  const double cap_max = detail::discrete_waterfill_capacity(group_max, p.nbar, energy);

  BoundsPair out;
  out.lower = amplifier ? cap_max : cap_min;
  out.upper = amplifier ? cap_min : cap_max;
  out.p_modes = p_modes;
  out.ell_list.assign(ell_list.begin(), ell_list.end());
  return out;
}

double additive_capacity(double mu, double n_c, double energy) {
  if (!std::isfinite(mu) || mu < 0.0 || mu >= 1.0) {
    throw std::domain_error("additive_capacity: mu must lie in [0, 1)");
  }
  if (!std::isfinite(n_c) || n_c < 0.0) {
    throw std::domain_error("additive_capacity: n_c must be >= 0");
  }
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw std::domain_error("additive_capacity: energy must be positive");
  }
  const double root = std::sqrt(mu);
  const double threshold = 2.0 * n_c * root / (1.0 - root);
  if (energy < threshold) {
    throw std::domain_error(
        "additive_capacity: energy below the positivity threshold 2 n_c sqrt(mu)/(1-sqrt(mu)) = " +
        std::to_string(threshold));
  }
  if (mu == 0.0 || n_c == 0.0) return g(energy + n_c) - g(n_c);

  // distributed noise n_c (1-mu) / ((1-sqrt(mu))^2 + 4 sqrt(mu) sin^2(z/4))
  const auto integrand = [&](double z) {
    const double s = std::sin(0.25 * z);
    const double den = (1.0 - root) * (1.0 - root) + 4.0 * root * s * s;
    return g(n_c * (1.0 - mu) / den);
  };
  const auto quad = integrate(integrand, 0.0, kTwoPi, 1e-11 * std::max(1.0, g(n_c)) * kTwoPi);
  return g(energy + n_c) - quad.value / kTwoPi;
}

double additive_lambda(double n_c, double energy) {
  if (!(energy > 0.0)) throw std::domain_error("additive_lambda: energy must be positive");
  if (n_c < 0.0) throw std::domain_error("additive_lambda: n_c must be >= 0");
  return std::log1p(1.0 / (n_c + energy));
}

}  // namespace gaussmem
