#include "gaussmem/waterfill.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gaussmem/errors.hpp"
#include "gaussmem/numerics.hpp"
#include "gaussmem/spectrum.hpp"

namespace gaussmem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_not_threshold(const ChannelParams& p, const char* who) {
  if (p.mu * p.kappa == 1.0) {
    throw std::domain_error(std::string(who) + ": unsupported at mu*kappa = 1");
  }
}

}  // namespace

double unconstrained_n(const ChannelParams& p, double z, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("unconstrained_n: lambda must be positive");
  }
  const double eta = eta_of_z(p, z);
  if (eta <= 0.0) return -kInf;  // unusable mode (kappa = mu, z = 0)
  const double u = lambda / eta;
  // For u > ~700 the Bose term underflows any meaningful photon count.
  const double bose = u > 700.0 ? 0.0 : 1.0 / std::expm1(u);
  return (bose - thermal_noise_term(p, z)) / eta;
}

double EnergyDistribution::operator()(double z) const {
  const double value = unconstrained_n(params, z, lambda);
  return value > 0.0 ? value : 0.0;
}

namespace detail {

double locate_cutoff(const ChannelParams& p, double lambda) {
  const auto nz = [&](double z) { return unconstrained_n(p, z, lambda); };
  if (nz(0.0) > 0.0) return 0.0;
  if (nz(kTwoPi) <= 0.0) return kTwoPi;
  // single sign change: the unconstrained solution is increasing in z
  double lo = 0.0, hi = kTwoPi;
  for (int iter = 0; iter < 200 && (hi - lo) > 4.0 * std::numeric_limits<double>::epsilon();
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (nz(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

EnergyAtLambda energy_at_lambda(const ChannelParams& p, double lambda) {
  const double z0 = locate_cutoff(p, lambda);
  if (z0 >= kTwoPi) return {0.0, z0};
  // Smooth on (z0, 2pi); the kink sits exactly at the integration boundary.
  const double peak = unconstrained_n(p, kTwoPi, lambda);  // N is increasing in z
  const double tol = std::max(1e-13 * (kTwoPi - z0) * std::max(peak, 1.0), 1e-15);
  const auto quad =
      integrate([&](double z) { return unconstrained_n(p, z, lambda); }, z0, kTwoPi, tol);
  return {quad.value / kTwoPi, z0};
}

}  // namespace detail

double solve_lambda(const ChannelParams& p, double energy) {
  validate(p);
  check_not_threshold(p, "solve_lambda");
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw std::domain_error("solve_lambda: energy must be positive");
  }

  const auto energy_at = [&](double lambda) { return detail::energy_at_lambda(p, lambda).energy; };

  // energy(lambda) is continuous, strictly decreasing, spanning (0, inf).
  double lo = 1.0;
  while (energy_at(lo) <= energy) {
    lo *= 0.5;
    if (lo < 1e-300) throw solver_error("solve_lambda: lambda bracket underflow");
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (energy_at(hi) >= energy) {
    hi *= 2.0;
    if (hi > 1e300) throw solver_error("solve_lambda: lambda bracket overflow");
  }

  for (int iter = 0; iter < 200 && (hi - lo) > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (energy_at(mid) > energy) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);
  const double residual = std::abs(energy_at(lambda) - energy) / energy;
  if (residual > 1e-8) {
    throw solver_error("solve_lambda: energy residual " + std::to_string(residual) +
                       " above tolerance at lambda = " + std::to_string(lambda));
  }
  return lambda;
}

EnergyDistribution optimal_distribution(const ChannelParams& p, double energy) {
  const double lambda = solve_lambda(p, energy);
  const auto at = detail::energy_at_lambda(p, lambda);
  EnergyDistribution dist;
  dist.params = p;
  dist.lambda = lambda;
  dist.z0 = at.z0;
  dist.energy = energy;
  dist.energy_residual = std::abs(at.energy - energy) / energy;
  return dist;
}

double critical_temperature(double kappa, double mu, double energy) {
  ChannelParams base{kappa, mu, 0.0};
  validate(base);
  check_not_threshold(base, "critical_temperature");
  if (!(energy > 0.0)) throw std::domain_error("critical_temperature: energy must be positive");
  if (kappa == mu) return 0.0;  // eta(0) = 0: any N > 0 clips

  const auto clips = [&](double nbar) {
    return optimal_distribution(ChannelParams{kappa, mu, nbar}, energy).z0 > 0.0;
  };

  if (clips(0.0)) return 0.0;
  double hi = std::max(1.0, energy);
  while (!clips(hi)) {
    hi *= 2.0;
    if (hi > 1e9) return kInf;  // flat spectrum (kappa = 1 or mu = 1): never clips
  }
  double lo = hi > std::max(1.0, energy) ? hi * 0.5 : 0.0;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (clips(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double critical_energy(const ChannelParams& p) {
  validate(p);
  check_not_threshold(p, "critical_energy");
  if (p.kappa == p.mu && p.nbar > 0.0) return kInf;  // eta(0) = 0 forces clipping

  const double noise0 = thermal_noise_term(p, 0.0);
  if (noise0 <= 0.0) return 0.0;  // nbar = 0 attenuator, or eta == 1: nothing to clip
  const double eta0 = eta_of_z(p, 0.0);
  // lambda fixed by unconstrained_n(z = 0) = 0
  const double lambda0 = eta0 * std::log1p(1.0 / noise0);
  return detail::energy_at_lambda(p, lambda0).energy;
}

}  // namespace gaussmem
