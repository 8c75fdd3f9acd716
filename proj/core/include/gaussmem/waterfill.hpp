#pragma once

#include "gaussmem/channel.hpp"

namespace gaussmem {

// Optimal input-energy density N(z) = max(unconstrained_n(z, lambda), 0)
// for the solved multiplier. N(z) vanishes on [0, z0) and is positive and
// nondecreasing on (z0, 2pi].
struct EnergyDistribution {
  ChannelParams params;
  double lambda = 0.0;           // Lagrange multiplier
  double z0 = 0.0;               // cutoff in [0, 2pi]
  double energy = 0.0;           // requested mean photons per use
  double energy_residual = 0.0;  // |integral - energy| / energy at the solution

  double operator()(double z) const;
};

/// The Lagrange stationary solution before positive-part clipping; may be
/// negative, and -infinity where eta(z) = 0 (kappa = mu, z = 0).
double unconstrained_n(const ChannelParams& params, double z, double lambda);

/// Multiplier lambda with int max(unconstrained_n, 0) dz/2pi = energy.
/// Unique: the clipped energy integral is strictly decreasing in lambda.
double solve_lambda(const ChannelParams& params, double energy);

EnergyDistribution optimal_distribution(const ChannelParams& params, double energy);

/// Environment photon number at which the cutoff z0 first leaves zero for
/// the given energy budget. Returns 0 when kappa == mu (any N > 0 clips)
/// and +infinity when no temperature produces clipping (flat spectra,
/// kappa = 1 or mu = 1).
double critical_temperature(double kappa, double mu, double energy);

/// Minimum energy for which every normal mode receives positive energy;
/// +infinity when kappa == mu and nbar > 0.
double critical_energy(const ChannelParams& params);

namespace detail {

// Clipped mean energy at a given multiplier together with the cutoff.
struct EnergyAtLambda {
  double energy;
  double z0;
};
EnergyAtLambda energy_at_lambda(const ChannelParams& params, double lambda);

// First z in [0, 2pi] with unconstrained_n > 0 (2pi if none).
double locate_cutoff(const ChannelParams& params, double lambda);

}  // namespace detail

}  // namespace gaussmem
