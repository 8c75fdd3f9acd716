#pragma once

#include <cstddef>
#include <functional>

#include "gaussmem/channel.hpp"
#include "gaussmem/matrix.hpp"

namespace gaussmem {

/// Asymptotic spectral symbol on z in [0, 2pi]:
///   eta(z) = (kappa + mu - 2 sqrt(kappa mu) cos(z/2)) /
///            (1 + kappa mu - 2 sqrt(kappa mu) cos(z/2)).
/// The same expression covers both sides of the threshold; the only
/// singular point is z = 0 at mu*kappa = 1 (zero denominator).
double eta_of_z(const ChannelParams& params, double z);

/// The noise photon number entering the capacity integrands:
/// (1 - eta(z)) nbar for attenuators, (eta(z) - 1)(nbar + 1) for
/// amplifiers. Evaluated in a cancellation-free form.
double thermal_noise_term(const ChannelParams& params, double z);

/// kappa <-> mu exchange (attenuator) or the inverse map
/// (mu', kappa') = (1/kappa, 1/mu) (amplifier). eta(z) is pointwise
/// invariant; an above-threshold amplifier maps below threshold.
ChannelParams dual_params(const ChannelParams& params);

struct AsymptoticSpectrum {
  ChannelParams params;
  bool increasing;  // eta nondecreasing in z (kappa <= 1)
  double operator()(double z) const { return eta_of_z(params, z); }
};

AsymptoticSpectrum asymptotic_spectrum(const ChannelParams& params);

struct SzegoComparison {
  double discrete_mean;
  double integral;
  double gap;
};

/// Compares (1/n) sum f(eta_j^(n)) with the symbol average
/// int f(eta(z)) dz / 2pi. Above threshold the divergent eigenvalue is
/// excluded from the mean.
SzegoComparison szego_check(const ChannelParams& params,
                            const std::function<double(double)>& f, std::size_t n);

/// n x n truncation of the limiting Toeplitz matrix (M^(inf) below
/// threshold, the rescaled tail above threshold).
Matrix toeplitz_truncation(const ChannelParams& params, std::size_t n);

}  // namespace gaussmem
