#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gaussmem/channel.hpp"
#include "gaussmem/waterfill.hpp"

namespace gaussmem {

enum class CapacityMethod { Integral, SpecialCase, AdditiveLimit };

struct CapacityResult {
  double nats_per_use = 0.0;
  double quadrature_error = 0.0;  // quadrature estimate plus multiplier-solve slack
  CapacityMethod method = CapacityMethod::Integral;
  std::optional<EnergyDistribution> distribution;
};

/// Closed forms for the analytically trivial parameter points
/// (kappa in {0, 1} or mu in {0, 1}, matched exactly); empty otherwise.
std::optional<double> special_case_capacity(const ChannelParams& params, double energy);

/// Infinite-amplification limit kappa -> inf, where eta(z) -> 1/mu.
double amplifier_limit(double mu, double nbar, double energy);

/// Capacity via quadrature over the water-filled distribution, without
/// special-case dispatch. Requires mu*kappa != 1.
CapacityResult capacity_integral(const ChannelParams& params, double energy,
                                 double tol = 1e-11);

/// Asymptotic classical capacity in nats per use: special cases are matched
/// exactly, everything else goes through the integral path.
CapacityResult asymptotic_capacity(const ChannelParams& params, double energy,
                                   double tol = 1e-11);

struct BoundsPair {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t p_modes = 0;
  std::vector<std::size_t> ell_list;
};

/// Finite-P capacity sandwich from grouped finite-size spectra. The
/// inf/sup over block sizes is approximated by the min/max over ell_list;
/// the result is an empirical bound labeled with the list used.
BoundsPair finite_p_bounds(const ChannelParams& params, double energy,
                           std::size_t p_modes, std::span<const std::size_t> ell_list);

/// Capacity of the correlated additive-noise channel (kappa -> 1, N -> inf
/// with (1-kappa)(N + 1/2) = n_c fixed). Valid when the positive part never
/// binds, i.e. energy >= 2 n_c sqrt(mu) / (1 - sqrt(mu)).
double additive_capacity(double mu, double n_c, double energy);

/// Multiplier of the additive-noise water filling: ln(1 + 1/(n_c + energy)).
double additive_lambda(double n_c, double energy);

namespace detail {

// Discrete water filling over P modes: maximize the per-mode capacity sum
// under (1/P) sum N_p = energy, N_p >= 0.
double discrete_waterfill_capacity(std::span<const double> etas, double nbar,
                                   double energy);

}  // namespace detail

}  // namespace gaussmem
