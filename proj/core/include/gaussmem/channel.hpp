#pragma once

#include <cstddef>

namespace gaussmem {

enum class ChannelKind { Attenuator, Identity, Amplifier };
enum class ThresholdSide { Below, At, Above };

// Physical channel: transmissivity/gain kappa, memory beam-splitter
// transmissivity mu, environment mean photon number nbar.
struct ChannelParams {
  double kappa = 1.0;
  double mu = 0.0;
  double nbar = 0.0;
};

struct Regime {
  ChannelKind kind;
  ThresholdSide threshold;  // sign of mu*kappa - 1, compared exactly
};

// Throws std::domain_error unless kappa >= 0, 0 <= mu <= 1, nbar >= 0,
// all finite.
void validate(const ChannelParams& params);

Regime classify(const ChannelParams& params);

/// Constrained classical capacity of a single memoryless phase-insensitive
/// channel with effective transmissivity/gain `eta`, thermal environment
/// `nbar` and mean input energy `energy`, in nats per use.
double memoryless_capacity(double eta, double nbar, double energy);

/// Composition of two attenuators/amplifiers over the same thermal
/// environment multiplies the transmissivities.
double compose(double eta1, double eta2);

}  // namespace gaussmem
