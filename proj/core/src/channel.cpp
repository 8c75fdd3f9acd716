#include "gaussmem/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "gaussmem/numerics.hpp"

namespace gaussmem {

void validate(const ChannelParams& p) {
  if (!std::isfinite(p.kappa) || p.kappa < 0.0) {
    throw std::domain_error("ChannelParams: kappa must be finite and >= 0");
  }
  if (!std::isfinite(p.mu) || p.mu < 0.0 || p.mu > 1.0) {
    throw std::domain_error("ChannelParams: mu must lie in [0, 1]");
  }
  if (!std::isfinite(p.nbar) || p.nbar < 0.0) {
    throw std::domain_error("ChannelParams: nbar must be finite and >= 0");
  }
}

Regime classify(const ChannelParams& p) {
  validate(p);
  Regime r;
  r.kind = p.kappa < 1.0   ? ChannelKind::Attenuator
           : p.kappa > 1.0 ? ChannelKind::Amplifier
                           : ChannelKind::Identity;
  const double mk = p.mu * p.kappa;
  r.threshold = mk < 1.0   ? ThresholdSide::Below
                : mk > 1.0 ? ThresholdSide::Above
                           : ThresholdSide::At;
  return r;
}

double memoryless_capacity(double eta, double nbar, double energy) {
  if (!std::isfinite(eta) || eta < 0.0) throw std::domain_error("memoryless_capacity: eta < 0");
  if (!std::isfinite(nbar) || nbar < 0.0) throw std::domain_error("memoryless_capacity: nbar < 0");
  if (!std::isfinite(energy) || energy < 0.0) {
    throw std::domain_error("memoryless_capacity: energy < 0");
  }
  if (eta == 1.0) return g(energy);  // both branches reduce to g(E)
  const double noise = eta < 1.0 ? (1.0 - eta) * nbar : (eta - 1.0) * (nbar + 1.0);
  return g(eta * energy + noise) - g(noise);
}

double compose(double eta1, double eta2) {
  if (eta1 < 0.0 || eta2 < 0.0) throw std::domain_error("compose: eta < 0");
  return eta1 * eta2;
}

}  // namespace gaussmem
