#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gaussmem/numerics.hpp"
#include "gaussmem/spectrum.hpp"
#include "gaussmem/waterfill.hpp"

using namespace gaussmem;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("unconstrained_n anchors") {
  // flat spectrum (mu = 0, kappa = 0.5): lambda = 0.5 ln(1 + 1/4) gives N = 8
  const ChannelParams p{0.5, 0.0, 0.0};
  const double lambda = 0.5 * std::log1p(0.25);
  for (double z : {0.1, 1.0, 4.0, kTwoPi}) {
    CHECK(unconstrained_n(p, z, lambda) == doctest::Approx(8.0).epsilon(1e-10));
  }

  // zero temperature attenuator: positive for any lambda > 0
  const ChannelParams zt{0.7, 0.4, 0.0};
  for (double lam : {1e-3, 0.1, 5.0}) {
    for (double z : {0.0, 2.0, kTwoPi}) {
      CHECK(unconstrained_n(zt, z, lam) > 0.0);
    }
  }

  // lambda -> infinity: the Bose term dies, leaving -(1-eta) nbar / eta
  const ChannelParams hot{0.6, 0.3, 2.0};
  const double z = 2.0;
  const double eta = eta_of_z(hot, z);
  CHECK(unconstrained_n(hot, z, 1e4) ==
        doctest::Approx(-(1.0 - eta) * hot.nbar / eta).epsilon(1e-9));

  // eta(0) = 0 at kappa = mu: unusable channel marker
  CHECK(unconstrained_n({0.5, 0.5, 1.0}, 0.0, 1.0) ==
        -std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(unconstrained_n(p, 1.0, 0.0), std::domain_error);
}

TEST_CASE("solve_lambda closed forms") {
  // flat spectrum: E = (1/eta) / (e^{lambda/eta} - 1)
  CHECK(solve_lambda({0.5, 0.0, 0.0}, 8.0) ==
        doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-9));
  CHECK(solve_lambda({0.5, 0.0, 0.0}, 8.0) ==
        doctest::Approx(0.1115717756571049).epsilon(1e-9));
  // eta = 1: 1/(e^lambda - 1) = 1
  CHECK(solve_lambda({1.0, 0.0, 0.0}, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("optimal_distribution cutoff behavior around the critical temperature") {
  // below N_crit ~ 0.8 all modes are used
  auto cold = optimal_distribution({0.9, 0.8, 0.5, }, 8.0);
  CHECK(cold.z0 == 0.0);
  CHECK(cold.energy_residual < 1e-8);

  // above it a finite fraction is shut off
  auto hot = optimal_distribution({0.9, 0.8, 1.2}, 8.0);
  CHECK(hot.z0 > 0.0);
  CHECK(hot(0.5 * hot.z0) == 0.0);
  CHECK(hot(hot.z0 + 0.1) > 0.0);

  // flat spectrum: constant N(z) = E
  auto flat = optimal_distribution({0.5, 0.0, 1.0}, 8.0);
  CHECK(flat.z0 == 0.0);
  for (double z : {0.3, 2.0, 5.0}) {
    CHECK(flat(z) == doctest::Approx(8.0).epsilon(1e-9));
  }
}

TEST_CASE("water-filling contracts on random parameter sets") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> uk(0.05, 0.95), um(0.05, 0.95),
      un(0.0, 3.0), ue(0.5, 20.0), pick(0.0, 1.0);
  int done = 0;
  while (done < 8) {
    ChannelParams p;
    p.kappa = pick(rng) < 0.5 ? uk(rng) : 1.0 + 2.0 * uk(rng);
    p.mu = um(rng);
    p.nbar = un(rng);
    if (std::abs(p.mu * p.kappa - 1.0) < 1e-6) continue;
    const double energy = ue(rng);
    const auto dist = optimal_distribution(p, energy);
    ++done;

    CHECK(dist.energy_residual < 1e-8);

    // N(z) nondecreasing on a dense grid
    double prev = dist(0.0);
    for (int i = 1; i <= 400; ++i) {
      const double nz = dist(kTwoPi * i / 400.0);
      CHECK(nz >= prev - 1e-10 * std::max(1.0, prev));
      prev = nz;
    }

    // boundary condition at a positive cutoff
    if (dist.z0 > 0.0) {
      CHECK(std::abs(unconstrained_n(p, dist.z0, dist.lambda)) < 1e-8);
    }
  }
}

TEST_CASE("clipped energy is strictly decreasing in lambda") {
  const ChannelParams p{0.9, 0.8, 1.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : {0.01, 0.05, 0.2, 1.0, 4.0}) {
    const double e = detail::energy_at_lambda(p, lam).energy;
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("critical temperature landmarks") {
  const double nc_att = critical_temperature(0.9, 0.8, 8.0);
  CHECK(nc_att > 0.7);
  CHECK(nc_att < 0.9);

  const double nc_amp = critical_temperature(1.1, 0.8, 8.0);
  CHECK(nc_amp > 9.5);
  CHECK(nc_amp < 10.1);

  // degenerate symbol: any positive temperature clips
  CHECK(critical_temperature(0.8, 0.8, 8.0) == 0.0);
}

TEST_CASE("critical temperature grows with the energy budget") {
  CHECK(critical_temperature(0.9, 0.8, 20.0) > critical_temperature(0.9, 0.8, 2.0));
}

TEST_CASE("critical energy") {
  CHECK(critical_energy({0.0, 0.8, 0.5}) == 0.0);
  CHECK(critical_energy({1.0, 0.8, 0.5}) == 0.0);
  CHECK(std::isinf(critical_energy({0.8, 0.8, 0.5})));
  CHECK(critical_energy({0.9, 0.8, 0.0}) == 0.0);  // zero temperature: nothing clips

  // round trip: E_crit at N = N_crit(E) returns E within 1%
  const double e = 8.0;
  const double nc = critical_temperature(0.9, 0.8, e);
  CHECK(critical_energy({0.9, 0.8, nc}) == doctest::Approx(e).epsilon(0.01));

  // grows with temperature
  CHECK(critical_energy({0.9, 0.8, 2.0}) > critical_energy({0.9, 0.8, 0.5}));
}

TEST_CASE("high-temperature limit concentrates the energy") {
  double prev = -1.0;
  for (double nbar : {50.0, 1000.0, 1e6}) {
    const double z0 = optimal_distribution({0.9, 0.8, nbar}, 8.0).z0;
    CHECK(z0 > prev);
    prev = z0;
  }
  CHECK(prev > 0.9 * kTwoPi);
}

TEST_CASE("waterfill refuses the threshold and bad energies") {
  CHECK_THROWS_AS(solve_lambda({2.0, 0.5, 0.0}, 8.0), std::domain_error);
  CHECK_THROWS_AS(solve_lambda({0.9, 0.8, 0.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(critical_temperature(2.0, 0.5, 8.0), std::domain_error);
  CHECK_THROWS_AS(critical_energy({2.0, 0.5, 1.0}), std::domain_error);
}
