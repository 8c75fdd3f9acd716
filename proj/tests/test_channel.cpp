#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gaussmem/channel.hpp"
#include "gaussmem/numerics.hpp"

using namespace gaussmem;

TEST_CASE("memoryless capacity anchors") {
  CHECK(memoryless_capacity(1.0, 3.7, 8.0) == doctest::Approx(g(8.0)).epsilon(1e-15));
  // g(4.5) - g(0.5), evaluated directly
  CHECK(memoryless_capacity(0.5, 1.0, 8.0) ==
        doctest::Approx(g(4.5) - g(0.5)).epsilon(1e-15));
  CHECK(memoryless_capacity(0.5, 1.0, 8.0) ==
        doctest::Approx(1.652994969375886).epsilon(1e-12));
  CHECK(memoryless_capacity(0.5, 0.0, 0.0) == 0.0);
}

TEST_CASE("memoryless capacity rejects negative arguments") {
  CHECK_THROWS_AS(memoryless_capacity(-0.1, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(memoryless_capacity(0.5, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(memoryless_capacity(0.5, 0.0, -1.0), std::domain_error);
}

TEST_CASE("memoryless capacity monotonicities") {
  for (double eta : {0.3, 0.8, 1.7}) {
    double prev = memoryless_capacity(eta, 0.0, 5.0);
    for (double nbar : {0.5, 1.0, 2.0, 4.0}) {
      const double c = memoryless_capacity(eta, nbar, 5.0);
      CHECK(c <= prev + 1e-12);
      prev = c;
    }
    prev = memoryless_capacity(eta, 1.0, 0.0);
    for (double e : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double c = memoryless_capacity(eta, 1.0, e);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
  }
}

TEST_CASE("compose multiplies transmissivities") {
  CHECK(compose(0.5, 0.5) == 0.25);
  CHECK(compose(1.0, 0.37) == 0.37);
  CHECK(compose(2.0, 3.0) == 6.0);
  CHECK_THROWS_AS(compose(-1.0, 0.5), std::domain_error);
}

TEST_CASE("capacity decreases under composition") {
  for (double a : {0.3, 0.6, 0.9}) {
    for (double b : {0.4, 0.7}) {
      const double c = memoryless_capacity(compose(a, b), 0.7, 5.0);
      CHECK(c <= memoryless_capacity(a, 0.7, 5.0) + 1e-12);
      CHECK(c <= memoryless_capacity(b, 0.7, 5.0) + 1e-12);
    }
  }
}

TEST_CASE("classify") {
  auto r = classify({0.9, 0.8, 0.0});
  CHECK(r.kind == ChannelKind::Attenuator);
  CHECK(r.threshold == ThresholdSide::Below);

  r = classify({4.0, 0.5, 0.0});
  CHECK(r.kind == ChannelKind::Amplifier);
  CHECK(r.threshold == ThresholdSide::Above);

  r = classify({2.0, 0.5, 0.0});
  CHECK(r.kind == ChannelKind::Amplifier);
  CHECK(r.threshold == ThresholdSide::At);

  r = classify({1.0, 0.3, 1.0});
  CHECK(r.kind == ChannelKind::Identity);
}

TEST_CASE("validate rejects out-of-range parameters") {
  CHECK_THROWS_AS(validate({-0.1, 0.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(validate({0.5, 1.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(validate({0.5, -0.1, 0.0}), std::domain_error);
  CHECK_THROWS_AS(validate({0.5, 0.5, -1.0}), std::domain_error);
  CHECK_THROWS_AS(validate({std::nan(""), 0.5, 0.0}), std::domain_error);
  CHECK_NOTHROW(validate({0.5, 0.5, 0.0}));
}
