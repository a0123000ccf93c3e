#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "codedfl/latency.hpp"
#include "codedfl/rng.hpp"

using namespace codedfl;
using latency::DeviceProfile;
using latency::WorkloadDescriptor;

TEST_SUITE("latency") {

TEST_CASE("compute time: deterministic floor plus exponential setup") {
  DeviceProfile dp;
  dp.mac_rate = 2e6;
  dp.setup_rate = std::numeric_limits<double>::infinity();
  Rng rng = make_rng(1);
  CHECK(latency::sample_compute(0.0, dp, rng) == doctest::Approx(0.0));
  CHECK(latency::sample_compute(4e6, dp, rng) == doctest::Approx(2.0));

  dp.setup_rate = 5.0;
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += latency::sample_compute(4e6, dp, rng);
  mean /= n;
  const double expected = 2.0 + 1.0 / 5.0;
  CHECK(std::abs(mean - expected) / expected < 0.01);

  // Stochastic dominance over the floor.
  for (int i = 0; i < 1000; ++i) CHECK(latency::sample_compute(4e6, dp, rng) >= 2.0);
}

TEST_CASE("the paper's setup rule: eta = 2 tau / rho gives mean 1.5 rho/tau") {
  DeviceProfile dp;
  dp.mac_rate = 25e6;
  const double rho = 4e7;
  dp.setup_rate = 2.0 * dp.mac_rate / rho;
  Rng rng = make_rng(2);
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += latency::sample_compute(rho, dp, rng);
  mean /= n;
  const double expected = 1.5 * rho / dp.mac_rate;
  CHECK(std::abs(mean - expected) / expected < 0.01);
}

TEST_CASE("link time: geometric retries and header overhead") {
  Rng rng = make_rng(3);
  // p=0 -> exactly one try.
  CHECK(latency::sample_link(1e6, 5e6, 0.0, 0.1, rng) == doctest::Approx(1.1e6 / 5e6));
  CHECK(latency::sample_link(0.0, 5e6, 0.5, 0.1, rng) == doctest::Approx(0.0));

  // Monte-Carlo mean matches b(1+h)/(rate(1-p)).
  const double b = 1e7, rate = 5e6, p = 0.1, h = 0.1;
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += latency::sample_link(b, rate, p, h, rng);
  mean /= n;
  const double expected = b * (1 + h) / (rate * (1 - p));
  CHECK(expected == doctest::Approx(2.4444444).epsilon(1e-4));
  CHECK(std::abs(mean - expected) / expected < 0.01);

  // Quantized support: every sample is an integer number of transmissions.
  for (int i = 0; i < 1000; ++i) {
    const double t = latency::sample_link(b, rate, p, h, rng);
    const double tries = t * rate / (b * (1 + h));
    CHECK(tries == doctest::Approx(std::round(tries)));
    CHECK(tries >= 1.0);
  }
}

TEST_CASE("sampling is reproducible under a fixed seed") {
  DeviceProfile dp;
  dp.setup_rate = 2.0;
  Rng a = make_rng(99), b = make_rng(99);
  for (int i = 0; i < 100; ++i)
    CHECK(latency::sample_compute(1e6, dp, a) == latency::sample_compute(1e6, dp, b));
}

TEST_CASE("MAC counts match the closed forms") {
  // Epoch gradient at d=2000, c=10 -> 4e7.
  CHECK(latency::mac_count({.kind = WorkloadDescriptor::Kind::kEpochGradient,
                            .d = 2000,
                            .c = 10}) == doctest::Approx(4e7));
  // No sharing at redundancy 1.
  CHECK(latency::mac_count({.kind = WorkloadDescriptor::Kind::kPadEncode,
                            .d = 100,
                            .c = 10,
                            .alpha = 1}) == doctest::Approx(0.0));
  // Share-pair payload entries: d((d+1)/2 + c).
  CHECK(latency::shared_pair_entries(2000, 10) == doctest::Approx(2000.0 * (2001.0 / 2 + 10)));
  CHECK(latency::mac_count({.kind = WorkloadDescriptor::Kind::kPadEncode,
                            .d = 2000,
                            .c = 10,
                            .alpha = 3}) ==
        doctest::Approx(2.0 * latency::shared_pair_entries(2000, 10)));
  CHECK(latency::mac_count({.kind = WorkloadDescriptor::Kind::kShareSum,
                            .d = 50,
                            .c = 10,
                            .group_size = 12}) ==
        doctest::Approx(11.0 * latency::shared_pair_entries(50, 10)));
  CHECK(latency::mac_count({.kind = WorkloadDescriptor::Kind::kConventionalMinibatch,
                            .d = 256,
                            .c = 10,
                            .batch = 16}) == doctest::Approx(2.0 * 16 * 256 * 10));
  CHECK(latency::mac_count({.kind = WorkloadDescriptor::Kind::kSecaggDecode,
                            .d = 10,
                            .c = 3,
                            .threshold = 4}) == doctest::Approx(5.0 * 30));
}

TEST_CASE("profile validation") {
  DeviceProfile dp;
  dp.loss_prob = 1.0;
  CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
  dp.loss_prob = 0.1;
  dp.mac_rate = 0.0;
  CHECK_THROWS_AS(dp.validate(), std::invalid_argument);
}

}  // TEST_SUITE
