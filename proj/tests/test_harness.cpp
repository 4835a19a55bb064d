// Monte-Carlo harness: deterministic per-trial RNG streams, Wilson intervals,
// analytic cross-checks, and worker-count independence.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qeclab/codes.hpp"
#include "qeclab/harness.hpp"
#include "qeclab/noise.hpp"

using namespace qeclab;

TEST_CASE("per-trial RNG streams are deterministic and decorrelated") {
  // same (seed, trial) always yields the same stream
  auto a = trial_rng(42, 7);
  auto b = trial_rng(42, 7);
  for (int i = 0; i < 16; ++i) CHECK(a() == b());

  // different trials diverge immediately
  auto c = trial_rng(42, 8);
  auto d = trial_rng(42, 7);
  CHECK(c() != d());

  // splitmix64 is a bijection-ish scramble: no fixed point at small inputs
  CHECK(splitmix64(0) != 0);
  CHECK(splitmix64(1) != 1);
  CHECK(splitmix64(0) != splitmix64(1));
}

TEST_CASE("Wilson interval brackets the point estimate") {
  auto r = RateEstimate::from_counts(1000, 37);
  CHECK(r.estimate == Catch::Approx(0.037));
  CHECK(r.wilson_low < r.estimate);
  CHECK(r.estimate < r.wilson_high);
  CHECK(r.wilson_low >= 0.0);
  CHECK(r.wilson_high <= 1.0);

  // zero failures: lower bound collapses to zero, upper stays positive
  auto z = RateEstimate::from_counts(100, 0);
  CHECK(z.estimate == 0.0);
  CHECK(z.wilson_low == Catch::Approx(0.0).margin(1e-12));
  CHECK(z.wilson_high > 0.0);

  // all failures mirrors the zero-failure case
  auto f = RateEstimate::from_counts(100, 100);
  CHECK(f.wilson_high == Catch::Approx(1.0).margin(1e-12));
  CHECK(f.wilson_low < 1.0);

  CHECK_THROWS(RateEstimate::from_counts(0, 0));
}

TEST_CASE("noiseless channel never fails") {
  const auto code = make_rep3();
  PauliChannel quiet;  // all-zero rates
  auto r = logical_error_rate(code, quiet, 500, 1);
  CHECK(r.failures == 0);
}

TEST_CASE("three-qubit repetition code matches the majority-vote formula") {
  // independent X flips at rate p; majority vote fails with 3p^2(1-p) + p^3
  const double p = 0.1;
  const double expected = 3 * p * p * (1 - p) + p * p * p;  // 0.028
  const auto code = make_rep3();
  PauliChannel ch;
  ch.p_x = p;
  const std::size_t trials = 100000;
  auto r = logical_error_rate(code, ch, trials, 11);
  const double sigma = std::sqrt(expected * (1 - expected) / trials);
  CHECK(std::abs(r.estimate - expected) < 3 * sigma);
}

TEST_CASE("concatenation curve follows the double-exponential law") {
  auto curve = concatenation_curve(1000.0, 1e-4, 3);
  CHECK(curve.threshold == Catch::Approx(1e-3));
  REQUIRE(curve.level_rates.size() == 4);
  CHECK(curve.level_rates[0] == Catch::Approx(1e-4));         // (cp)^1 / c = p
  CHECK(curve.level_rates[1] == Catch::Approx(1e-5));         // (0.1)^2 / 1000
  CHECK(curve.level_rates[2] == Catch::Approx(1e-7));         // (0.1)^4 / 1000
  CHECK(curve.level_rates[3] == Catch::Approx(1e-11));        // (0.1)^8 / 1000

  // at cp = 1 the recursion has a fixed point at the threshold itself
  auto fp = concatenation_curve(1000.0, 1e-3, 4);
  for (double r : fp.level_rates) CHECK(r == Catch::Approx(1e-3));

  // below threshold the rates strictly decrease, above they increase
  auto below = concatenation_curve(100.0, 5e-3, 3);
  for (std::size_t k = 1; k < below.level_rates.size(); ++k)
    CHECK(below.level_rates[k] < below.level_rates[k - 1]);
  auto above = concatenation_curve(100.0, 2e-2, 3);
  for (std::size_t k = 1; k < above.level_rates.size(); ++k)
    CHECK(above.level_rates[k] > above.level_rates[k - 1]);

  CHECK_THROWS(concatenation_curve(0.0, 0.1, 2));
  CHECK_THROWS(concatenation_curve(10.0, 1.5, 2));
}

TEST_CASE("surface-code sampler behaves at the extremes") {
  const auto lat = make_surface(3);
  auto quiet = surface_logical_rate(lat, 0.0, 200, 3);
  CHECK(quiet.failures == 0);

  // at p = 1/2 every edge configuration is equally likely: rate near 1/2
  auto loud = surface_logical_rate(lat, 0.5, 4000, 3);
  CHECK(std::abs(loud.estimate - 0.5) < 3 * std::sqrt(0.25 / 4000.0));
}

TEST_CASE("results are independent of the worker count") {
  const auto code = make_steane7();
  PauliChannel ch = PauliChannel::depolarizing(0.05);
  std::vector<TrialRecord> t1, t4;
  auto r1 = logical_error_rate(code, ch, 2000, 99, 1, &t1);
  auto r4 = logical_error_rate(code, ch, 2000, 99, 4, &t4);
  CHECK(r1.failures == r4.failures);
  REQUIRE(t1.size() == t4.size());
  for (std::size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i].error == t4[i].error);
    CHECK(t1[i].success == t4[i].success);
  }

  auto s1 = surface_scaling_scan({2, 3}, {0.05, 0.1}, 500, 5, 1);
  auto s3 = surface_scaling_scan({2, 3}, {0.05, 0.1}, 500, 5, 3);
  REQUIRE(s1.size() == s3.size());
  for (std::size_t i = 0; i < s1.size(); ++i)
    CHECK(s1[i].rate.failures == s3[i].rate.failures);
}

TEST_CASE("resource accounting per family") {
  CHECK(qubit_resource_count("surface", 3) == 18);
  CHECK(qubit_resource_count("bacon_shor", 3, 3) == 9);
  CHECK(qubit_resource_count("parity_loss", 4, 2) == 8);
  CHECK(qubit_resource_count("steane_concat", 2) == 49);
  CHECK(qubit_resource_count("shor_concat", 2) == 81);
  CHECK(qubit_resource_count("rep3_concat", 3) == 27);
  CHECK_THROWS(qubit_resource_count("nosuch", 1));
}
