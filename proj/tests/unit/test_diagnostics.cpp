#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fa4p/diagnostics.hpp"
#include "fa4p/errors.hpp"
#include "fa4p/random.hpp"

using namespace fa4p;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("split R-hat matches an independent computation") {
  std::vector<double> c1;
  std::vector<double> c2;
  for (int k = 0; k < 41; ++k) c1.push_back(std::sin(0.7 * k) + 0.01 * k);
  for (int k = 0; k < 40; ++k) c2.push_back(std::cos(0.3 * k) + 0.5);
  const std::vector<std::vector<double>> chains = {c1, c2};
  const auto r = split_rhat(chains);
  CHECK_THAT(r.value, WithinAbs(0.9903681823774587, 1e-12));
  CHECK_FALSE(r.zero_variance);
}

TEST_CASE("split R-hat edge cases") {
  const std::vector<std::vector<double>> constant(2, std::vector<double>(40, 3.0));
  const auto r = split_rhat(constant);
  CHECK(r.value == 1.0);
  CHECK(r.zero_variance);
  const std::vector<std::vector<double>> apart = {std::vector<double>(40, 1.0),
                                                  std::vector<double>(40, 2.0)};
  CHECK(std::isinf(split_rhat(apart).value));
  const std::vector<std::vector<double>> short_chains(2, std::vector<double>(19, 1.0));
  try {
    split_rhat(short_chains);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewDraws);
  }
}

TEST_CASE("split R-hat flags chains stuck in different places") {
  Engine rng(8);
  std::vector<std::vector<double>> chains(2);
  for (int k = 0; k < 1000; ++k) {
    chains[0].push_back(std_normal(rng));
    chains[1].push_back(std_normal(rng) + 1.0);
  }
  CHECK(split_rhat(chains).value > 1.1);
  std::vector<std::vector<double>> mixed(2);
  for (int k = 0; k < 1000; ++k) {
    mixed[0].push_back(std_normal(rng));
    mixed[1].push_back(std_normal(rng));
  }
  CHECK(split_rhat(mixed).value < 1.01);
}

TEST_CASE("ESS matches an independent computation and is capped") {
  std::vector<double> smooth;
  for (int k = 0; k < 400; ++k) smooth.push_back(std::sin(0.05 * k));
  CHECK_THAT(ess(smooth).value, WithinRel(10.174305333261058, 1e-10));
  std::vector<double> anti;
  for (int k = 0; k < 500; ++k) anti.push_back(std::fmod(k * 0.6180339887498949, 1.0));
  CHECK(ess(anti).value == 500.0);
  const std::vector<double> flat(200, 1.0);
  CHECK(ess(flat).zero_variance);
  CHECK_THROWS_AS(ess(std::vector<double>(99, 0.0)), Error);
}

TEST_CASE("ESS of an AR(1) sequence is near n (1 - phi) / (1 + phi)") {
  Engine rng(21);
  constexpr double kPhi = 0.8;
  std::vector<double> x(20000);
  double v = 0.0;
  for (double& xi : x) {
    v = kPhi * v + std::sqrt(1 - kPhi * kPhi) * std_normal(rng);
    xi = v;
  }
  const double expected = 20000 * (1 - kPhi) / (1 + kPhi);
  CHECK_THAT(ess(x).value, WithinRel(expected, 0.15));
}

TEST_CASE("quantiles follow the type 7 definition") {
  const std::vector<double> x = {0.1, 0.4, 0.35, 0.8, 1.2, -0.3, 0.05, 0.9, 1.1, 0.2};
  CHECK_THAT(quantile(x, 0.3), WithinAbs(0.16999999999999998, 1e-15));
  CHECK(quantile(x, 0.0) == -0.3);
  CHECK(quantile(x, 1.0) == 1.2);
  CHECK(quantile({5.0}, 0.5) == 5.0);
}

TEST_CASE("MSE comparison") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> b = {1.5, 2.0, 2.0};
  CHECK_THAT(mse_compare(a, b), WithinAbs((0.25 + 0.0 + 1.0) / 3.0, 1e-15));
  CHECK(mse_compare(a, a) == 0.0);
  const std::vector<double> c = {1.0};
  try {
    mse_compare(a, c);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LengthMismatch);
  }
}

TEST_CASE("diagnose summarizes and flags parameters") {
  Engine rng(4);
  ParameterTraces good{"good", std::vector<std::vector<double>>(2)};
  ParameterTraces bad{"bad", std::vector<std::vector<double>>(2)};
  for (int k = 0; k < 500; ++k) {
    good.chains[0].push_back(std_normal(rng));
    good.chains[1].push_back(std_normal(rng));
    bad.chains[0].push_back(std_normal(rng));
    bad.chains[1].push_back(std_normal(rng) + 3.0);
  }
  const std::vector<ParameterTraces> traces = {good, bad};
  const auto report = diagnose(traces);
  REQUIRE(report.parameters.size() == 2);
  REQUIRE(report.flagged.size() == 1);
  CHECK(report.flagged[0] == "bad");
  const auto* g = report.find("good");
  REQUIRE(g != nullptr);
  CHECK(g->q025 < g->median);
  CHECK(g->median < g->q975);
  CHECK(g->ess > 500);
  CHECK(report.find("missing") == nullptr);

  const std::vector<ParameterTraces> short_traces = {{"s", {std::vector<double>(15, 1.0)}}};
  const auto short_report = diagnose(short_traces);
  CHECK(std::isnan(short_report.parameters[0].rhat));
  CHECK(std::isnan(short_report.parameters[0].ess));
}
