#include <catch_amalgamated.hpp>

#include <vector>

#include "fa4p/equivalence.hpp"
#include "fa4p/errors.hpp"

using namespace fa4p;

TEST_CASE("conditional curves coincide over the default grid") {
  const std::vector<FAItemParams> items = {FAItemParams(0.3, -1.0, 0.2, 0.8),
                                           FAItemParams(0.97, 0.5, 0.0, 1.0),
                                           FAItemParams(0.05, 0.0, 0.1, 0.99)};
  const auto grid = default_theta_grid();
  REQUIRE(grid.size() == 49);
  CHECK(grid.front() == -6.0);
  CHECK(grid.back() == 6.0);
  for (auto link : {LinkFunction::Logistic, LinkFunction::NormalOgive}) {
    const auto r = check_conditional_equivalence(items, link, grid);
    CHECK(r.pass);
    CHECK(r.discrepancy <= kConditionalTolerance);
  }
}

TEST_CASE("marginal check limits the item count") {
  const std::vector<FAItemParams> four(4, FAItemParams(0.5, 0.0));
  CHECK_THROWS_AS(check_marginal_equivalence(four, LinkFunction::Logistic, default_quadrature()),
                  Error);
  const std::vector<FAItemParams> three(3, FAItemParams(0.5, 0.1, 0.2, 0.9));
  CHECK(check_marginal_equivalence(three, LinkFunction::Logistic, default_quadrature()).pass);
  CHECK(check_marginal_normalization(three, LinkFunction::NormalOgive, default_quadrature()).pass);
}

TEST_CASE("threshold exceedance frequency matches the link CDF") {
  const FAItemParams item(0.6, 0.4, 0.1, 0.9);
  for (auto link : {LinkFunction::Logistic, LinkFunction::NormalOgive}) {
    const auto r = check_lemma_a1(item, link, 0.8, 200000, 11);
    CHECK(r.pass);
    CHECK(r.tolerance > 0.0);
  }
  CHECK_THROWS_AS(check_lemma_a1(item, LinkFunction::Logistic, 0.0, 100, 1), Error);
}

TEST_CASE("summing over latent patterns equals the product of per-item sums") {
  const std::vector<FAItemParams> items = {
      FAItemParams(0.4, 0.2, 0.1, 0.9), FAItemParams(0.8, -0.5, 0.25, 0.95),
      FAItemParams(0.2, 1.2, 0.0, 1.0), FAItemParams(0.9, 0.0, 0.3, 0.7)};
  const std::vector<std::uint8_t> y = {1, 0, 0, 1};
  const auto r = check_sum_product(items, y, -0.3, LinkFunction::NormalOgive);
  CHECK(r.pass);
  const std::vector<std::uint8_t> short_y = {1, 0};
  CHECK_THROWS_AS(check_sum_product(items, short_y, 0.0, LinkFunction::Logistic), Error);
}

TEST_CASE("latent responses are independent given theta but not marginally") {
  const std::vector<FAItemParams> items = {FAItemParams(0.9, 0.0), FAItemParams(0.9, 0.0)};
  const auto cond = check_conditional_independence(items, LinkFunction::NormalOgive, 0.3, 200000, 5);
  CHECK(cond.pass);
  const auto uncond = check_unconditional_independence(items, LinkFunction::NormalOgive, 200000, 5);
  CHECK_FALSE(uncond.pass);
  CHECK(uncond.discrepancy > 10 * uncond.tolerance);
}

TEST_CASE("fuzz driver is deterministic and labels every record") {
  FuzzOptions options;
  options.mc_samples = 100000;
  for (const char* check : kVerifyChecks) {
    const auto a = fuzz_check(check, 6, 42, options);
    const auto b = fuzz_check(check, 6, 42, options);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].report.discrepancy == b[k].report.discrepancy);
      CHECK(a[k].as_expected());
    }
  }
  const auto a3 = fuzz_check("lemma-a3", 2, 1, options);
  REQUIRE(a3.size() == 3);
  CHECK_FALSE(a3.back().expect_pass);
  CHECK_THROWS_AS(fuzz_check("nope", 1, 1), Error);
}
