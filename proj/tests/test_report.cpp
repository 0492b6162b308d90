#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gaussbound/report.hpp"
#include "support/oracles.hpp"

using namespace gaussbound;

TEST(FullReport, SingleModeExample) {
  ReportOptions options;
  options.include_oracle = true;
  const auto r = full_report(vacuum(1), thermal({2.0}), 1, {}, options);
  EXPECT_NEAR(r.minkowski->value, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.young->value, 0.353553390593274, 1e-12);
  EXPECT_NEAR(r.chernoff->value, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.bhattacharyya->value, 0.408248290463863, 1e-12);
  EXPECT_NEAR(r.fidelity->f, 2.0 / 3.0, 1e-13);
  EXPECT_NEAR(r.fidelity->f_plus, 0.408248290463863, 1e-12);
  EXPECT_NEAR(*r.fidelity->f_minus, 0.211324865405187, 1e-12);
  EXPECT_NEAR(*r.helstrom, 1.0 / 3.0, 1e-10);
  EXPECT_EQ(r.copies, 1);
  EXPECT_EQ(r.modes, 1u);
}

TEST(FullReport, IdenticalStatesGiveHalf) {
  std::mt19937_64 rng(1);
  const auto s = oracle::random_state(rng, 2).state;
  const auto r = full_report(s, s, 3);
  EXPECT_NEAR(r.chernoff->value, 0.5, 1e-9);
  EXPECT_NEAR(r.bhattacharyya->value, 0.5, 1e-9);
  EXPECT_NEAR(r.minkowski->value, 0.5, 1e-9);
  EXPECT_NEAR(r.young->value, 0.5, 1e-9);
  EXPECT_FALSE(r.fidelity.has_value());
}

TEST(FullReport, RandomThreeModeOrdering) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = oracle::random_state(rng, 3).state;
    const auto b = oracle::random_state(rng, 3).state;
    for (int n : {1, 5, 20}) {
      const auto r = full_report(a, b, n);
      EXPECT_LE(r.chernoff->log_value, r.minkowski->log_value + 1e-9);
      EXPECT_LE(r.minkowski->log_value, r.young->log_value + 1e-9);
      EXPECT_LE(r.chernoff->log_value, r.bhattacharyya->log_value + 1e-9);
    }
  }
}

TEST(FullReport, FMinusOnlyForOneCopy) {
  const auto r = full_report(vacuum(1), thermal({2.0}), 4);
  ASSERT_TRUE(r.fidelity.has_value());
  EXPECT_FALSE(r.fidelity->f_minus.has_value());
  EXPECT_NEAR(r.chernoff->value, 0.5 * std::pow(2.0 / 3.0, 4), 1e-12);
}

TEST(FullReport, SelectionAndOracleScope) {
  ReportOptions options;
  options.bounds = {false, true, false, false, false};
  const auto r = full_report(vacuum(1), thermal({2.0}), 1, {}, options);
  EXPECT_FALSE(r.chernoff);
  EXPECT_TRUE(r.minkowski);
  EXPECT_FALSE(r.young);

  options.include_oracle = true;
  try {
    full_report(vacuum(1), squeezed(0.4), 1, {}, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported);
    EXPECT_NE(std::string(e.what()).find("unsupported pair"), std::string::npos);
  }
  EXPECT_FALSE(oracle_representable(vacuum(1), squeezed(0.4)));
  EXPECT_TRUE(oracle_representable(vacuum(1), thermal({4.0})));
}

TEST(FullReport, ModeMismatch) {
  EXPECT_THROW(full_report(vacuum(1), vacuum(2), 1), Error);
}

TEST(FullReport, OracleSandwichForCoherentAndThermalPairs) {
  ReportOptions options;
  options.include_oracle = true;
  Vector d(2);
  d << 0.9, -1.4;
  for (const auto& [a, b] : {std::pair{vacuum(1), coherent(d)}, std::pair{thermal({1.7}), thermal({4.0})},
                             std::pair{coherent(d), vacuum(1)}}) {
    const auto r = full_report(a, b, 1, {}, options);
    EXPECT_LE(*r.fidelity->f_minus, *r.helstrom + 1e-10);
    EXPECT_LE(*r.helstrom, r.chernoff->value + 1e-10);
    EXPECT_LE(r.chernoff->value, r.fidelity->f_plus + 1e-10);
  }
}
