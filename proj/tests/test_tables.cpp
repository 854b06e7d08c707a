#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "irl/format.hpp"
#include "irl/random.hpp"
#include "irl/tables.hpp"

using namespace irl;

TEST(Tables, StateActionLayoutIsRowMajor) {
  StateActionTable t(3, 2);
  t(1, 0) = 5.0;
  t(2, 1) = 7.0;
  EXPECT_EQ(t.values()[2], 5.0);
  EXPECT_EQ(t.values()[5], 7.0);
  EXPECT_EQ(t.row(2)[1], 7.0);
  EXPECT_EQ(t.row(1).size(), 2u);
}

TEST(Tables, TransitionRowSpansNextStates) {
  TransitionTable t(2, 3);
  t(1, 2, 0) = 0.25;
  t(1, 2, 1) = 0.75;
  const auto row = t.row(1, 2);
  ASSERT_EQ(row.size(), 2u);
  EXPECT_EQ(row[0], 0.25);
  EXPECT_EQ(row[1], 0.75);
  EXPECT_EQ(t.values()[(1 * 3 + 2) * 2 + 1], 0.75);
}

TEST(Tables, LogSumExpIsStableForLargeInputs) {
  const std::vector<double> x{1000.0, 1000.0};
  EXPECT_NEAR(log_sum_exp(x), 1000.0 + std::log(2.0), 1e-12);
  const std::vector<double> y{-1000.0, -1000.0 + std::log(3.0)};
  EXPECT_NEAR(log_sum_exp(y), -1000.0 + std::log(4.0), 1e-12);
  EXPECT_EQ(log_sum_exp(std::vector<double>{}), -std::numeric_limits<double>::infinity());
}

TEST(Tables, MaxAbsDiffRejectsSizeMismatch) {
  EXPECT_DOUBLE_EQ(max_abs_diff(std::vector<double>{1, 2}, std::vector<double>{1.5, -1}), 3.0);
  EXPECT_THROW(max_abs_diff(std::vector<double>{1}, std::vector<double>{1, 2}),
               std::invalid_argument);
}

TEST(Random, DerivedSeedsDifferAcrossStreams) {
  EXPECT_EQ(derive_seed(3, 4), derive_seed(3, 4));
  EXPECT_NE(derive_seed(3, 4), derive_seed(3, 5));
  EXPECT_NE(derive_seed(3, 4), derive_seed(4, 4));
}

TEST(Random, CategoricalNeverPicksZeroWeight) {
  Rng rng(9);
  const std::vector<double> w{0.0, 2.0, 0.0, 1.0};
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 30000; ++i) ++counts[sample_categorical(rng, w)];
  EXPECT_EQ(counts[0], 0);
  EXPECT_EQ(counts[2], 0);
  EXPECT_NEAR(counts[1] / 30000.0, 2.0 / 3.0, 0.02);
  EXPECT_THROW(sample_categorical(rng, std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST(Random, DirichletSamplesLieOnTheSimplex) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto p = sample_dirichlet(rng, 5, 1.0);
    double total = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_THROW(sample_dirichlet(rng, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(sample_dirichlet(rng, 3, 0.0), std::invalid_argument);
}

TEST(Format, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789}) {
    const std::string s = format_float(x);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), x) << s;
  }
  EXPECT_EQ(format_float(0.1), "0.10000000000000001");
}
