#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pudd/chi2.hpp"

using namespace pudd;

namespace {

ContingencyTable table(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  CountMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (auto v : row) m(r, c++) = v;
    ++r;
  }
  return ContingencyTable(m);
}

// Textbook sum (O - E)^2 / E with marginals recomputed here.
double classic_statistic(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total());
  double s = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < t.cols(); ++j) row += static_cast<double>(t(i, j));
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      double col = 0.0;
      for (Eigen::Index k = 0; k < t.rows(); ++k) col += static_cast<double>(t(k, j));
      const double e = row * col / n;
      const double d = static_cast<double>(t(i, j)) - e;
      s += d * d / e;
    }
  }
  return s;
}

// 1 - CDF by quadrature, with t = y^2 to remove the dof = 1 endpoint singularity.
double quadrature_p_value(double stat, int dof) {
  if (stat <= 0.0) return 1.0;
  const double k = dof;
  const double log_norm = std::log(2.0) - 0.5 * k * std::log(2.0) - std::lgamma(0.5 * k);
  auto f = [&](double y) {
    if (y <= 0.0) return dof == 1 ? std::exp(log_norm) : 0.0;
    return std::exp(log_norm + (k - 1.0) * std::log(y) - 0.5 * y * y);
  };
  const double cdf = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::sqrt(stat), 15, 1e-14);
  return 1.0 - cdf;
}

}  // namespace

TEST(ContingencyTable, RejectsInvalidShapesAndCounts) {
  EXPECT_THROW(ContingencyTable(1, 3), std::invalid_argument);
  EXPECT_THROW(ContingencyTable(2, 1), std::invalid_argument);
  CountMatrix neg(2, 2);
  neg << 1, -1, 2, 3;
  EXPECT_THROW(ContingencyTable{neg}, std::invalid_argument);
  ContingencyTable ok(2, 3);
  EXPECT_EQ(ok.total(), 0);
  ok.increment(1, 2, 4);
  EXPECT_EQ(ok(1, 2), 4);
  EXPECT_THROW(ok.increment(1, 2, -5), std::invalid_argument);
}

TEST(ContingencyTable, DropsEmptyColumns) {
  const auto t = table({{3, 0, 2, 0}, {1, 0, 5, 0}});
  const auto d = t.without_empty_columns();
  EXPECT_EQ(d, table({{3, 2}, {1, 5}}));
  EXPECT_THROW(table({{3, 0}, {1, 0}}).without_empty_columns(), ZeroMarginal);
}

TEST(ExpectedFrequencies, Examples) {
  const Eigen::MatrixXd e = expected_frequencies(table({{10, 20}, {30, 40}}));
  Eigen::MatrixXd want(2, 2);
  want << 12, 18, 28, 42;
  EXPECT_TRUE(e.isApprox(want, 1e-15));

  const Eigen::MatrixXd u = expected_frequencies(table({{5, 5}, {5, 5}}));
  EXPECT_TRUE(u.isApprox(Eigen::MatrixXd::Constant(2, 2, 5.0)));

  const Eigen::MatrixXd s = expected_frequencies(table({{50, 0}, {0, 50}}));
  EXPECT_TRUE(s.isApprox(Eigen::MatrixXd::Constant(2, 2, 25.0)));
}

TEST(ExpectedFrequencies, SumsToTotalAndRejectsZeroMarginals) {
  const auto t = table({{7, 1, 9}, {2, 13, 4}});
  EXPECT_NEAR(expected_frequencies(t).sum(), static_cast<double>(t.total()), 1e-12);
  EXPECT_THROW(expected_frequencies(table({{1, 0}, {2, 0}})), ZeroMarginal);
  EXPECT_THROW(expected_frequencies(table({{0, 0}, {2, 3}})), ZeroMarginal);
  EXPECT_THROW(chi_square_statistic(table({{0, 0}, {2, 3}})), ZeroMarginal);
}

TEST(ChiSquareStatistic, Examples) {
  const auto zero = chi_square_statistic(table({{5, 5}, {5, 5}}));
  EXPECT_DOUBLE_EQ(zero.statistic, 0.0);
  EXPECT_EQ(zero.dof, 1);

  const auto r = chi_square_statistic(table({{10, 20}, {20, 10}}));
  EXPECT_NEAR(r.statistic, 20.0 / 3.0, 1e-12);
  EXPECT_EQ(r.dof, 1);

  EXPECT_EQ(chi_square_statistic(table({{1, 2, 3, 4}, {4, 3, 2, 1}})).dof, 3);
  EXPECT_EQ(chi_square_statistic(table({{1, 2, 3}, {4, 3, 2}, {1, 1, 1}})).dof, 4);
}

TEST(ChiSquareStatistic, MatchesClassicFormOnRandomTables) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cols(2, 8);
  std::uniform_int_distribution<std::int64_t> cell(1, 500);
  for (int trial = 0; trial < 300; ++trial) {
    ContingencyTable t(2, cols(rng));
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index j = 0; j < t.cols(); ++j) t.increment(i, j, cell(rng));
    const double want = classic_statistic(t);
    const double got = chi_square_statistic(t).statistic;
    EXPECT_LE(std::abs(got - want), 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST(ChiSquareStatistic, ScalesLinearlyWithCounts) {
  const auto t = table({{12, 3, 40}, {7, 19, 22}});
  const double base = chi_square_statistic(t).statistic;
  for (int c = 2; c <= 5; ++c) {
    const double scaled = chi_square_statistic(ContingencyTable(CountMatrix(t.counts() * c))).statistic;
    EXPECT_NEAR(scaled, c * base, 1e-9 * c * base);
  }
}

TEST(ChiSquareStatistic, ValidityFlags) {
  const auto small = chi_square_statistic(table({{2, 3}, {4, 1}}));
  EXPECT_TRUE(small.low_expected);
  EXPECT_TRUE(small.low_observed);
  const auto big = chi_square_statistic(table({{60, 70}, {80, 90}}));
  EXPECT_FALSE(big.low_expected);
  EXPECT_FALSE(big.low_observed);
}

TEST(ChiSquarePValue, Examples) {
  for (int dof = 1; dof <= 10; ++dof) EXPECT_EQ(chi_square_p_value(0.0, dof), 1.0);
  EXPECT_NEAR(chi_square_p_value(3.841, 1), 0.05, 1e-3);
  EXPECT_NEAR(chi_square_p_value(15.09, 5), 0.01, 1e-3);
  EXPECT_THROW(chi_square_p_value(1.0, 0), std::invalid_argument);
}

TEST(ChiSquarePValue, MonotoneInStatistic) {
  for (int dof : {1, 2, 5, 17, 50}) {
    double prev = 1.0;
    for (double s = 0.0; s <= 200.0; s += 0.25) {
      const double p = chi_square_p_value(s, dof);
      EXPECT_LE(p, prev) << "dof " << dof << " stat " << s;
      EXPECT_GE(p, 0.0);
      prev = p;
    }
  }
}

TEST(ChiSquarePValue, MatchesQuadratureOracle) {
  for (int dof = 1; dof <= 50; dof += 7) {
    for (double s = 0.0; s <= 100.0; s += 3.7) {
      EXPECT_NEAR(chi_square_p_value(s, dof), quadrature_p_value(s, dof), 1e-8) << "dof " << dof << " stat " << s;
    }
  }
}

TEST(IncompleteGamma, ClosedForms) {
  // Q(1, x) = e^{-x}; Q(1/2, x) = erfc(sqrt x); Q(2, x) = (1 + x) e^{-x}.
  // The evaluation converges to 1e-12 relative.
  auto rel = [](double got, double want) { return std::abs(got - want) / want; };
  for (double x : {0.01, 0.3, 1.0, 1.5, 2.0, 7.5, 30.0}) {
    EXPECT_LT(rel(regularized_gamma_q(1.0, x), std::exp(-x)), 1e-11);
    EXPECT_LT(rel(regularized_gamma_q(0.5, x), std::erfc(std::sqrt(x))), 1e-11);
    EXPECT_LT(rel(regularized_gamma_q(2.0, x), (1.0 + x) * std::exp(-x)), 1e-11);
    EXPECT_NEAR(regularized_gamma_p(2.0, x) + regularized_gamma_q(2.0, x), 1.0, 1e-14);
  }
  EXPECT_EQ(regularized_gamma_q(3.0, 0.0), 1.0);
  EXPECT_EQ(regularized_gamma_p(3.0, 0.0), 0.0);
}

TEST(IncompleteGamma, LongDoubleAgreesWithDouble) {
  for (double a : {0.5, 1.0, 4.5, 25.0}) {
    for (double x : {0.2, 3.0, 20.0, 60.0}) {
      const long double q = regularized_gamma_q<long double>(a, x);
      EXPECT_NEAR(static_cast<double>(q), regularized_gamma_q(a, x), 1e-12);
    }
  }
}

TEST(ChiSquareTest, CombinesStatisticAndPValue) {
  const auto r = chi_square_test(table({{10, 20}, {20, 10}}));
  EXPECT_NEAR(r.p_value, chi_square_p_value(20.0 / 3.0, 1), 1e-15);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LT(r.p_value, 0.01);
}
