#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Core>

#include "pudd/errors.hpp"

namespace pudd {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Observed counts, one row per window and one column per bucket.
/// PUDD tables are 2 x (K+1) with the misclassified count in the last column;
/// the general routines accept any table with at least two rows and columns.
class ContingencyTable {
 public:
  ContingencyTable() = default;
  ContingencyTable(Eigen::Index rows, Eigen::Index cols);
  explicit ContingencyTable(CountMatrix counts);

  const CountMatrix& counts() const { return counts_; }
  std::int64_t operator()(Eigen::Index r, Eigen::Index c) const { return counts_(r, c); }

  /// Adds `by` to one cell; the only mutation allowed after construction.
  void increment(Eigen::Index r, Eigen::Index c, std::int64_t by = 1);

  Eigen::Index rows() const { return counts_.rows(); }
  Eigen::Index cols() const { return counts_.cols(); }
  std::int64_t total() const { return counts_.sum(); }

  /// Copy with every all-zero column removed. Throws ZeroMarginal if fewer
  /// than two columns survive.
  ContingencyTable without_empty_columns() const;

  bool operator==(const ContingencyTable& other) const;

 private:
  void validate() const;
  CountMatrix counts_;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 1;
  double p_value = 1.0;
  // Some observed count is below 50 (the stricter validity guideline).
  bool low_observed = false;
  // Some expected count is below 5.
  bool low_expected = false;
};

/// E_ij = row_i * col_j / N. Throws ZeroMarginal on a zero row or column sum.
Eigen::MatrixXd expected_frequencies(const ContingencyTable& table);

/// Statistic via sum(O^2 / E) - N, dof = (rows-1)(cols-1). p_value is left at 1.
ChiSquareResult chi_square_statistic(const ContingencyTable& table);

/// Upper tail of the chi-square distribution, 1 - P(dof/2, statistic/2).
double chi_square_p_value(double statistic, int dof);

/// Statistic, dof and p-value in one call.
ChiSquareResult chi_square_test(const ContingencyTable& table);

namespace detail {

template <typename Scalar>
constexpr Scalar gamma_rel_tol() {
  return Scalar(1e-12);
}

// Series expansion of P(a, x), good for x < a + 1.
template <typename Scalar>
Scalar gamma_p_series(Scalar a, Scalar x) {
  Scalar ap = a;
  Scalar term = Scalar(1) / a;
  Scalar sum = term;
  for (int n = 0; n < 100000; ++n) {
    ap += Scalar(1);
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * gamma_rel_tol<Scalar>()) break;
  }
  using std::exp;
  using std::log;
  return sum * exp(-x + a * log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), good for x >= a + 1.
template <typename Scalar>
Scalar gamma_q_continued_fraction(Scalar a, Scalar x) {
  constexpr Scalar tiny = std::numeric_limits<Scalar>::min() / std::numeric_limits<Scalar>::epsilon();
  Scalar b = x + Scalar(1) - a;
  Scalar c = Scalar(1) / tiny;
  Scalar d = Scalar(1) / b;
  Scalar h = d;
  for (int i = 1; i < 100000; ++i) {
    const Scalar an = -Scalar(i) * (Scalar(i) - a);
    b += Scalar(2);
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    const Scalar delta = d * c;
    h *= delta;
    if (std::abs(delta - Scalar(1)) < gamma_rel_tol<Scalar>()) break;
  }
  using std::exp;
  using std::log;
  return exp(-x + a * log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
template <typename Scalar>
Scalar regularized_gamma_q(Scalar a, Scalar x) {
  if (x <= Scalar(0)) return Scalar(1);
  if (x < a + Scalar(1)) return Scalar(1) - detail::gamma_p_series(a, x);
  return detail::gamma_q_continued_fraction(a, x);
}

/// Regularized lower incomplete gamma P(a, x).
template <typename Scalar>
Scalar regularized_gamma_p(Scalar a, Scalar x) {
  if (x <= Scalar(0)) return Scalar(0);
  if (x < a + Scalar(1)) return detail::gamma_p_series(a, x);
  return Scalar(1) - detail::gamma_q_continued_fraction(a, x);
}

}  // namespace pudd
