#include "pudd/chi2.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace pudd {

ContingencyTable::ContingencyTable(Eigen::Index rows, Eigen::Index cols)
    : counts_(CountMatrix::Zero(rows, cols)) {
  validate();
}

ContingencyTable::ContingencyTable(CountMatrix counts) : counts_(std::move(counts)) {
  validate();
}

void ContingencyTable::validate() const {
  if (counts_.rows() < 2 || counts_.cols() < 2) {
    throw std::invalid_argument("contingency table needs at least two rows and two columns, got " +
                                std::to_string(counts_.rows()) + "x" +
                                std::to_string(counts_.cols()));
  }
  if ((counts_.array() < 0).any()) {
    throw std::invalid_argument("contingency table entries must be non-negative");
  }
}

void ContingencyTable::increment(Eigen::Index r, Eigen::Index c, std::int64_t by) {
  if (counts_(r, c) + by < 0) throw std::invalid_argument("cell count would become negative");
  counts_(r, c) += by;
}

ContingencyTable ContingencyTable::without_empty_columns() const {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < counts_.cols(); ++c) {
    if (counts_.col(c).sum() > 0) keep.push_back(c);
  }
  if (keep.size() < 2) throw ZeroMarginal("fewer than two non-empty columns");
  CountMatrix out(counts_.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = counts_.col(keep[j]);
  return ContingencyTable(std::move(out));
}

bool ContingencyTable::operator==(const ContingencyTable& other) const {
  return counts_.rows() == other.counts_.rows() && counts_.cols() == other.counts_.cols() &&
         counts_ == other.counts_;
}

Eigen::MatrixXd expected_frequencies(const ContingencyTable& table) {
  const Eigen::MatrixXd observed = table.counts().cast<double>();
  const Eigen::VectorXd row_sums = observed.rowwise().sum();
  const Eigen::RowVectorXd col_sums = observed.colwise().sum();
  const double total = observed.sum();
  if (total <= 0.0) throw ZeroMarginal("contingency table is empty");
  if ((row_sums.array() == 0.0).any()) throw ZeroMarginal("contingency table has a zero row sum");
  if ((col_sums.array() == 0.0).any()) throw ZeroMarginal("contingency table has a zero column sum");
  return (row_sums * col_sums) / total;
}

ChiSquareResult chi_square_statistic(const ContingencyTable& table) {
  const Eigen::MatrixXd expected = expected_frequencies(table);
  const Eigen::ArrayXXd observed = table.counts().cast<double>().array();
  const double total = observed.sum();

  ChiSquareResult result;
  // The O^2/E - N form can dip a few ulps below zero on tables with no association.
  result.statistic = std::max(0.0, (observed.square() / expected.array()).sum() - total);
  result.dof = static_cast<int>((table.rows() - 1) * (table.cols() - 1));
  result.low_observed = (observed < 50.0).any();
  result.low_expected = (expected.array() < 5.0).any();
  return result;
}

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi-square dof must be >= 1");
  if (!(statistic > 0.0)) return 1.0;
  const double p = regularized_gamma_q(0.5 * dof, 0.5 * statistic);
  return std::clamp(p, 0.0, 1.0);
}

ChiSquareResult chi_square_test(const ContingencyTable& table) {
  ChiSquareResult result = chi_square_statistic(table);
  result.p_value = chi_square_p_value(result.statistic, result.dof);
  return result;
}

}  // namespace pudd
