#include "pudd/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pudd/errors.hpp"

namespace pudd {

GaussianNaiveBayes::GaussianNaiveBayes(int n_classes, int n_features) {
  if (n_classes < 1 || n_features < 1) throw std::invalid_argument("GNB needs at least one class and one feature");
  counts_ = Eigen::VectorXd::Zero(n_classes);
  means_ = Eigen::MatrixXd::Zero(n_classes, n_features);
  m2_ = Eigen::MatrixXd::Zero(n_classes, n_features);
  pooled_mean_ = Eigen::RowVectorXd::Zero(n_features);
  pooled_m2_ = Eigen::RowVectorXd::Zero(n_features);
}

void GaussianNaiveBayes::reset() {
  counts_.setZero();
  means_.setZero();
  m2_.setZero();
  total_ = 0.0;
  pooled_mean_.setZero();
  pooled_m2_.setZero();
}

void GaussianNaiveBayes::check_dims(Eigen::Index features) const {
  if (features != means_.cols()) {
    throw DimensionMismatch("expected " + std::to_string(means_.cols()) + " features, got " + std::to_string(features));
  }
}

void GaussianNaiveBayes::partial_fit(const Eigen::Ref<const Eigen::VectorXd>& x, int y) {
  check_dims(x.size());
  if (y < 0 || y >= n_classes()) throw LabelOutOfRange("class label " + std::to_string(y) + " out of range");

  const Eigen::RowVectorXd xr = x.transpose();
  counts_(y) += 1.0;
  const Eigen::RowVectorXd delta = xr - means_.row(y);
  means_.row(y) += delta / counts_(y);
  m2_.row(y).array() += delta.array() * (xr - means_.row(y)).array();

  total_ += 1.0;
  const Eigen::RowVectorXd pooled_delta = xr - pooled_mean_;
  pooled_mean_ += pooled_delta / total_;
  pooled_m2_.array() += pooled_delta.array() * (xr - pooled_mean_).array();
}

void GaussianNaiveBayes::partial_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, std::span<const int> y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw DimensionMismatch("feature rows and labels differ in length");
  check_dims(x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) partial_fit(x.row(i).transpose(), y[static_cast<std::size_t>(i)]);
}

double GaussianNaiveBayes::epsilon() const {
  const double max_var = total_ > 0.0 ? (pooled_m2_ / total_).maxCoeff() : 0.0;
  return std::max(1e-9 * max_var, 1e-12);
}

Eigen::MatrixXd GaussianNaiveBayes::variances() const {
  Eigen::MatrixXd var(m2_.rows(), m2_.cols());
  const double eps = epsilon();
  for (Eigen::Index c = 0; c < m2_.rows(); ++c) {
    var.row(c) = counts_(c) > 0.0 ? (m2_.row(c) / counts_(c)).eval() : Eigen::RowVectorXd::Zero(m2_.cols());
  }
  return var.array() + eps;
}

Eigen::VectorXd GaussianNaiveBayes::predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dims(x.size());
  for (int c = 0; c < n_classes(); ++c) {
    if (counts_(c) <= 0.0) throw UntrainedClass("class " + std::to_string(c) + " has no training data");
  }
  const Eigen::MatrixXd var = variances();
  const Eigen::RowVectorXd xr = x.transpose();
  Eigen::VectorXd log_joint(n_classes());
  for (int c = 0; c < n_classes(); ++c) {
    const Eigen::ArrayXd v = var.row(c).transpose().array();
    const Eigen::ArrayXd d = (xr - means_.row(c)).transpose().array();
    log_joint(c) = std::log(counts_(c) / total_) - 0.5 * (2.0 * std::numbers::pi * v).log().sum() -
                   0.5 * (d.square() / v).sum();
  }
  const Eigen::ArrayXd shifted = (log_joint.array() - log_joint.maxCoeff()).exp();
  return shifted / shifted.sum();
}

double pu_index(const Eigen::Ref<const Eigen::VectorXd>& proba, int y_true) {
  if (y_true < 0 || y_true >= proba.size()) throw LabelOutOfRange("label " + std::to_string(y_true) + " out of range");
  return std::clamp(1.0 - proba(y_true), 0.0, 1.0);
}

int predicted_class(const Eigen::Ref<const Eigen::VectorXd>& proba) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < proba.size(); ++j) {
    if (proba(j) > proba(best)) best = j;
  }
  return static_cast<int>(best);
}

int error_indicator(const Eigen::Ref<const Eigen::VectorXd>& proba, int y_true) {
  if (y_true < 0 || y_true >= proba.size()) throw LabelOutOfRange("label " + std::to_string(y_true) + " out of range");
  return predicted_class(proba) != y_true ? 1 : 0;
}

}  // namespace pudd
