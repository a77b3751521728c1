#pragma once

#include <span>

#include <Eigen/Core>

namespace pudd {

/// Gaussian Naive Bayes with streaming (Welford) sufficient statistics.
class GaussianNaiveBayes {
 public:
  GaussianNaiveBayes(int n_classes, int n_features);

  void partial_fit(const Eigen::Ref<const Eigen::VectorXd>& x, int y);
  /// One instance per row of `x`.
  void partial_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, std::span<const int> y);

  /// Class posteriors, normalized in the log domain.
  /// Throws UntrainedClass if some class has no data yet.
  Eigen::VectorXd predict_proba(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Forgets everything.
  void reset();

  int n_classes() const { return static_cast<int>(counts_.size()); }
  int n_features() const { return static_cast<int>(means_.cols()); }
  const Eigen::VectorXd& class_counts() const { return counts_; }
  /// Per-class feature means, one row per class.
  const Eigen::MatrixXd& means() const { return means_; }
  /// Per-class population variances plus the smoothing epsilon.
  Eigen::MatrixXd variances() const;
  /// 1e-9 times the largest per-feature variance seen so far, floored at 1e-12.
  double epsilon() const;

 private:
  void check_dims(Eigen::Index features) const;

  Eigen::VectorXd counts_;
  Eigen::MatrixXd means_;
  Eigen::MatrixXd m2_;
  // Pooled statistics over all classes, used for the smoothing term.
  double total_ = 0.0;
  Eigen::RowVectorXd pooled_mean_;
  Eigen::RowVectorXd pooled_m2_;
};

/// 1 - proba[y_true].
double pu_index(const Eigen::Ref<const Eigen::VectorXd>& proba, int y_true);

/// Argmax with ties going to the lowest class index.
int predicted_class(const Eigen::Ref<const Eigen::VectorXd>& proba);

/// 1 iff the argmax prediction differs from y_true.
int error_indicator(const Eigen::Ref<const Eigen::VectorXd>& proba, int y_true);

}  // namespace pudd
