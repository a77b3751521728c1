#pragma once

#include <cstdint>
#include <limits>

namespace pudd {

enum class DriftStatus { Stable, Warning, Drift };

/// Drift Detection Method over a 0/1 error stream.
class Ddm {
 public:
  struct Params {
    double warn_coeff = 2.0;
    double drift_coeff = 3.0;
    // No status other than Stable before this many instances.
    std::int64_t min_instances = 30;
  };

  Ddm() : Ddm(Params{}) {}
  explicit Ddm(Params params);

  /// Any non-zero `error` counts as a misclassification.
  DriftStatus update(int error);
  void reset();

  std::int64_t n() const { return n_; }
  double p() const { return p_; }
  double s() const { return s_; }
  double p_min() const { return p_min_; }
  double s_min() const { return s_min_; }
  const Params& params() const { return params_; }

 private:
  Params params_;
  std::int64_t n_ = 0;
  double p_ = 0.0;
  double s_ = 0.0;
  double p_min_ = std::numeric_limits<double>::infinity();
  double s_min_ = std::numeric_limits<double>::infinity();
};

/// Page-Hinkley test for an increase in the mean of the error stream.
class PageHinkley {
 public:
  struct Params {
    double delta = 0.005;
    double lambda = 50.0;
    std::int64_t min_instances = 30;
  };

  PageHinkley() : PageHinkley(Params{}) {}
  explicit PageHinkley(Params params);

  /// Returns Stable or Drift; resets itself after a Drift.
  DriftStatus update(int error);
  void reset();

  std::int64_t n() const { return n_; }
  double mean() const { return mean_; }
  double cumulative() const { return m_; }
  double minimum() const { return m_min_; }
  const Params& params() const { return params_; }

 private:
  Params params_;
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m_ = 0.0;
  double m_min_ = 0.0;
};

}  // namespace pudd
