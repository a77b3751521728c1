#include "pudd/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace pudd {

Ddm::Ddm(Params params) : params_(params) {}

void Ddm::reset() {
  n_ = 0;
  p_ = 0.0;
  s_ = 0.0;
  p_min_ = std::numeric_limits<double>::infinity();
  s_min_ = std::numeric_limits<double>::infinity();
}

DriftStatus Ddm::update(int error) {
  const double x = error != 0 ? 1.0 : 0.0;
  ++n_;
  p_ += (x - p_) / static_cast<double>(n_);
  s_ = std::sqrt(p_ * (1.0 - p_) / static_cast<double>(n_));
  if (n_ < params_.min_instances) return DriftStatus::Stable;

  if (p_ + s_ <= p_min_ + s_min_) {
    p_min_ = p_;
    s_min_ = s_;
  }
  if (p_ + s_ > p_min_ + params_.drift_coeff * s_min_) {
    reset();
    return DriftStatus::Drift;
  }
  if (p_ + s_ > p_min_ + params_.warn_coeff * s_min_) return DriftStatus::Warning;
  return DriftStatus::Stable;
}

PageHinkley::PageHinkley(Params params) : params_(params) {}

void PageHinkley::reset() {
  n_ = 0;
  mean_ = 0.0;
  m_ = 0.0;
  m_min_ = 0.0;
}

DriftStatus PageHinkley::update(int error) {
  const double x = error != 0 ? 1.0 : 0.0;
  ++n_;
  mean_ += (x - mean_) / static_cast<double>(n_);
  m_ += x - mean_ - params_.delta;
  m_min_ = std::min(m_min_, m_);
  if (n_ < params_.min_instances) return DriftStatus::Stable;
  if (m_ - m_min_ > params_.lambda) {
    reset();
    return DriftStatus::Drift;
  }
  return DriftStatus::Stable;
}

}  // namespace pudd
