#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pudd {

struct BucketingConfig {
  int k_init = 5;
  double theta = 2.0;  // amplify coefficient
  double min_expected = 5.0;
  int max_amplify_rounds = 20;
  int max_lloyd_iterations = 100;

  void validate() const;
};

/// A 1-D partition of [0, 1] into k bins. Bins are left-closed and
/// right-open except the last, which also contains 1.
class BucketSpec {
 public:
  /// `edges` must start at 0, end at 1 and be strictly increasing.
  /// `centroids` holds one representative per bin.
  BucketSpec(std::vector<double> edges, std::vector<double> centroids);

  static BucketSpec equal_width(int k);

  int k() const { return static_cast<int>(centroids_.size()); }
  const std::vector<double>& boundaries() const { return edges_; }
  const std::vector<double>& centroids() const { return centroids_; }

  /// Bin index of `value`; throws OutOfRange outside [0, 1].
  int assign(double value) const;

  bool operator==(const BucketSpec&) const = default;

 private:
  std::vector<double> edges_;
  std::vector<double> centroids_;
};

/// Ei-kMeans style initialization: repeatedly pick the point with the largest
/// 1-NN distance, then drop it and its floor(N/k) nearest neighbours.
/// Ties go to the smaller value. Throws TooFewSamples if N < 2k.
std::vector<double> init_centroids(std::span<const double> values, int k);

/// Fits k adaptive bins to `values` (Lloyd iterations, amplify-shrink
/// rebalancing, then adjacent-bin merging until every bin holds at least
/// `min_expected` training values or k = 1).
BucketSpec fit(std::span<const double> values, const BucketingConfig& config);

/// Same as fit() for input already sorted ascending.
BucketSpec fit_sorted(std::span<const double> sorted, const BucketingConfig& config);

/// Counts of `values` per bin.
std::vector<std::int64_t> histogram(const BucketSpec& spec, std::span<const double> values);

/// Counts per bin for values sorted ascending; O(k log n).
std::vector<std::int64_t> histogram_sorted(const BucketSpec& spec, std::span<const double> sorted);

namespace bucketing_detail {

// Sorted-input building blocks, exposed for tests.

/// init_centroids on sorted input (N >= 2k is the caller's job).
std::vector<double> init_centroids_sorted(std::vector<double> sorted, int k);

/// Per-bin counts for sorted data, consistent with BucketSpec::assign.
std::vector<std::int64_t> sorted_counts(std::span<const double> sorted, const std::vector<double>& edges);

/// Nearest-centroid labels for sorted values (ties to the lower index).
std::vector<int> nearest_assignment(std::span<const double> sorted, std::span<const double> centroids);

/// 1-D Lloyd iterations; returns converged, strictly increasing centroids.
/// Empty clusters are dropped.
std::vector<double> lloyd(std::span<const double> sorted, std::vector<double> centroids, int max_iterations);

/// One amplify-shrink reassignment: distance to centroid j is scaled by
/// exp(theta * |C_j| / (N - 1)) where |C_j| are the sizes under `labels`.
std::vector<int> amplify_round(std::span<const double> sorted, std::span<const double> centroids,
                               std::span<const int> labels, double theta);

/// Merges adjacent bins until every count reaches `min_expected` or one bin is left.
BucketSpec merge_small_bins(std::span<const double> sorted, BucketSpec spec, double min_expected);

}  // namespace bucketing_detail

}  // namespace pudd
