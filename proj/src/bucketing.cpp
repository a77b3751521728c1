#include "pudd/bucketing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pudd/errors.hpp"

namespace pudd {

void BucketingConfig::validate() const {
  if (k_init < 1) throw ConfigError("bucketing k must be >= 1");
  if (!(theta > 0.0)) throw ConfigError("bucketing theta must be > 0");
  if (!(min_expected > 0.0)) throw ConfigError("bucketing min_expected must be > 0");
  if (max_amplify_rounds < 1) throw ConfigError("bucketing max_amplify_rounds must be >= 1");
  if (max_lloyd_iterations < 1) throw ConfigError("bucketing max_lloyd_iterations must be >= 1");
}

BucketSpec::BucketSpec(std::vector<double> edges, std::vector<double> centroids)
    : edges_(std::move(edges)), centroids_(std::move(centroids)) {
  if (centroids_.empty()) throw std::invalid_argument("bucket spec needs at least one bin");
  if (edges_.size() != centroids_.size() + 1) {
    throw std::invalid_argument("bucket spec needs k + 1 edges for k bins");
  }
  if (edges_.front() != 0.0 || edges_.back() != 1.0) {
    throw std::invalid_argument("bucket edges must span [0, 1]");
  }
  if (std::adjacent_find(edges_.begin(), edges_.end(), std::greater_equal<>()) != edges_.end()) {
    throw std::invalid_argument("bucket edges must be strictly increasing");
  }
}

BucketSpec BucketSpec::equal_width(int k) {
  if (k < 1) throw std::invalid_argument("equal_width needs k >= 1");
  std::vector<double> edges(static_cast<std::size_t>(k) + 1);
  std::vector<double> centroids(static_cast<std::size_t>(k));
  for (int i = 0; i <= k; ++i) edges[i] = static_cast<double>(i) / k;
  edges.back() = 1.0;
  for (int i = 0; i < k; ++i) centroids[i] = 0.5 * (edges[i] + edges[i + 1]);
  return BucketSpec(std::move(edges), std::move(centroids));
}

int BucketSpec::assign(double value) const {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw OutOfRange("PU value " + std::to_string(value) + " outside [0, 1]");
  }
  const auto first = edges_.begin() + 1;
  const auto last = edges_.end() - 1;
  return static_cast<int>(std::upper_bound(first, last, value) - first);
}

std::vector<std::int64_t> histogram(const BucketSpec& spec, std::span<const double> values) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spec.k()), 0);
  for (double v : values) ++counts[static_cast<std::size_t>(spec.assign(v))];
  return counts;
}

std::vector<double> init_centroids(std::span<const double> values, int k) {
  if (k < 1) throw std::invalid_argument("init_centroids needs k >= 1");
  const std::size_t n = values.size();
  if (n < 2 * static_cast<std::size_t>(k)) {
    throw TooFewSamples("init_centroids needs at least 2k values (" + std::to_string(n) + " < " +
                        std::to_string(2 * k) + ")");
  }
  std::vector<double> work(values.begin(), values.end());
  std::sort(work.begin(), work.end());
  return bucketing_detail::init_centroids_sorted(std::move(work), k);
}

namespace bucketing_detail {

std::vector<double> init_centroids_sorted(std::vector<double> work, int k) {
  const std::size_t n = work.size();
  const std::size_t per_pick = n / static_cast<std::size_t>(k);

  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  for (int pick = 0; pick < k; ++pick) {
    const std::size_t m = work.size();
    // Largest 1-NN distance; the strict comparison keeps the smallest value on ties.
    std::size_t best = 0;
    double best_nn = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      double nn = std::numeric_limits<double>::infinity();
      if (j > 0) nn = work[j] - work[j - 1];
      if (j + 1 < m) nn = std::min(nn, work[j + 1] - work[j]);
      if (nn > best_nn) {
        best_nn = nn;
        best = j;
      }
    }
    const double z = work[best];
    centroids.push_back(z);

    // Keep enough points for the picks still to come.
    const std::size_t still_needed = static_cast<std::size_t>(k - pick - 1);
    const std::size_t removable = m - 1 > still_needed ? m - 1 - still_needed : 0;
    const std::size_t take = std::min(per_pick, removable);

    // The nearest neighbours of a point in sorted 1-D data form a contiguous run.
    std::size_t lo = best;
    std::size_t hi = best;
    for (std::size_t taken = 0; taken < take; ++taken) {
      const bool has_left = lo > 0;
      const bool has_right = hi + 1 < m;
      if (has_left && (!has_right || z - work[lo - 1] <= work[hi + 1] - z)) {
        --lo;
      } else {
        ++hi;
      }
    }
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(lo), work.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  }
  return centroids;
}

namespace {

std::vector<double> prefix_sums(std::span<const double> sorted) {
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  std::partial_sum(sorted.begin(), sorted.end(), prefix.begin() + 1);
  return prefix;
}

// Start index of each nearest-centroid cluster in sorted data, plus n at the end.
std::vector<std::size_t> cluster_starts(std::span<const double> sorted, std::span<const double> centroids) {
  std::vector<std::size_t> starts(centroids.size() + 1);
  starts.front() = 0;
  for (std::size_t j = 0; j + 1 < centroids.size(); ++j) {
    const double mid = 0.5 * (centroids[j] + centroids[j + 1]);
    starts[j + 1] = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), mid) - sorted.begin());
  }
  starts.back() = sorted.size();
  return starts;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Edges at midpoints of adjacent centroids. A centroid whose midpoint would not
// be strictly inside (previous edge, 1) is folded into its left neighbour.
BucketSpec spec_from_centroids(const std::vector<double>& centroids) {
  std::vector<double> edges{0.0};
  std::vector<double> kept{centroids.front()};
  for (std::size_t j = 1; j < centroids.size(); ++j) {
    const double mid = 0.5 * (kept.back() + centroids[j]);
    if (mid > edges.back() && mid < 1.0) {
      edges.push_back(mid);
      kept.push_back(centroids[j]);
    }
  }
  edges.push_back(1.0);
  return BucketSpec(std::move(edges), std::move(kept));
}

}  // namespace

std::vector<std::int64_t> sorted_counts(std::span<const double> sorted, const std::vector<double>& edges) {
  const std::size_t k = edges.size() - 1;
  std::vector<std::int64_t> counts(k);
  std::size_t start = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t end =
        j + 1 == k ? sorted.size()
                   : static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), edges[j + 1]) - sorted.begin());
    counts[j] = static_cast<std::int64_t>(end - start);
    start = end;
  }
  return counts;
}

namespace {

bool meets_floor(const std::vector<std::int64_t>& counts, double min_expected) {
  return std::all_of(counts.begin(), counts.end(),
                     [&](std::int64_t c) { return static_cast<double>(c) >= min_expected; });
}

}  // namespace

std::vector<int> nearest_assignment(std::span<const double> sorted, std::span<const double> centroids) {
  const auto starts = cluster_starts(sorted, centroids);
  std::vector<int> labels(sorted.size());
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(starts[j]),
              labels.begin() + static_cast<std::ptrdiff_t>(starts[j + 1]), static_cast<int>(j));
  }
  return labels;
}

std::vector<double> lloyd(std::span<const double> sorted, std::vector<double> centroids, int max_iterations) {
  centroids = sorted_unique(std::move(centroids));
  const auto prefix = prefix_sums(sorted);
  std::vector<std::size_t> previous;
  for (int iter = 0; iter < max_iterations; ++iter) {
    auto starts = cluster_starts(sorted, centroids);
    if (starts == previous) break;
    std::vector<double> next;
    for (std::size_t j = 0; j + 1 < starts.size(); ++j) {
      const std::size_t a = starts[j];
      const std::size_t b = starts[j + 1];
      if (b == a) continue;
      next.push_back((prefix[b] - prefix[a]) / static_cast<double>(b - a));
    }
    // Record the partition that produced `next`, so an unchanged partition terminates.
    previous = next.size() == centroids.size() ? std::move(starts) : std::vector<std::size_t>{};
    centroids = std::move(next);
  }
  return centroids;
}

std::vector<int> amplify_round(std::span<const double> sorted, std::span<const double> centroids,
                               std::span<const int> labels, double theta) {
  const std::size_t k = centroids.size();
  std::vector<double> sizes(k, 0.0);
  for (int label : labels) sizes[static_cast<std::size_t>(label)] += 1.0;
  const double denom = std::max<double>(static_cast<double>(sorted.size()) - 1.0, 1.0);
  std::vector<double> weight(k);
  for (std::size_t j = 0; j < k; ++j) weight[j] = std::exp(theta * sizes[j] / denom);

  std::vector<int> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    int best = 0;
    double best_d = std::abs(sorted[i] - centroids[0]) * weight[0];
    for (std::size_t j = 1; j < k; ++j) {
      const double d = std::abs(sorted[i] - centroids[j]) * weight[j];
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    out[i] = best;
  }
  return out;
}

BucketSpec merge_small_bins(std::span<const double> sorted, BucketSpec spec, double min_expected) {
  std::vector<double> edges = spec.boundaries();
  std::vector<std::int64_t> counts = sorted_counts(sorted, edges);
  while (counts.size() > 1 && !meets_floor(counts, min_expected)) {
    const std::size_t j = static_cast<std::size_t>(std::min_element(counts.begin(), counts.end()) - counts.begin());
    std::size_t left;  // merge bins left and left + 1
    if (j == 0) {
      left = 0;
    } else if (j + 1 == counts.size()) {
      left = j - 1;
    } else {
      left = counts[j - 1] <= counts[j + 1] ? j - 1 : j;
    }
    counts[left] += counts[left + 1];
    counts.erase(counts.begin() + static_cast<std::ptrdiff_t>(left) + 1);
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(left) + 1);
  }

  const std::size_t k = edges.size() - 1;
  if (k == spec.boundaries().size() - 1) return spec;

  const auto prefix = prefix_sums(sorted);
  std::vector<double> centroids(k);
  std::size_t start = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t end = start + static_cast<std::size_t>(counts[j]);
    centroids[j] = end > start ? (prefix[end] - prefix[start]) / static_cast<double>(end - start)
                               : 0.5 * (edges[j] + edges[j + 1]);
    start = end;
  }
  return BucketSpec(std::move(edges), std::move(centroids));
}

}  // namespace bucketing_detail

BucketSpec fit(std::span<const double> values, const BucketingConfig& config) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return fit_sorted(sorted, config);
}

std::vector<std::int64_t> histogram_sorted(const BucketSpec& spec, std::span<const double> sorted) {
  if (!sorted.empty() && !(sorted.front() >= 0.0 && sorted.back() <= 1.0)) {
    throw OutOfRange("PU values must lie in [0, 1]");
  }
  return bucketing_detail::sorted_counts(sorted, spec.boundaries());
}

BucketSpec fit_sorted(std::span<const double> sorted, const BucketingConfig& config) {
  using namespace bucketing_detail;
  config.validate();
  if (sorted.empty()) throw TooFewSamples("cannot fit buckets on an empty sample");
  if (!(sorted.front() >= 0.0 && sorted.back() <= 1.0)) throw OutOfRange("PU values must lie in [0, 1]");

  if (sorted.size() < 2 * static_cast<std::size_t>(config.k_init)) {
    return merge_small_bins(sorted, BucketSpec::equal_width(config.k_init), config.min_expected);
  }

  std::vector<double> centroids =
      lloyd(sorted, init_centroids_sorted({sorted.begin(), sorted.end()}, config.k_init), config.max_lloyd_iterations);

  for (int round = 0; round < config.max_amplify_rounds; ++round) {
    const BucketSpec current = spec_from_centroids(centroids);
    if (meets_floor(sorted_counts(sorted, current.boundaries()), config.min_expected)) break;
    if (centroids.size() < 2) break;

    const auto labels = nearest_assignment(sorted, centroids);
    const auto amplified = amplify_round(sorted, centroids, labels, config.theta);
    std::vector<double> sums(centroids.size(), 0.0);
    std::vector<std::size_t> sizes(centroids.size(), 0);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      sums[static_cast<std::size_t>(amplified[i])] += sorted[i];
      ++sizes[static_cast<std::size_t>(amplified[i])];
    }
    std::vector<double> next;
    for (std::size_t j = 0; j < centroids.size(); ++j) {
      if (sizes[j] > 0) next.push_back(sums[j] / static_cast<double>(sizes[j]));
    }
    next = sorted_unique(std::move(next));
    if (next == centroids) break;
    centroids = std::move(next);
  }

  return merge_small_bins(sorted, spec_from_centroids(centroids), config.min_expected);
}

}  // namespace pudd
