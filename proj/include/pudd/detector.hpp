#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pudd/bucketing.hpp"
#include "pudd/chi2.hpp"

namespace pudd {

/// One prediction event: PU-index (1 - probability of the true class) and
/// whether the argmax prediction was correct.
struct PuSample {
  double pu = 0.0;
  bool correct = true;
};

struct Chunk {
  std::size_t index = 0;
  std::vector<PuSample> samples;
};

/// Chunks received since the last alarm, with contiguous increasing indices.
class SubStream {
 public:
  SubStream() = default;
  explicit SubStream(std::vector<Chunk> chunks);

  /// Appends a chunk; its index must be last_index() + 1 (any index if empty).
  void push(Chunk chunk);

  const std::vector<Chunk>& chunks() const { return chunks_; }
  bool empty() const { return chunks_.empty(); }
  std::size_t size() const { return chunks_.size(); }
  std::size_t first_index() const { return chunks_.front().index; }
  std::size_t last_index() const { return chunks_.back().index; }
  std::size_t sample_count() const;

 private:
  std::vector<Chunk> chunks_;
};

enum class SkipHeuristic {
  // Test only when Mean(uM_first) >= Mean(uM_second), as in the pseudocode.
  PaperPseudocode,
  // Test only when Mean(uM_second) > Mean(uM_first), as in the prose.
  PaperText,
  Off,
};

struct DetectorConfig {
  double sigma = 1e-5;
  BucketingConfig bucketing;
  SkipHeuristic skip_heuristic = SkipHeuristic::PaperText;
  // Worker threads for per-cut evaluation; results do not depend on it.
  int threads = 1;

  void validate() const;
};

enum class CutStatus { Tested, SkippedHeuristic, SkippedTooFewSamples, SkippedDegenerate };

struct CutOutcome {
  std::size_t cut = 0;
  CutStatus status = CutStatus::Tested;
  std::optional<double> p_value;
  int k = 0;  // bins used for the correct-classification columns
};

struct DetectionReport {
  std::vector<CutOutcome> per_cut;
  std::optional<double> min_p;
  bool alarm = false;
  std::optional<std::size_t> chosen_cut;
};

/// PU values of one cut, split by window and correctness.
struct WindowSplit {
  std::vector<double> correct_first;
  std::vector<double> correct_second;
  std::vector<double> miscl_first;
  std::vector<double> miscl_second;
};

struct BuiltTable {
  ContingencyTable table;
  BucketSpec spec;
};

/// Splits the substream after chunk `cut` (first window = chunks up to and
/// including `cut`). Throws EmptyWindow if either window would be empty.
WindowSplit split_at_cut(const SubStream& sub, std::size_t cut);

/// Fits buckets on correct_first and fills the 2 x (K+1) table.
/// Throws TooFewSamples when correct_first is empty.
BuiltTable build_table(const WindowSplit& split, const BucketingConfig& config);

/// Table for a fixed spec: row 0 from the first window, row 1 from the second.
ContingencyTable table_for_spec(const BucketSpec& spec, std::span<const double> correct_first,
                                std::int64_t miscl_first, std::span<const double> correct_second,
                                std::int64_t miscl_second);

/// Mean used by the skip heuristic; 0 for an empty set.
double heuristic_mean(double sum, std::int64_t count);

/// True when the configured heuristic lets the p-value be computed.
bool heuristic_allows_test(SkipHeuristic mode, double mean_miscl_first, double mean_miscl_second);

/// Chi-square p-value of a PUDD table. Empty columns are dropped first;
/// returns nullopt when fewer than two columns remain.
std::optional<double> table_p_value(const ContingencyTable& table);

/// Fills min_p / alarm / chosen_cut from per_cut (ties go to the earliest cut).
void finalize_report(DetectionReport& report, double sigma);

/// Batch detection over every chunk-boundary cut of the substream.
DetectionReport detect(const SubStream& sub, const DetectorConfig& config);

/// Drops every chunk up to and including `chosen_cut`.
SubStream on_alarm(const SubStream& sub, std::size_t chosen_cut);

// ---- Error-rate / histogram relationship for window pairs -----------------

struct ErrorStats {
  std::int64_t errors = 0;
  std::int64_t total = 0;
  double rate = 0.0;
  // sqrt(mean((e_i - rate)^2)), computed directly from the indicators.
  double std_direct = 0.0;
  // sqrt(rate - rate^2).
  double std_closed_form = 0.0;
};

ErrorStats error_stats(std::span<const PuSample> window);

/// Histogram with bin 0 = correctly classified instances and bins 1..m the
/// misclassified PU values partitioned by `miscl_edges` (edges over [0, 1]).
std::vector<std::int64_t> theorem_histogram(std::span<const PuSample> window, const std::vector<double>& miscl_edges);

/// Exact (cross-multiplied) comparison of histogram proportions.
bool proportions_equal(std::span<const std::int64_t> h1, std::span<const std::int64_t> h2);

/// Checks "equal histogram proportions implies equal error rate and equal
/// error std" on one window pair. Error rates are compared exactly.
bool theorem1_check(std::span<const PuSample> window1, std::span<const PuSample> window2,
                    const std::vector<double>& miscl_edges);

}  // namespace pudd
