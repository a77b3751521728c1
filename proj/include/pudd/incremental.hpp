#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pudd/detector.hpp"

namespace pudd {

/// When new cut points are created.
enum class CutCadence {
  // One cut per completed chunk; alarms are evaluated at chunk boundaries and
  // match the batch detector exactly.
  ChunkBoundary,
  // One cut per instance, evaluated after every instance.
  PerInstance,
};

struct OnlineConfig {
  DetectorConfig detector;
  std::size_t chunk_size = 1000;
  CutCadence cadence = CutCadence::ChunkBoundary;
  // Oldest cuts beyond this many are dropped; 0 keeps all of them.
  std::size_t max_live_cuts = 0;

  void validate() const;
};

/// Cached state of one cut point. The spec and row 0 of the table are frozen
/// at creation; row 1 grows by one cell increment per observed instance.
struct CutState {
  std::size_t cut = 0;
  std::size_t first_size = 0;
  std::optional<BucketSpec> spec;  // absent when the first window had no correct samples
  std::optional<ContingencyTable> table;
  double miscl_sum_first = 0.0;
  std::int64_t miscl_count_first = 0;
  double miscl_sum_second = 0.0;
  std::int64_t miscl_count_second = 0;
  std::int64_t second_size = 0;
};

/// Instance-at-a-time PUDD with cached per-cut specs and tables.
class OnlineDetector {
 public:
  /// `first_unit` is the index given to the first chunk (or instance) observed.
  explicit OnlineDetector(OnlineConfig config, std::size_t first_unit = 0);

  /// Feeds one sample. The report is non-empty only when the sample closes a
  /// unit (a chunk, or every instance in PerInstance mode).
  DetectionReport observe(const PuSample& sample);

  /// Feeds a whole chunk and returns the report produced by its last sample.
  DetectionReport observe_chunk(std::span<const PuSample> samples);

  /// Discards every unit up to and including `chosen_cut` and rebuilds the
  /// surviving cut states relative to the new start.
  void on_alarm(std::size_t chosen_cut);

  const std::vector<CutState>& cuts() const { return cuts_; }
  std::size_t first_unit() const { return t1_; }
  std::size_t completed_units() const { return units_complete_; }
  const std::vector<PuSample>& history() const { return history_; }
  const OnlineConfig& config() const { return config_; }

 private:
  std::size_t unit_size() const;
  CutState make_cut(std::size_t cut, std::size_t first_size, std::span<const double> sorted_first,
                    double miscl_sum_first, std::int64_t miscl_count_first) const;
  void merge_pending();
  DetectionReport evaluate() const;
  void apply_cap();

  OnlineConfig config_;
  std::size_t t1_;
  std::size_t units_complete_ = 0;
  std::vector<PuSample> history_;
  std::vector<CutState> cuts_;
  std::vector<double> sorted_correct_;  // correct PU values of history_, ascending
  std::vector<double> pending_;         // correct PU values of the open unit
  double miscl_sum_ = 0.0;
  std::int64_t miscl_count_ = 0;
};

struct AlarmEvent {
  std::size_t chunk = 0;  // chunk whose arrival raised the alarm
  std::size_t cut = 0;
  bool operator==(const AlarmEvent&) const = default;
};

struct BenchResult {
  double batch_ms = 0.0;
  double incremental_ms = 0.0;
  double batch_us_per_instance = 0.0;
  double incremental_us_per_instance = 0.0;
  std::vector<AlarmEvent> batch_alarms;
  std::vector<AlarmEvent> incremental_alarms;
  bool equal = false;
};

/// Runs batch recompute-per-chunk and the online detector on the same stream
/// (chunked by config.chunk_size) and times both.
BenchResult bench_incremental_vs_batch(std::span<const PuSample> stream, const OnlineConfig& config);

/// Alarm sequence of batch detection with a discard after every alarm.
std::vector<AlarmEvent> batch_alarm_sequence(std::span<const PuSample> stream, const OnlineConfig& config);

/// Alarm sequence of the online detector with on_alarm after every alarm.
std::vector<AlarmEvent> online_alarm_sequence(std::span<const PuSample> stream, const OnlineConfig& config);

}  // namespace pudd
