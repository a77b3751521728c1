#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pudd/bucketing.hpp"
#include "pudd/detector.hpp"
#include "pudd/streams.hpp"

namespace pudd {

enum class StreamKind { Sea, Sine, Mixed, Counterexample };
enum class DetectorKind { PuddBatch, PuddIncremental, Ddm, PageHinkley, None };
enum class Regime { Incremental, TrainOnceUntilAlarm };

struct StreamSpec {
  StreamKind kind = StreamKind::Sea;
  std::uint64_t seed = 1;
  int noise_pct = 0;
  DriftSchedule schedule = default_sea_schedule();

  bool operator==(const StreamSpec& other) const;
};

struct ExperimentConfig {
  StreamSpec stream;
  DetectorKind detector = DetectorKind::PuddIncremental;
  Regime regime = Regime::Incremental;
  double sigma = 1e-5;
  BucketingConfig bucketing;
  SkipHeuristic skip_heuristic = SkipHeuristic::PaperText;
  int repetitions = 10;
  // Workers for running repetitions; 0 means one per hardware thread.
  int threads = 0;
  std::string output_path;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

struct RunMetrics {
  std::uint64_t seed = 0;
  std::vector<std::size_t> chunks;  // scored chunk indices
  std::vector<double> accuracy;
  std::vector<std::size_t> chunk_sizes;
  std::vector<bool> alarm;
  double overall_accuracy = 0.0;
  std::vector<std::size_t> alarms;
  std::vector<std::size_t> drift_chunks;
  // One entry per drift; nullopt when the drift was never detected.
  std::vector<std::optional<std::size_t>> delays;
  std::size_t false_alarms = 0;
  double wall_ms = 0.0;
  double predict_ms = 0.0;
  double detect_ms = 0.0;
  double train_ms = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunMetrics> runs;  // sorted by seed

  double mean_accuracy() const;
  double mean_alarms() const;
  double mean_false_alarms() const;
};

/// One prequential pass with the given seed (the stream seed is ignored).
RunMetrics run_single(const ExperimentConfig& config, std::uint64_t seed);

/// Runs config.repetitions passes with seeds stream.seed, stream.seed + 1, ...
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Assigns drifts to the first alarm at or after them (and before the next
/// drift); every other alarm is a false alarm.
void score_alarms(RunMetrics& metrics);

struct ComparisonRow {
  std::string detector;
  double mean_accuracy = 0.0;
  std::optional<double> mean_delay;  // over detected drifts
  double recall = 0.0;               // detected drifts / injected drifts
  double mean_false_alarms = 0.0;
};

/// One row per config, in input order. All configs must share the stream.
std::vector<ComparisonRow> compare_detectors(const std::vector<ExperimentConfig>& configs);

std::string detector_label(const ExperimentConfig& config);
std::string to_string(StreamKind kind);
std::string to_string(DetectorKind kind);
std::string to_string(Regime regime);
StreamKind parse_stream_kind(const std::string& s);
DetectorKind parse_detector_kind(const std::string& s);
Regime parse_regime(const std::string& s);
SkipHeuristic parse_skip_heuristic(const std::string& s);

/// `chunk,accuracy,alarm` rows for one run.
void write_run_csv(std::ostream& out, const RunMetrics& run);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// {overall_accuracy, alarms, delays, false_alarms, wall_ms} per run plus the means.
nlohmann::json summary_json(const ExperimentResult& result);

/// Writes <path>.run<i>.csv per run and <path>.json.
void write_outputs(const ExperimentResult& result, const std::string& path);

}  // namespace pudd
