#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pudd/detector.hpp"

namespace pudd {

/// Which concept is active in each chunk. `concepts` holds one parameter per
/// concept: the SEA threshold, or 0 / 1 (original / reversed) for SINE and MIXED.
struct DriftSchedule {
  std::size_t period_chunks = 10;
  std::vector<double> concepts;
  std::size_t chunk_size = 1000;
  std::size_t n_chunks = 100;

  void validate() const;
  std::size_t concept_index(std::size_t chunk) const;
  double concept_at(std::size_t chunk) const { return concepts[concept_index(chunk)]; }
  /// Chunks whose concept differs from the previous chunk's.
  std::vector<std::size_t> drift_chunks() const;
};

struct LabeledInstance {
  Eigen::VectorXd x;
  int y = 0;
};

struct LabeledChunk {
  std::size_t index = 0;
  double concept_param = 0.0;
  std::vector<LabeledInstance> instances;
};

/// Seeded generator of labelled chunks. Each generator owns its RNG.
class ChunkStream {
 public:
  ChunkStream(std::uint64_t seed, DriftSchedule schedule);
  virtual ~ChunkStream() = default;

  /// Next chunk, or nullopt once schedule.n_chunks chunks were produced.
  std::optional<LabeledChunk> next();

  const DriftSchedule& schedule() const { return schedule_; }
  virtual int n_features() const = 0;
  virtual std::vector<std::string> feature_names() const = 0;

 protected:
  virtual LabeledInstance draw(double concept_param) = 0;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};

 private:
  DriftSchedule schedule_;
  std::size_t produced_ = 0;
};

/// SEA: three features on [0, 10], y = (x1 + x2 <= theta), optional label noise.
class SeaStream final : public ChunkStream {
 public:
  SeaStream(std::uint64_t seed, DriftSchedule schedule, int noise_pct);
  int n_features() const override { return 3; }
  std::vector<std::string> feature_names() const override { return {"x1", "x2", "x3"}; }
  static int label(double x1, double x2, double theta) { return x1 + x2 <= theta ? 1 : 0; }

 protected:
  LabeledInstance draw(double concept_param) override;

 private:
  double noise_;
};

/// SINE: two features on [0, 1], y = (x2 < sin(x1)); concept 1 reverses labels.
class SineStream final : public ChunkStream {
 public:
  using ChunkStream::ChunkStream;
  int n_features() const override { return 2; }
  std::vector<std::string> feature_names() const override { return {"x1", "x2"}; }
  static int label(double x1, double x2, bool reversed);

 protected:
  LabeledInstance draw(double concept_param) override;
};

/// MIXED: booleans v, w and numerics x3, x4 on [0, 1]; y = 1 iff at least two of
/// {v, w, x4 < 0.5 + 0.3 sin(3 pi x3)} hold; concept 1 reverses labels.
class MixedStream final : public ChunkStream {
 public:
  using ChunkStream::ChunkStream;
  int n_features() const override { return 4; }
  std::vector<std::string> feature_names() const override { return {"v", "w", "x3", "x4"}; }
  static int label(bool v, bool w, double x3, double x4, bool reversed);

 protected:
  LabeledInstance draw(double concept_param) override;
};

DriftSchedule default_sea_schedule();
DriftSchedule default_binary_schedule();

std::unique_ptr<SeaStream> gen_sea(std::uint64_t seed, DriftSchedule schedule, int noise_pct);
std::unique_ptr<SineStream> gen_sine(std::uint64_t seed, DriftSchedule schedule);
std::unique_ptr<MixedStream> gen_mixed(std::uint64_t seed, DriftSchedule schedule);

/// Two windows with identical error rate 0.5 but disjoint PU supports:
/// window 1 has misclassified PU in (0.9, 1] and correct PU in [0, 0.1];
/// window 2 has misclassified PU in (0.8, 0.9] and correct PU in (0.1, 0.2].
std::pair<std::vector<PuSample>, std::vector<PuSample>> gen_equal_error_counterexample(std::uint64_t seed,
                                                                                       std::size_t n_per_window);

/// PU chunks with a constant 0.5 error rate whose PU distribution switches at
/// every concept change: concept 0 draws window-2 values, concept 1 window-1 values.
std::vector<Chunk> gen_counterexample_stream(std::uint64_t seed, const DriftSchedule& schedule);

/// Piecewise-stationary PU stream: every `segment_length` instances draw a new
/// error rate and PU shape (0 keeps one segment). Correct PU lie in [0, 0.5),
/// misclassified PU in [0.5, 1].
std::vector<PuSample> gen_pu_stream(std::uint64_t seed, std::size_t n, std::size_t segment_length);

/// Writes a header row and one instance per line with the label last.
void write_csv(std::ostream& out, ChunkStream& stream);

}  // namespace pudd
