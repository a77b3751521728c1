#include "pudd/streams.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "pudd/errors.hpp"

namespace pudd {

void DriftSchedule::validate() const {
  if (period_chunks < 1) throw ConfigError("period_chunks must be >= 1");
  if (concepts.empty()) throw ConfigError("concept sequence must not be empty");
  if (chunk_size < 1) throw ConfigError("chunk_size must be >= 1");
}

std::size_t DriftSchedule::concept_index(std::size_t chunk) const {
  return (chunk / period_chunks) % concepts.size();
}

std::vector<std::size_t> DriftSchedule::drift_chunks() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 1; c < n_chunks; ++c) {
    if (concept_at(c) != concept_at(c - 1)) out.push_back(c);
  }
  return out;
}

DriftSchedule default_sea_schedule() {
  DriftSchedule s;
  s.concepts = {8.0, 9.0, 7.0, 9.5};
  return s;
}

DriftSchedule default_binary_schedule() {
  DriftSchedule s;
  s.concepts = {0.0, 1.0};
  return s;
}

ChunkStream::ChunkStream(std::uint64_t seed, DriftSchedule schedule) : rng_(seed), schedule_(std::move(schedule)) {
  schedule_.validate();
}

std::optional<LabeledChunk> ChunkStream::next() {
  if (produced_ >= schedule_.n_chunks) return std::nullopt;
  LabeledChunk chunk;
  chunk.index = produced_;
  chunk.concept_param = schedule_.concept_at(produced_);
  chunk.instances.reserve(schedule_.chunk_size);
  for (std::size_t i = 0; i < schedule_.chunk_size; ++i) chunk.instances.push_back(draw(chunk.concept_param));
  ++produced_;
  return chunk;
}

SeaStream::SeaStream(std::uint64_t seed, DriftSchedule schedule, int noise_pct)
    : ChunkStream(seed, std::move(schedule)), noise_(noise_pct / 100.0) {
  if (noise_pct < 0 || noise_pct > 100) throw ConfigError("SEA noise must be a percentage");
}

LabeledInstance SeaStream::draw(double theta) {
  LabeledInstance inst;
  inst.x.resize(3);
  for (int j = 0; j < 3; ++j) inst.x(j) = 10.0 * unit_(rng_);
  inst.y = label(inst.x(0), inst.x(1), theta);
  if (noise_ > 0.0 && unit_(rng_) < noise_) inst.y = 1 - inst.y;
  return inst;
}

int SineStream::label(double x1, double x2, bool reversed) {
  const int y = x2 < std::sin(x1) ? 1 : 0;
  return reversed ? 1 - y : y;
}

LabeledInstance SineStream::draw(double concept_param) {
  LabeledInstance inst;
  inst.x.resize(2);
  inst.x(0) = unit_(rng_);
  inst.x(1) = unit_(rng_);
  inst.y = label(inst.x(0), inst.x(1), concept_param != 0.0);
  return inst;
}

int MixedStream::label(bool v, bool w, double x3, double x4, bool reversed) {
  const bool numeric = x4 < 0.5 + 0.3 * std::sin(3.0 * std::numbers::pi * x3);
  const int y = (int(v) + int(w) + int(numeric)) >= 2 ? 1 : 0;
  return reversed ? 1 - y : y;
}

LabeledInstance MixedStream::draw(double concept_param) {
  LabeledInstance inst;
  inst.x.resize(4);
  inst.x(0) = unit_(rng_) < 0.5 ? 1.0 : 0.0;
  inst.x(1) = unit_(rng_) < 0.5 ? 1.0 : 0.0;
  inst.x(2) = unit_(rng_);
  inst.x(3) = unit_(rng_);
  inst.y = label(inst.x(0) != 0.0, inst.x(1) != 0.0, inst.x(2), inst.x(3), concept_param != 0.0);
  return inst;
}

std::unique_ptr<SeaStream> gen_sea(std::uint64_t seed, DriftSchedule schedule, int noise_pct) {
  return std::make_unique<SeaStream>(seed, std::move(schedule), noise_pct);
}

std::unique_ptr<SineStream> gen_sine(std::uint64_t seed, DriftSchedule schedule) {
  return std::make_unique<SineStream>(seed, std::move(schedule));
}

std::unique_ptr<MixedStream> gen_mixed(std::uint64_t seed, DriftSchedule schedule) {
  return std::make_unique<MixedStream>(seed, std::move(schedule));
}

namespace {

// Uniform on the half-open interval (lo, hi].
double uniform_left_open(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return hi - u(rng) * (hi - lo);
}

// Uniform on [lo, hi).
double uniform_right_open(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return lo + u(rng) * (hi - lo);
}

std::vector<PuSample> counterexample_window(std::mt19937_64& rng, std::size_t n, bool high) {
  std::vector<PuSample> w;
  w.reserve(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    w.push_back({high ? uniform_left_open(rng, 0.9, 1.0) : uniform_left_open(rng, 0.8, 0.9), false});
  }
  for (std::size_t i = half; i < n; ++i) {
    w.push_back({high ? uniform_right_open(rng, 0.0, 0.1) : uniform_left_open(rng, 0.1, 0.2), true});
  }
  std::shuffle(w.begin(), w.end(), rng);
  return w;
}

}  // namespace

std::pair<std::vector<PuSample>, std::vector<PuSample>> gen_equal_error_counterexample(std::uint64_t seed,
                                                                                       std::size_t n_per_window) {
  if (n_per_window < 2 || n_per_window % 2 != 0) {
    throw std::invalid_argument("counterexample windows need an even size >= 2");
  }
  std::mt19937_64 rng(seed);
  auto w1 = counterexample_window(rng, n_per_window, true);
  auto w2 = counterexample_window(rng, n_per_window, false);
  return {std::move(w1), std::move(w2)};
}

std::vector<Chunk> gen_counterexample_stream(std::uint64_t seed, const DriftSchedule& schedule) {
  schedule.validate();
  if (schedule.chunk_size < 2 || schedule.chunk_size % 2 != 0) {
    throw ConfigError("counterexample chunks need an even size >= 2");
  }
  std::mt19937_64 rng(seed);
  std::vector<Chunk> chunks;
  chunks.reserve(schedule.n_chunks);
  for (std::size_t c = 0; c < schedule.n_chunks; ++c) {
    chunks.push_back({c, counterexample_window(rng, schedule.chunk_size, schedule.concept_at(c) != 0.0)});
  }
  return chunks;
}

std::vector<PuSample> gen_pu_stream(std::uint64_t seed, std::size_t n, std::size_t segment_length) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double error_rate = 0.0;
  double scale = 0.0;
  double shape = 0.0;
  auto new_segment = [&] {
    error_rate = 0.05 + 0.3 * unit(rng);
    scale = 0.2 + 0.3 * unit(rng);
    shape = 0.5 + 2.5 * unit(rng);
  };
  new_segment();
  std::vector<PuSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (segment_length > 0 && i > 0 && i % segment_length == 0) new_segment();
    const bool wrong = unit(rng) < error_rate;
    const double v = std::pow(unit(rng), shape);
    out.push_back({wrong ? 0.5 + 0.5 * v : scale * v, !wrong});
  }
  return out;
}

void write_csv(std::ostream& out, ChunkStream& stream) {
  for (const auto& name : stream.feature_names()) out << name << ',';
  out << "label\n";
  char buf[32];
  while (auto chunk = stream.next()) {
    for (const auto& inst : chunk->instances) {
      for (Eigen::Index j = 0; j < inst.x.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", inst.x(j));
        out << buf << ',';
      }
      out << inst.y << '\n';
    }
  }
}

}  // namespace pudd
