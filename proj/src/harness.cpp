#include "pudd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "parallel.hpp"
#include "pudd/baselines.hpp"
#include "pudd/classifiers.hpp"
#include "pudd/errors.hpp"
#include "pudd/incremental.hpp"

namespace pudd {

bool StreamSpec::operator==(const StreamSpec& other) const {
  return kind == other.kind && seed == other.seed && noise_pct == other.noise_pct &&
         schedule.period_chunks == other.schedule.period_chunks && schedule.concepts == other.schedule.concepts &&
         schedule.chunk_size == other.schedule.chunk_size && schedule.n_chunks == other.schedule.n_chunks;
}

void ExperimentConfig::validate() const {
  stream.schedule.validate();
  if (stream.schedule.n_chunks < 2) throw ConfigError("a run needs at least two chunks");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0, 1)");
  bucketing.validate();
  if (stream.kind == StreamKind::Counterexample) {
    if (stream.schedule.chunk_size % 2 != 0) throw ConfigError("counterexample chunks need an even chunk size");
  }
  if (stream.kind == StreamKind::Sea && (stream.noise_pct < 0 || stream.noise_pct > 100)) {
    throw ConfigError("SEA noise must be a percentage");
  }
  if (stream.kind != StreamKind::Sea && stream.noise_pct != 0) {
    throw ConfigError("label noise is only defined for the SEA stream");
  }
}

double ExperimentResult::mean_accuracy() const {
  double s = 0.0;
  for (const auto& r : runs) s += r.overall_accuracy;
  return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
}

double ExperimentResult::mean_alarms() const {
  double s = 0.0;
  for (const auto& r : runs) s += static_cast<double>(r.alarms.size());
  return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
}

double ExperimentResult::mean_false_alarms() const {
  double s = 0.0;
  for (const auto& r : runs) s += static_cast<double>(r.false_alarms);
  return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

// Uniform wrapper over the detectors the harness can drive, one chunk at a time.
class ChunkDetector {
 public:
  ChunkDetector(const ExperimentConfig& config, std::size_t first_chunk) : kind_(config.detector) {
    detector_config_.sigma = config.sigma;
    detector_config_.bucketing = config.bucketing;
    detector_config_.skip_heuristic = config.skip_heuristic;
    if (kind_ == DetectorKind::PuddIncremental) {
      OnlineConfig oc;
      oc.detector = detector_config_;
      oc.chunk_size = config.stream.schedule.chunk_size;
      online_ = std::make_unique<OnlineDetector>(oc, first_chunk);
    }
  }

  // Returns true when the chunk raised an alarm; discards stale state itself.
  bool feed(std::size_t index, const std::vector<PuSample>& samples) {
    switch (kind_) {
      case DetectorKind::None:
        return false;
      case DetectorKind::PuddBatch: {
        sub_.push({index, samples});
        const DetectionReport report = detect(sub_, detector_config_);
        if (report.alarm) sub_ = on_alarm(sub_, *report.chosen_cut);
        return report.alarm;
      }
      case DetectorKind::PuddIncremental: {
        const DetectionReport report = online_->observe_chunk(samples);
        if (report.alarm) online_->on_alarm(*report.chosen_cut);
        return report.alarm;
      }
      case DetectorKind::Ddm:
        for (const auto& s : samples) {
          if (ddm_.update(s.correct ? 0 : 1) == DriftStatus::Drift) return true;
        }
        return false;
      case DetectorKind::PageHinkley:
        for (const auto& s : samples) {
          if (ph_.update(s.correct ? 0 : 1) == DriftStatus::Drift) return true;
        }
        return false;
    }
    return false;
  }

 private:
  DetectorKind kind_;
  DetectorConfig detector_config_;
  SubStream sub_;
  std::unique_ptr<OnlineDetector> online_;
  Ddm ddm_;
  PageHinkley ph_;
};

std::unique_ptr<ChunkStream> make_stream(const StreamSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case StreamKind::Sea:
      return gen_sea(seed, spec.schedule, spec.noise_pct);
    case StreamKind::Sine:
      return gen_sine(seed, spec.schedule);
    case StreamKind::Mixed:
      return gen_mixed(seed, spec.schedule);
    case StreamKind::Counterexample:
      break;
  }
  throw ConfigError("stream kind has no labelled generator");
}

void record_chunk(RunMetrics& m, std::size_t index, std::size_t correct, std::size_t size, bool alarm) {
  m.chunks.push_back(index);
  m.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(size));
  m.chunk_sizes.push_back(size);
  m.alarm.push_back(alarm);
  if (alarm) m.alarms.push_back(index);
}

void finish_metrics(RunMetrics& m) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < m.accuracy.size(); ++i) {
    weighted += m.accuracy[i] * static_cast<double>(m.chunk_sizes[i]);
    total += static_cast<double>(m.chunk_sizes[i]);
  }
  m.overall_accuracy = total > 0.0 ? weighted / total : 0.0;
  score_alarms(m);
}

RunMetrics run_counterexample(const ExperimentConfig& config, std::uint64_t seed) {
  RunMetrics m;
  m.seed = seed;
  m.drift_chunks = config.stream.schedule.drift_chunks();
  const auto start = Clock::now();
  const auto chunks = gen_counterexample_stream(seed, config.stream.schedule);
  ChunkDetector detector(config, 0);
  for (const auto& chunk : chunks) {
    const std::size_t correct = static_cast<std::size_t>(
        std::count_if(chunk.samples.begin(), chunk.samples.end(), [](const PuSample& s) { return s.correct; }));
    const auto t = Clock::now();
    const bool alarm = detector.feed(chunk.index, chunk.samples);
    m.detect_ms += ms_since(t);
    record_chunk(m, chunk.index, correct, chunk.samples.size(), alarm);
  }
  m.wall_ms = ms_since(start);
  finish_metrics(m);
  return m;
}

void train_on(GaussianNaiveBayes& model, const LabeledChunk& chunk) {
  for (const auto& inst : chunk.instances) model.partial_fit(inst.x, inst.y);
}

}  // namespace

void score_alarms(RunMetrics& m) {
  m.delays.assign(m.drift_chunks.size(), std::nullopt);
  m.false_alarms = 0;
  for (std::size_t a : m.alarms) {
    // Drift interval [d_i, d_{i+1}) containing the alarm.
    const auto it = std::upper_bound(m.drift_chunks.begin(), m.drift_chunks.end(), a);
    if (it == m.drift_chunks.begin()) {
      ++m.false_alarms;
      continue;
    }
    const std::size_t i = static_cast<std::size_t>(it - m.drift_chunks.begin()) - 1;
    if (!m.delays[i]) {
      m.delays[i] = a - m.drift_chunks[i];
    } else {
      ++m.false_alarms;
    }
  }
}

RunMetrics run_single(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.stream.kind == StreamKind::Counterexample) return run_counterexample(config, seed);

  RunMetrics m;
  m.seed = seed;
  m.drift_chunks = config.stream.schedule.drift_chunks();
  const auto start = Clock::now();

  auto stream = make_stream(config.stream, seed);
  GaussianNaiveBayes model(2, stream->n_features());

  // Chunk 0 initializes the model and is not scored.
  auto first = stream->next();
  auto t = Clock::now();
  train_on(model, *first);
  m.train_ms += ms_since(t);

  ChunkDetector detector(config, first->index + 1);
  std::vector<PuSample> samples;
  while (auto chunk = stream->next()) {
    t = Clock::now();
    samples.clear();
    samples.reserve(chunk->instances.size());
    std::size_t correct = 0;
    for (const auto& inst : chunk->instances) {
      const Eigen::VectorXd proba = model.predict_proba(inst.x);
      const bool ok = error_indicator(proba, inst.y) == 0;
      correct += ok ? 1 : 0;
      samples.push_back({pu_index(proba, inst.y), ok});
    }
    m.predict_ms += ms_since(t);

    t = Clock::now();
    const bool alarm = detector.feed(chunk->index, samples);
    m.detect_ms += ms_since(t);
    record_chunk(m, chunk->index, correct, chunk->instances.size(), alarm);

    t = Clock::now();
    if (alarm) {
      model.reset();
      train_on(model, *chunk);
    } else if (config.regime == Regime::Incremental) {
      train_on(model, *chunk);
    }
    m.train_ms += ms_since(t);
  }
  m.wall_ms = ms_since(start);
  finish_metrics(m);
  return m;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.runs.resize(static_cast<std::size_t>(config.repetitions));
  const int threads = config.threads > 0 ? config.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  detail::parallel_for(result.runs.size(), threads, [&](std::size_t i) {
    result.runs[i] = run_single(config, config.stream.seed + i);
  });
  std::sort(result.runs.begin(), result.runs.end(), [](const RunMetrics& a, const RunMetrics& b) { return a.seed < b.seed; });
  return result;
}

std::string to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::Sea: return "sea";
    case StreamKind::Sine: return "sine";
    case StreamKind::Mixed: return "mixed";
    case StreamKind::Counterexample: return "counterexample";
  }
  return "?";
}

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::PuddBatch: return "pudd";
    case DetectorKind::PuddIncremental: return "pudd-inc";
    case DetectorKind::Ddm: return "ddm";
    case DetectorKind::PageHinkley: return "ph";
    case DetectorKind::None: return "none";
  }
  return "?";
}

std::string to_string(Regime regime) {
  return regime == Regime::Incremental ? "incremental" : "train_once_until_alarm";
}

StreamKind parse_stream_kind(const std::string& s) {
  if (s == "sea") return StreamKind::Sea;
  if (s == "sine") return StreamKind::Sine;
  if (s == "mixed") return StreamKind::Mixed;
  if (s == "counterexample") return StreamKind::Counterexample;
  throw ConfigError("unknown stream '" + s + "'");
}

DetectorKind parse_detector_kind(const std::string& s) {
  if (s == "pudd") return DetectorKind::PuddBatch;
  if (s == "pudd-inc") return DetectorKind::PuddIncremental;
  if (s == "ddm") return DetectorKind::Ddm;
  if (s == "ph") return DetectorKind::PageHinkley;
  if (s == "none") return DetectorKind::None;
  throw ConfigError("unknown detector '" + s + "'");
}

Regime parse_regime(const std::string& s) {
  if (s == "incremental") return Regime::Incremental;
  if (s == "train_once_until_alarm" || s == "once") return Regime::TrainOnceUntilAlarm;
  throw ConfigError("unknown regime '" + s + "'");
}

SkipHeuristic parse_skip_heuristic(const std::string& s) {
  if (s == "text") return SkipHeuristic::PaperText;
  if (s == "pseudocode") return SkipHeuristic::PaperPseudocode;
  if (s == "off") return SkipHeuristic::Off;
  throw ConfigError("unknown skip heuristic '" + s + "'");
}

std::string detector_label(const ExperimentConfig& config) {
  std::string label = to_string(config.detector);
  if (config.detector == DetectorKind::PuddBatch || config.detector == DetectorKind::PuddIncremental) {
    const int exponent = static_cast<int>(std::lround(-std::log10(config.sigma)));
    if (std::abs(std::pow(10.0, -exponent) - config.sigma) < 1e-12 * config.sigma + 1e-300) {
      label += "-" + std::to_string(exponent);
    } else {
      std::ostringstream os;
      os << "@" << config.sigma;
      label += os.str();
    }
  }
  return label;
}

std::vector<ComparisonRow> compare_detectors(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) return {};
  for (const auto& c : configs) {
    if (!(c.stream == configs.front().stream) || c.regime != configs.front().regime ||
        c.repetitions != configs.front().repetitions) {
      throw ConfigError("compared configs must share stream, classifier regime and repetitions");
    }
  }
  std::vector<ComparisonRow> rows;
  for (const auto& c : configs) {
    const ExperimentResult result = run_experiment(c);
    ComparisonRow row;
    row.detector = detector_label(c);
    row.mean_accuracy = result.mean_accuracy();
    row.mean_false_alarms = result.mean_false_alarms();
    double delay_sum = 0.0;
    std::size_t detected = 0;
    std::size_t drifts = 0;
    for (const auto& run : result.runs) {
      drifts += run.delays.size();
      for (const auto& d : run.delays) {
        if (d) {
          delay_sum += static_cast<double>(*d);
          ++detected;
        }
      }
    }
    if (detected > 0) row.mean_delay = delay_sum / static_cast<double>(detected);
    row.recall = drifts > 0 ? static_cast<double>(detected) / static_cast<double>(drifts) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_run_csv(std::ostream& out, const RunMetrics& run) {
  out << "chunk,accuracy,alarm\n";
  for (std::size_t i = 0; i < run.chunks.size(); ++i) {
    out << run.chunks[i] << ',' << fixed(run.accuracy[i], 6) << ',' << (run.alarm[i] ? 1 : 0) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "detector,mean_accuracy,mean_delay,recall,mean_false_alarms\n";
  for (const auto& r : rows) {
    out << r.detector << ',' << fixed(100.0 * r.mean_accuracy, 4) << ','
        << (r.mean_delay ? fixed(*r.mean_delay, 3) : std::string("undetected")) << ',' << fixed(r.recall, 4) << ','
        << fixed(r.mean_false_alarms, 3) << '\n';
  }
}

void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << std::left << std::setw(14) << "detector" << std::right << std::setw(10) << "acc%" << std::setw(12) << "delay"
      << std::setw(9) << "recall" << std::setw(14) << "false_alarms" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(14) << r.detector << std::right << std::setw(10) << fixed(100.0 * r.mean_accuracy, 2)
        << std::setw(12) << (r.mean_delay ? fixed(*r.mean_delay, 2) : std::string("undetected")) << std::setw(9)
        << fixed(r.recall, 2) << std::setw(14) << fixed(r.mean_false_alarms, 2) << '\n';
  }
}

nlohmann::json summary_json(const ExperimentResult& result) {
  nlohmann::json runs = nlohmann::json::array();
  double wall = 0.0;
  for (const auto& r : result.runs) {
    nlohmann::json delays = nlohmann::json::array();
    for (const auto& d : r.delays) delays.push_back(d ? nlohmann::json(*d) : nlohmann::json(nullptr));
    runs.push_back({{"seed", r.seed},
                    {"overall_accuracy", r.overall_accuracy},
                    {"alarms", r.alarms},
                    {"delays", delays},
                    {"false_alarms", r.false_alarms},
                    {"wall_ms", r.wall_ms}});
    wall += r.wall_ms;
  }
  return {{"stream", to_string(result.config.stream.kind)},
          {"detector", detector_label(result.config)},
          {"regime", to_string(result.config.regime)},
          {"overall_accuracy", result.mean_accuracy()},
          {"alarms", result.mean_alarms()},
          {"false_alarms", result.mean_false_alarms()},
          {"wall_ms", wall},
          {"runs", runs}};
}

void write_outputs(const ExperimentResult& result, const std::string& path) {
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    std::ofstream csv(path + ".run" + std::to_string(i) + ".csv");
    if (!csv) throw ConfigError("cannot write " + path + ".run" + std::to_string(i) + ".csv");
    write_run_csv(csv, result.runs[i]);
  }
  std::ofstream json(path + ".json");
  if (!json) throw ConfigError("cannot write " + path + ".json");
  json << summary_json(result).dump(2) << '\n';
}

}  // namespace pudd
