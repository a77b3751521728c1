#include "pudd/incremental.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "parallel.hpp"
#include "pudd/errors.hpp"

namespace pudd {

void OnlineConfig::validate() const {
  detector.validate();
  if (chunk_size < 1) throw ConfigError("chunk_size must be >= 1");
}

OnlineDetector::OnlineDetector(OnlineConfig config, std::size_t first_unit)
    : config_(std::move(config)), t1_(first_unit) {
  config_.validate();
}

std::size_t OnlineDetector::unit_size() const {
  return config_.cadence == CutCadence::PerInstance ? 1 : config_.chunk_size;
}

// Row 1 comes from the whole-history counts minus row 0, so no pass over
// the second window is needed.
CutState OnlineDetector::make_cut(std::size_t cut, std::size_t first_size, std::span<const double> sorted_first,
                                  double miscl_sum_first, std::int64_t miscl_count_first) const {
  CutState state;
  state.cut = cut;
  state.first_size = first_size;
  state.miscl_sum_first = miscl_sum_first;
  state.miscl_count_first = miscl_count_first;
  state.second_size = static_cast<std::int64_t>(history_.size() - first_size);
  for (std::size_t i = first_size; i < history_.size(); ++i) {
    if (!history_[i].correct) {
      state.miscl_sum_second += history_[i].pu;
      ++state.miscl_count_second;
    }
  }
  if (sorted_first.empty()) return state;

  BucketSpec spec = fit_sorted(sorted_first, config_.detector.bucketing);
  const int k = spec.k();
  const auto first = histogram_sorted(spec, sorted_first);
  const auto all = histogram_sorted(spec, sorted_correct_);
  CountMatrix counts = CountMatrix::Zero(2, k + 1);
  for (int j = 0; j < k; ++j) {
    counts(0, j) = first[static_cast<std::size_t>(j)];
    counts(1, j) = all[static_cast<std::size_t>(j)] - first[static_cast<std::size_t>(j)];
  }
  counts(0, k) = miscl_count_first;
  counts(1, k) = state.miscl_count_second;
  state.spec = std::move(spec);
  state.table = ContingencyTable(std::move(counts));
  return state;
}

void OnlineDetector::merge_pending() {
  std::sort(pending_.begin(), pending_.end());
  const auto mid = static_cast<std::ptrdiff_t>(sorted_correct_.size());
  sorted_correct_.insert(sorted_correct_.end(), pending_.begin(), pending_.end());
  std::inplace_merge(sorted_correct_.begin(), sorted_correct_.begin() + mid, sorted_correct_.end());
  pending_.clear();
}

DetectionReport OnlineDetector::observe(const PuSample& sample) {
  if (!(sample.pu >= 0.0 && sample.pu <= 1.0)) throw OutOfRange("PU value outside [0, 1]");
  history_.push_back(sample);
  if (sample.correct) {
    pending_.push_back(sample.pu);
  } else {
    miscl_sum_ += sample.pu;
    ++miscl_count_;
  }

  // Delta-T: one cell of row 1 per live cut.
  for (auto& cut : cuts_) {
    ++cut.second_size;
    if (sample.correct) {
      if (cut.table) cut.table->increment(1, cut.spec->assign(sample.pu));
    } else {
      cut.miscl_sum_second += sample.pu;
      ++cut.miscl_count_second;
      if (cut.table) cut.table->increment(1, cut.table->cols() - 1);
    }
  }

  if (history_.size() % unit_size() != 0) return {};

  merge_pending();
  const std::size_t cut = t1_ + units_complete_;
  ++units_complete_;
  cuts_.push_back(make_cut(cut, history_.size(), sorted_correct_, miscl_sum_, miscl_count_));
  apply_cap();
  return evaluate();
}

DetectionReport OnlineDetector::observe_chunk(std::span<const PuSample> samples) {
  DetectionReport last;
  for (const auto& s : samples) last = observe(s);
  return last;
}

DetectionReport OnlineDetector::evaluate() const {
  DetectionReport report;
  // The newest cut has an empty second window and is not a candidate.
  const std::size_t n = cuts_.empty() ? 0 : cuts_.size() - 1;
  report.per_cut.resize(n);
  detail::parallel_for(n, config_.detector.threads, [&](std::size_t i) {
    const CutState& c = cuts_[i];
    CutOutcome& out = report.per_cut[i];
    out.cut = c.cut;
    const double mean_first = heuristic_mean(c.miscl_sum_first, c.miscl_count_first);
    const double mean_second = heuristic_mean(c.miscl_sum_second, c.miscl_count_second);
    if (!heuristic_allows_test(config_.detector.skip_heuristic, mean_first, mean_second)) {
      out.status = CutStatus::SkippedHeuristic;
      return;
    }
    if (!c.table) {
      out.status = CutStatus::SkippedTooFewSamples;
      return;
    }
    out.k = c.spec->k();
    out.p_value = table_p_value(*c.table);
    if (!out.p_value) out.status = CutStatus::SkippedDegenerate;
  });
  finalize_report(report, config_.detector.sigma);
  return report;
}

void OnlineDetector::apply_cap() {
  if (config_.max_live_cuts == 0) return;
  while (cuts_.size() > config_.max_live_cuts) cuts_.erase(cuts_.begin());
}

void OnlineDetector::on_alarm(std::size_t chosen_cut) {
  if (chosen_cut < t1_) return;
  const std::size_t dropped_units = std::min(chosen_cut - t1_ + 1, units_complete_ + 1);
  const std::size_t dropped_samples = std::min(dropped_units * unit_size(), history_.size());
  history_.erase(history_.begin(), history_.begin() + static_cast<std::ptrdiff_t>(dropped_samples));
  units_complete_ -= std::min(dropped_units, units_complete_);
  t1_ = chosen_cut + 1;

  // Rebuild the cumulative state from the retained history, then every
  // surviving cut from its prefix.
  pending_.clear();
  sorted_correct_.clear();
  miscl_sum_ = 0.0;
  miscl_count_ = 0;
  const std::size_t m = unit_size();
  for (std::size_t i = 0; i < units_complete_ * m; ++i) {
    if (history_[i].correct) pending_.push_back(history_[i].pu);
  }
  merge_pending();

  cuts_.clear();
  const std::size_t first_live =
      config_.max_live_cuts == 0 ? 0 : units_complete_ - std::min(units_complete_, config_.max_live_cuts);
  std::vector<double> prefix;
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t u = 0; u < units_complete_; ++u) {
    const auto mid = static_cast<std::ptrdiff_t>(prefix.size());
    for (std::size_t i = u * m; i < (u + 1) * m; ++i) {
      const PuSample& s = history_[i];
      if (s.correct) {
        prefix.push_back(s.pu);
      } else {
        sum += s.pu;
        ++count;
      }
    }
    std::sort(prefix.begin() + mid, prefix.end());
    std::inplace_merge(prefix.begin(), prefix.begin() + mid, prefix.end());
    if (u >= first_live) cuts_.push_back(make_cut(t1_ + u, (u + 1) * m, prefix, sum, count));
  }
  for (std::size_t i = units_complete_ * m; i < history_.size(); ++i) {
    if (history_[i].correct) {
      pending_.push_back(history_[i].pu);
    }
  }
  miscl_sum_ = sum;
  miscl_count_ = count;
  for (std::size_t i = units_complete_ * m; i < history_.size(); ++i) {
    if (!history_[i].correct) {
      miscl_sum_ += history_[i].pu;
      ++miscl_count_;
    }
  }
  apply_cap();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::vector<AlarmEvent> batch_alarm_sequence(std::span<const PuSample> stream, const OnlineConfig& config) {
  config.validate();
  std::vector<AlarmEvent> alarms;
  SubStream sub;
  const std::size_t m = config.chunk_size;
  for (std::size_t start = 0, index = 0; start + m <= stream.size(); start += m, ++index) {
    Chunk chunk{index, {stream.begin() + static_cast<std::ptrdiff_t>(start),
                        stream.begin() + static_cast<std::ptrdiff_t>(start + m)}};
    sub.push(std::move(chunk));
    const DetectionReport report = detect(sub, config.detector);
    if (report.alarm) {
      alarms.push_back({index, *report.chosen_cut});
      sub = on_alarm(sub, *report.chosen_cut);
    }
  }
  return alarms;
}

std::vector<AlarmEvent> online_alarm_sequence(std::span<const PuSample> stream, const OnlineConfig& config) {
  std::vector<AlarmEvent> alarms;
  OnlineDetector det(config, 0);
  const std::size_t m = config.chunk_size;
  for (std::size_t start = 0, index = 0; start + m <= stream.size(); start += m, ++index) {
    const DetectionReport report =
        det.observe_chunk(stream.subspan(start, m));
    if (report.alarm) {
      alarms.push_back({index, *report.chosen_cut});
      det.on_alarm(*report.chosen_cut);
    }
  }
  return alarms;
}

BenchResult bench_incremental_vs_batch(std::span<const PuSample> stream, const OnlineConfig& config) {
  if (config.cadence != CutCadence::ChunkBoundary) {
    throw ConfigError("bench compares chunk-aligned modes only");
  }
  BenchResult result;
  const double n = static_cast<double>(std::max<std::size_t>(stream.size(), 1));

  auto start = Clock::now();
  result.batch_alarms = batch_alarm_sequence(stream, config);
  result.batch_ms = elapsed_ms(start);

  start = Clock::now();
  result.incremental_alarms = online_alarm_sequence(stream, config);
  result.incremental_ms = elapsed_ms(start);

  result.batch_us_per_instance = 1000.0 * result.batch_ms / n;
  result.incremental_us_per_instance = 1000.0 * result.incremental_ms / n;
  result.equal = result.batch_alarms == result.incremental_alarms;
  return result;
}

}  // namespace pudd
