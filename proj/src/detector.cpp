#include "pudd/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "pudd/errors.hpp"

namespace pudd {

SubStream::SubStream(std::vector<Chunk> chunks) {
  for (auto& c : chunks) push(std::move(c));
}

void SubStream::push(Chunk chunk) {
  if (chunk.samples.empty()) throw std::invalid_argument("chunk must contain at least one sample");
  if (!chunks_.empty() && chunk.index != chunks_.back().index + 1) {
    throw std::invalid_argument("chunk index " + std::to_string(chunk.index) + " does not follow " +
                                std::to_string(chunks_.back().index));
  }
  for (const auto& s : chunk.samples) {
    if (!(s.pu >= 0.0 && s.pu <= 1.0)) throw OutOfRange("PU value outside [0, 1]");
  }
  chunks_.push_back(std::move(chunk));
}

std::size_t SubStream::sample_count() const {
  std::size_t n = 0;
  for (const auto& c : chunks_) n += c.samples.size();
  return n;
}

void DetectorConfig::validate() const {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0, 1)");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  bucketing.validate();
}

WindowSplit split_at_cut(const SubStream& sub, std::size_t cut) {
  if (sub.size() < 2 || cut < sub.first_index() || cut >= sub.last_index()) {
    throw EmptyWindow("cut " + std::to_string(cut) + " leaves an empty window");
  }
  WindowSplit split;
  for (const auto& chunk : sub.chunks()) {
    const bool first = chunk.index <= cut;
    for (const auto& s : chunk.samples) {
      auto& dst = s.correct ? (first ? split.correct_first : split.correct_second)
                            : (first ? split.miscl_first : split.miscl_second);
      dst.push_back(s.pu);
    }
  }
  return split;
}

ContingencyTable table_for_spec(const BucketSpec& spec, std::span<const double> correct_first,
                                std::int64_t miscl_first, std::span<const double> correct_second,
                                std::int64_t miscl_second) {
  const int k = spec.k();
  CountMatrix counts = CountMatrix::Zero(2, k + 1);
  for (double v : correct_first) ++counts(0, spec.assign(v));
  for (double v : correct_second) ++counts(1, spec.assign(v));
  counts(0, k) = miscl_first;
  counts(1, k) = miscl_second;
  return ContingencyTable(std::move(counts));
}

BuiltTable build_table(const WindowSplit& split, const BucketingConfig& config) {
  if (split.correct_first.empty()) {
    throw TooFewSamples("first window has no correctly classified samples to bucket");
  }
  BucketSpec spec = fit(split.correct_first, config);
  ContingencyTable table =
      table_for_spec(spec, split.correct_first, static_cast<std::int64_t>(split.miscl_first.size()),
                     split.correct_second, static_cast<std::int64_t>(split.miscl_second.size()));
  return {std::move(table), std::move(spec)};
}

double heuristic_mean(double sum, std::int64_t count) {
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

bool heuristic_allows_test(SkipHeuristic mode, double mean_miscl_first, double mean_miscl_second) {
  switch (mode) {
    case SkipHeuristic::PaperPseudocode:
      return mean_miscl_first >= mean_miscl_second;
    case SkipHeuristic::PaperText:
      return mean_miscl_second > mean_miscl_first;
    case SkipHeuristic::Off:
      return true;
  }
  return true;
}

std::optional<double> table_p_value(const ContingencyTable& table) {
  try {
    return chi_square_test(table.without_empty_columns()).p_value;
  } catch (const ZeroMarginal&) {
    return std::nullopt;
  }
}

void finalize_report(DetectionReport& report, double sigma) {
  report.min_p.reset();
  report.chosen_cut.reset();
  for (const auto& c : report.per_cut) {
    if (c.status != CutStatus::Tested || !c.p_value) continue;
    if (!report.min_p || *c.p_value < *report.min_p) {
      report.min_p = c.p_value;
      report.chosen_cut = c.cut;
    }
  }
  report.alarm = report.min_p.has_value() && *report.min_p < sigma;
  if (!report.alarm) report.chosen_cut.reset();
}

namespace {

double sum_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

CutOutcome evaluate_batch_cut(const SubStream& sub, std::size_t cut, const DetectorConfig& config) {
  CutOutcome out;
  out.cut = cut;
  const WindowSplit split = split_at_cut(sub, cut);
  const double mean_first = heuristic_mean(sum_of(split.miscl_first), static_cast<std::int64_t>(split.miscl_first.size()));
  const double mean_second =
      heuristic_mean(sum_of(split.miscl_second), static_cast<std::int64_t>(split.miscl_second.size()));
  if (!heuristic_allows_test(config.skip_heuristic, mean_first, mean_second)) {
    out.status = CutStatus::SkippedHeuristic;
    return out;
  }
  try {
    const BuiltTable built = build_table(split, config.bucketing);
    out.k = built.spec.k();
    out.p_value = table_p_value(built.table);
    if (!out.p_value) out.status = CutStatus::SkippedDegenerate;
  } catch (const TooFewSamples&) {
    out.status = CutStatus::SkippedTooFewSamples;
  }
  return out;
}

}  // namespace

DetectionReport detect(const SubStream& sub, const DetectorConfig& config) {
  config.validate();
  DetectionReport report;
  if (sub.size() < 2) return report;
  const std::size_t n_cuts = sub.size() - 1;
  report.per_cut.resize(n_cuts);
  detail::parallel_for(n_cuts, config.threads, [&](std::size_t i) {
    report.per_cut[i] = evaluate_batch_cut(sub, sub.first_index() + i, config);
  });
  finalize_report(report, config.sigma);
  return report;
}

SubStream on_alarm(const SubStream& sub, std::size_t chosen_cut) {
  std::vector<Chunk> kept;
  for (const auto& c : sub.chunks()) {
    if (c.index > chosen_cut) kept.push_back(c);
  }
  return SubStream(std::move(kept));
}

ErrorStats error_stats(std::span<const PuSample> window) {
  ErrorStats st;
  st.total = static_cast<std::int64_t>(window.size());
  for (const auto& s : window) st.errors += s.correct ? 0 : 1;
  if (st.total == 0) return st;
  st.rate = static_cast<double>(st.errors) / static_cast<double>(st.total);
  double sq = 0.0;
  for (const auto& s : window) {
    const double e = s.correct ? 0.0 : 1.0;
    sq += (e - st.rate) * (e - st.rate);
  }
  st.std_direct = std::sqrt(sq / static_cast<double>(st.total));
  st.std_closed_form = std::sqrt(std::max(0.0, st.rate - st.rate * st.rate));
  return st;
}

std::vector<std::int64_t> theorem_histogram(std::span<const PuSample> window, const std::vector<double>& miscl_edges) {
  const BucketSpec partition(miscl_edges, std::vector<double>(miscl_edges.size() - 1, 0.0));
  std::vector<std::int64_t> h(static_cast<std::size_t>(partition.k()) + 1, 0);
  for (const auto& s : window) {
    if (s.correct) {
      ++h[0];
    } else {
      ++h[static_cast<std::size_t>(partition.assign(s.pu)) + 1];
    }
  }
  return h;
}

bool proportions_equal(std::span<const std::int64_t> h1, std::span<const std::int64_t> h2) {
  if (h1.size() != h2.size()) return false;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  for (auto c : h1) n1 += c;
  for (auto c : h2) n2 += c;
  if (n1 == 0 || n2 == 0) return n1 == n2;
  for (std::size_t j = 0; j < h1.size(); ++j) {
    if (h1[j] * n2 != h2[j] * n1) return false;
  }
  return true;
}

bool theorem1_check(std::span<const PuSample> window1, std::span<const PuSample> window2,
                    const std::vector<double>& miscl_edges) {
  const auto h1 = theorem_histogram(window1, miscl_edges);
  const auto h2 = theorem_histogram(window2, miscl_edges);
  if (!proportions_equal(h1, h2)) return true;

  const ErrorStats s1 = error_stats(window1);
  const ErrorStats s2 = error_stats(window2);
  const bool rates_equal = s1.errors * s2.total == s2.errors * s1.total;
  const bool stds_match_closed_form =
      std::abs(s1.std_direct - s1.std_closed_form) <= 1e-12 && std::abs(s2.std_direct - s2.std_closed_form) <= 1e-12;
  const bool stds_equal = std::abs(s1.std_closed_form - s2.std_closed_form) <= 1e-12;
  return rates_equal && stds_match_closed_form && stds_equal;
}

}  // namespace pudd
