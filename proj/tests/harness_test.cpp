#include <gtest/gtest.h>

#include <sstream>

#include "pudd/classifiers.hpp"
#include "pudd/config.hpp"
#include "pudd/errors.hpp"
#include "pudd/harness.hpp"

using namespace pudd;

namespace {

ExperimentConfig small_config(StreamKind kind, DetectorKind det, std::vector<double> concepts, std::size_t n_chunks = 30,
                              std::size_t chunk = 500) {
  ExperimentConfig c;
  c.stream.kind = kind;
  c.stream.schedule.concepts = std::move(concepts);
  c.stream.schedule.n_chunks = n_chunks;
  c.stream.schedule.chunk_size = chunk;
  c.detector = det;
  c.repetitions = 3;
  c.threads = 1;
  return c;
}

// Independent prequential replay: score chunk i with the model fitted on chunks < i.
std::vector<double> replay_accuracy(const ExperimentConfig& c, std::uint64_t seed) {
  auto stream = gen_sea(seed, c.stream.schedule, c.stream.noise_pct);
  GaussianNaiveBayes model(2, 3);
  std::vector<double> acc;
  bool first = true;
  while (auto chunk = stream->next()) {
    if (!first) {
      int ok = 0;
      for (const auto& inst : chunk->instances) ok += error_indicator(model.predict_proba(inst.x), inst.y) == 0;
      acc.push_back(static_cast<double>(ok) / static_cast<double>(chunk->instances.size()));
    }
    if (first || c.regime == Regime::Incremental) {
      for (const auto& inst : chunk->instances) model.partial_fit(inst.x, inst.y);
    }
    first = false;
  }
  return acc;
}

}  // namespace

TEST(ScoreAlarms, DelaysAndFalseAlarms) {
  RunMetrics m;
  m.drift_chunks = {10, 20, 30};
  m.alarms = {3, 11, 12, 25, 31};
  score_alarms(m);
  ASSERT_EQ(m.delays.size(), 3u);
  EXPECT_EQ(m.delays[0], 1u);
  EXPECT_EQ(m.delays[1], 5u);
  EXPECT_EQ(m.delays[2], 1u);
  EXPECT_EQ(m.false_alarms, 2u);

  m.alarms = {};
  score_alarms(m);
  EXPECT_FALSE(m.delays[0].has_value());
  EXPECT_EQ(m.false_alarms, 0u);
}

TEST(RunSingle, TestThenTrainOrderingMatchesReplay) {
  for (Regime regime : {Regime::Incremental, Regime::TrainOnceUntilAlarm}) {
    auto c = small_config(StreamKind::Sea, DetectorKind::None, {8.0, 9.0, 7.0, 9.5}, 25, 400);
    c.regime = regime;
    const auto run = run_single(c, 7);
    EXPECT_EQ(run.accuracy, replay_accuracy(c, 7));
    EXPECT_EQ(run.chunks.front(), 1u);
    EXPECT_EQ(run.chunks.size(), 24u);
  }
}

TEST(RunSingle, OverallAccuracyIsSizeWeighted) {
  auto c = small_config(StreamKind::Sine, DetectorKind::PuddIncremental, {0.0, 1.0});
  const auto run = run_single(c, 2);
  double w = 0.0, n = 0.0;
  for (std::size_t i = 0; i < run.accuracy.size(); ++i) {
    w += run.accuracy[i] * static_cast<double>(run.chunk_sizes[i]);
    n += static_cast<double>(run.chunk_sizes[i]);
  }
  EXPECT_DOUBLE_EQ(run.overall_accuracy, w / n);
  std::size_t flagged = 0;
  for (bool a : run.alarm) flagged += a;
  EXPECT_EQ(flagged, run.alarms.size());
}

TEST(RunSingle, NoDetectorStationarySeaCeiling) {
  auto c = small_config(StreamKind::Sea, DetectorKind::None, {8.0}, 100, 1000);
  EXPECT_GE(run_single(c, 1).overall_accuracy, 0.93);
}

TEST(RunSingle, BatchAndIncrementalPuddAgree) {
  auto inc = small_config(StreamKind::Sine, DetectorKind::PuddIncremental, {0.0, 1.0}, 30, 300);
  auto bat = inc;
  bat.detector = DetectorKind::PuddBatch;
  const auto a = run_single(inc, 4);
  const auto b = run_single(bat, 4);
  EXPECT_EQ(a.alarms, b.alarms);
  EXPECT_EQ(a.accuracy, b.accuracy);
  EXPECT_FALSE(a.alarms.empty());
}

TEST(RunExperiment, SortedBySeedAndThreadIndependent) {
  auto c = small_config(StreamKind::Mixed, DetectorKind::Ddm, {0.0, 1.0});
  c.repetitions = 4;
  c.stream.seed = 10;
  const auto a = run_experiment(c);
  c.threads = 3;
  const auto b = run_experiment(c);
  ASSERT_EQ(a.runs.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.runs[i].seed, 10 + i);
    EXPECT_EQ(a.runs[i].accuracy, b.runs[i].accuracy);
    EXPECT_EQ(a.runs[i].alarms, b.runs[i].alarms);
  }
}

TEST(RunExperiment, ByteIdenticalCsv) {
  auto c = small_config(StreamKind::Sea, DetectorKind::PuddIncremental, {8.0, 9.0});
  std::ostringstream a, b;
  write_run_csv(a, run_single(c, 5));
  write_run_csv(b, run_single(c, 5));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "chunk,accuracy,alarm");
}

TEST(RunExperiment, ConfigErrors) {
  auto c = small_config(StreamKind::Sea, DetectorKind::None, {8.0});
  c.repetitions = 0;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_config(StreamKind::Sea, DetectorKind::None, {8.0});
  c.sigma = 2.0;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_config(StreamKind::Sine, DetectorKind::None, {0.0});
  c.stream.noise_pct = 10;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_config(StreamKind::Counterexample, DetectorKind::None, {0.0, 1.0}, 10, 11);
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(CompareDetectors, CounterexamplePuddDetectsDdmDoesNot) {
  auto pudd = small_config(StreamKind::Counterexample, DetectorKind::PuddIncremental, {0.0, 1.0}, 20, 1000);
  pudd.repetitions = 10;
  auto ddm = pudd;
  ddm.detector = DetectorKind::Ddm;
  auto ph = pudd;
  ph.detector = DetectorKind::PageHinkley;
  const auto rows = compare_detectors({pudd, ddm, ph});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].detector, "pudd-inc-5");
  ASSERT_TRUE(rows[0].mean_delay.has_value());
  EXPECT_LE(*rows[0].mean_delay, 1.0);
  EXPECT_EQ(rows[0].recall, 1.0);
  EXPECT_LE(rows[1].recall, 0.1);
  EXPECT_LE(rows[2].recall, 0.1);
}

TEST(CompareDetectors, DeterministicRowsAndStreamCheck) {
  auto a = small_config(StreamKind::Sea, DetectorKind::PuddIncremental, {8.0, 9.0});
  const auto r1 = compare_detectors({a, a});
  std::ostringstream s1, s2;
  write_comparison_csv(s1, {r1[0]});
  write_comparison_csv(s2, {r1[1]});
  EXPECT_EQ(s1.str(), s2.str());

  auto b = a;
  b.stream.seed = 99;
  EXPECT_THROW(compare_detectors({a, b}), ConfigError);
  b = a;
  b.regime = Regime::TrainOnceUntilAlarm;
  EXPECT_THROW(compare_detectors({a, b}), ConfigError);
}

TEST(CompareDetectors, SigmaSweepFalseAlarmsNonIncreasing) {
  std::vector<ExperimentConfig> configs;
  for (double sigma : {1e-1, 1e-3, 1e-5}) {
    auto c = small_config(StreamKind::Sea, DetectorKind::PuddIncremental, {8.0}, 30, 500);
    c.regime = Regime::TrainOnceUntilAlarm;
    c.repetitions = 30;
    c.sigma = sigma;
    configs.push_back(c);
  }
  const auto rows = compare_detectors(configs);
  EXPECT_GE(rows[0].mean_false_alarms, rows[1].mean_false_alarms);
  EXPECT_GE(rows[1].mean_false_alarms, rows[2].mean_false_alarms);
  EXPECT_EQ(rows[2].detector, "pudd-inc-5");
  std::ostringstream text;
  write_comparison_text(text, rows);
  EXPECT_NE(text.str().find("pudd-inc-1"), std::string::npos);
}

TEST(SummaryJson, Fields) {
  auto c = small_config(StreamKind::Sea, DetectorKind::PuddIncremental, {8.0, 9.0});
  c.repetitions = 2;
  const auto j = summary_json(run_experiment(c));
  for (const char* key : {"overall_accuracy", "alarms", "false_alarms", "wall_ms", "runs"}) EXPECT_TRUE(j.contains(key));
  ASSERT_EQ(j["runs"].size(), 2u);
  for (const char* key : {"overall_accuracy", "alarms", "delays", "false_alarms", "wall_ms"})
    EXPECT_TRUE(j["runs"][0].contains(key));
}

TEST(Enums, ParseRoundTrip) {
  for (auto k : {StreamKind::Sea, StreamKind::Sine, StreamKind::Mixed, StreamKind::Counterexample})
    EXPECT_EQ(parse_stream_kind(to_string(k)), k);
  for (auto k : {DetectorKind::PuddBatch, DetectorKind::PuddIncremental, DetectorKind::Ddm, DetectorKind::PageHinkley,
                 DetectorKind::None})
    EXPECT_EQ(parse_detector_kind(to_string(k)), k);
  for (auto r : {Regime::Incremental, Regime::TrainOnceUntilAlarm}) EXPECT_EQ(parse_regime(to_string(r)), r);
  EXPECT_THROW(parse_stream_kind("river"), ConfigError);
  EXPECT_THROW(parse_skip_heuristic("maybe"), ConfigError);
}

TEST(Config, ParsesSectionsAndOverrides) {
  std::istringstream in(R"(# experiment
[stream]
kind = sine
seed = 4
chunk_size = 250

[detector]
kind = ddm
sigma = 1e-3   
; comment
[bucketing]
k = 3
theta = 1.5
[classifier]
regime = train_once_until_alarm
[experiment]
repetitions = 2
)");
  const auto kv = parse_key_values(in);
  EXPECT_EQ(kv.at("stream.kind"), "sine");
  EXPECT_EQ(kv.at("detector.sigma"), "1e-3");
  const auto c = apply_key_values(kv);
  EXPECT_EQ(c.stream.kind, StreamKind::Sine);
  EXPECT_EQ(c.stream.schedule.concepts, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(c.stream.seed, 4u);
  EXPECT_EQ(c.stream.schedule.chunk_size, 250u);
  EXPECT_EQ(c.detector, DetectorKind::Ddm);
  EXPECT_DOUBLE_EQ(c.sigma, 1e-3);
  EXPECT_EQ(c.bucketing.k_init, 3);
  EXPECT_DOUBLE_EQ(c.bucketing.theta, 1.5);
  EXPECT_EQ(c.regime, Regime::TrainOnceUntilAlarm);
  EXPECT_EQ(c.repetitions, 2);

  KeyValues over = kv;
  over["detector.sigma"] = "1e-5";
  over["stream.concepts"] = "0";
  const auto d = apply_key_values(over);
  EXPECT_DOUBLE_EQ(d.sigma, 1e-5);
  EXPECT_EQ(d.stream.schedule.concepts, (std::vector<double>{0.0}));
}

TEST(Config, Errors) {
  std::istringstream bad_line("[stream]\nkind sea\n");
  EXPECT_THROW(parse_key_values(bad_line), ConfigError);
  std::istringstream bad_section("[stream\n");
  EXPECT_THROW(parse_key_values(bad_section), ConfigError);
  EXPECT_THROW(apply_key_values({{"stream.colour", "red"}}), ConfigError);
  EXPECT_THROW(apply_key_values({{"detector.sigma", "small"}}), ConfigError);
  EXPECT_THROW(apply_key_values({{"stream.seed", "-3"}}), ConfigError);
  EXPECT_THROW(read_key_values("/nonexistent/pudd.cfg"), ConfigError);
}
