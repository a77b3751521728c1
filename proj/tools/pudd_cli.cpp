// Command-line driver: run, compare, gen, bench, proptest.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pudd/config.hpp"
#include "pudd/errors.hpp"
#include "pudd/harness.hpp"
#include "pudd/incremental.hpp"
#include "pudd/streams.hpp"
#include "pudd/suites.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kAssertionFailure = 3;

// Flags shared by the experiment subcommands. Unset flags leave file values alone.
struct CommonFlags {
  std::string config_path;
  std::optional<std::string> stream;
  std::optional<std::string> detector;
  std::optional<double> sigma;
  std::optional<int> k;
  std::optional<double> theta;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::size_t> chunk_size;
  std::optional<std::size_t> n_chunks;
  std::optional<std::string> out;
  std::optional<std::string> regime;
  std::optional<std::string> skip;
  std::optional<int> noise;
  std::optional<int> threads;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "key = value config file");
    app->add_option("--stream", stream, "sea | sine | mixed | counterexample");
    app->add_option("--detector", detector, "pudd | pudd-inc | ddm | ph | none");
    app->add_option("--sigma", sigma, "alarm threshold");
    app->add_option("--k", k, "initial number of PU buckets");
    app->add_option("--theta", theta, "amplify coefficient");
    app->add_option("--seed", seed, "first seed");
    app->add_option("--reps", reps, "repetitions");
    app->add_option("--chunk-size", chunk_size, "instances per chunk");
    app->add_option("--chunks", n_chunks, "chunks per run");
    app->add_option("--out", out, "output path prefix");
    app->add_option("--regime", regime, "incremental | train_once_until_alarm");
    app->add_option("--skip", skip, "text | pseudocode | off");
    app->add_option("--noise", noise, "SEA label noise in percent");
    app->add_option("--threads", threads, "parallel repetitions (0 = all cores)");
  }

  pudd::ExperimentConfig build() const {
    pudd::KeyValues kv;
    if (!config_path.empty()) kv = pudd::read_key_values(config_path);
    auto set = [&kv](const char* key, const auto& opt) {
      if (opt) {
        std::ostringstream os;
        os.precision(17);
        os << *opt;
        kv[key] = os.str();
      }
    };
    set("stream.kind", stream);
    set("detector.kind", detector);
    set("detector.sigma", sigma);
    set("bucketing.k", k);
    set("bucketing.theta", theta);
    set("stream.seed", seed);
    set("experiment.repetitions", reps);
    set("stream.chunk_size", chunk_size);
    set("stream.n_chunks", n_chunks);
    set("experiment.out", out);
    set("classifier.regime", regime);
    set("detector.skip", skip);
    set("stream.noise", noise);
    set("experiment.threads", threads);
    pudd::ExperimentConfig c = pudd::apply_key_values(kv);
    c.validate();
    return c;
  }
};

void print_summary(const pudd::ExperimentResult& result) {
  std::printf("stream=%s detector=%s regime=%s runs=%zu\n", pudd::to_string(result.config.stream.kind).c_str(),
              pudd::detector_label(result.config).c_str(), pudd::to_string(result.config.regime).c_str(),
              result.runs.size());
  for (const auto& r : result.runs) {
    std::size_t detected = 0;
    for (const auto& d : r.delays) detected += d ? 1 : 0;
    std::printf("  seed %-6llu acc %6.2f%%  alarms %-3zu detected %zu/%zu  false %zu  %.0f ms\n",
                static_cast<unsigned long long>(r.seed), 100.0 * r.overall_accuracy, r.alarms.size(), detected,
                r.delays.size(), r.false_alarms, r.wall_ms);
  }
  std::printf("mean accuracy %.2f%%  mean alarms %.2f  mean false alarms %.2f\n", 100.0 * result.mean_accuracy(),
              result.mean_alarms(), result.mean_false_alarms());
}

int cmd_run(const CommonFlags& flags) {
  const pudd::ExperimentConfig config = flags.build();
  const pudd::ExperimentResult result = pudd::run_experiment(config);
  print_summary(result);
  if (!config.output_path.empty()) pudd::write_outputs(result, config.output_path);
  return 0;
}

int cmd_compare(const CommonFlags& flags, const std::vector<std::string>& detectors, const std::vector<double>& sigmas) {
  const pudd::ExperimentConfig base = flags.build();
  std::vector<pudd::ExperimentConfig> configs;
  for (const auto& d : detectors) {
    pudd::ExperimentConfig c = base;
    c.detector = pudd::parse_detector_kind(d);
    const bool pudd_arm = c.detector == pudd::DetectorKind::PuddBatch || c.detector == pudd::DetectorKind::PuddIncremental;
    if (pudd_arm && !sigmas.empty()) {
      for (double s : sigmas) {
        c.sigma = s;
        configs.push_back(c);
      }
    } else {
      configs.push_back(c);
    }
  }
  const auto rows = pudd::compare_detectors(configs);
  pudd::write_comparison_text(std::cout, rows);
  if (!base.output_path.empty()) {
    std::ofstream csv(base.output_path + ".csv");
    if (!csv) throw pudd::ConfigError("cannot write " + base.output_path + ".csv");
    pudd::write_comparison_csv(csv, rows);
  }
  return 0;
}

int cmd_gen(const CommonFlags& flags) {
  const pudd::ExperimentConfig c = flags.build();
  std::ofstream file;
  if (c.output_path.empty() || c.output_path == "-") {
    // stdout
  } else {
    file.open(c.output_path);
    if (!file) throw pudd::ConfigError("cannot write " + c.output_path);
  }
  std::ostream& out = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
  switch (c.stream.kind) {
    case pudd::StreamKind::Sea:
      pudd::write_csv(out, *pudd::gen_sea(c.stream.seed, c.stream.schedule, c.stream.noise_pct));
      break;
    case pudd::StreamKind::Sine:
      pudd::write_csv(out, *pudd::gen_sine(c.stream.seed, c.stream.schedule));
      break;
    case pudd::StreamKind::Mixed:
      pudd::write_csv(out, *pudd::gen_mixed(c.stream.seed, c.stream.schedule));
      break;
    case pudd::StreamKind::Counterexample: {
      out << "chunk,pu,correct\n";
      char buf[32];
      for (const auto& chunk : pudd::gen_counterexample_stream(c.stream.seed, c.stream.schedule)) {
        for (const auto& s : chunk.samples) {
          std::snprintf(buf, sizeof buf, "%.17g", s.pu);
          out << chunk.index << ',' << buf << ',' << (s.correct ? 1 : 0) << '\n';
        }
      }
      break;
    }
  }
  return 0;
}

int cmd_bench(const CommonFlags& flags, std::size_t instances, std::size_t segment) {
  const pudd::ExperimentConfig c = flags.build();
  pudd::OnlineConfig oc;
  oc.detector.sigma = c.sigma;
  oc.detector.bucketing = c.bucketing;
  oc.detector.skip_heuristic = c.skip_heuristic;
  oc.chunk_size = c.stream.schedule.chunk_size;
  const auto stream = pudd::gen_pu_stream(c.stream.seed, instances, segment);
  const pudd::BenchResult r = pudd::bench_incremental_vs_batch(stream, oc);
  std::printf("instances %zu  chunk %zu  k %d\n", instances, oc.chunk_size, c.bucketing.k_init);
  std::printf("batch        %10.1f ms  %8.3f us/instance  alarms %zu\n", r.batch_ms, r.batch_us_per_instance,
              r.batch_alarms.size());
  std::printf("incremental  %10.1f ms  %8.3f us/instance  alarms %zu\n", r.incremental_ms,
              r.incremental_us_per_instance, r.incremental_alarms.size());
  std::printf("speedup %.1fx  alarms %s\n", r.batch_ms / r.incremental_ms, r.equal ? "identical" : "DIFFER");
  return r.equal ? 0 : kAssertionFailure;
}

int cmd_proptest(std::size_t pairs, std::size_t runs, std::size_t window, std::uint64_t seed) {
  const pudd::Theorem1Summary t1 = pudd::run_theorem1_suite(pairs, seed);
  std::printf("theorem1: %zu/%zu pairs hold, max std gap %.3g, %.0f ms\n", t1.passed, t1.pairs, t1.max_std_gap,
              t1.elapsed_ms);
  const pudd::Theorem2Summary t2 = pudd::run_theorem2_witness(runs, window, {}, seed);
  std::printf("theorem2: rates %zu/%zu, stds %zu/%zu, pudd %zu/%zu (max p %.3g), ddm stable %zu (silent %zu), ph stable %zu (silent %zu), %.0f ms\n",
              t2.equal_rates, t2.runs, t2.equal_stds, t2.runs, t2.pudd_detected, t2.runs, t2.max_p_value,
              t2.ddm_stable, t2.ddm_silent, t2.ph_stable, t2.ph_silent, t2.elapsed_ms);
  const bool ok = t1.passed == t1.pairs && t2.equal_rates == t2.runs && t2.equal_stds == t2.runs &&
                  t2.pudd_detected == t2.runs && t2.ddm_stable * 100 >= 95 * t2.runs &&
                  t2.ph_stable * 100 >= 95 * t2.runs;
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : kAssertionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PU-index drift detection experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags, compare_flags, gen_flags, bench_flags;
  auto* run = app.add_subcommand("run", "run one experiment");
  run_flags.add_to(run);

  auto* compare = app.add_subcommand("compare", "detector comparison table");
  compare_flags.add_to(compare);
  std::vector<std::string> detectors{"pudd-inc", "ddm", "ph"};
  std::vector<double> sigmas;
  compare->add_option("--detectors", detectors, "detectors to compare")->delimiter(',');
  compare->add_option("--sigmas", sigmas, "PUDD thresholds (one row each)")->delimiter(',');

  auto* gen = app.add_subcommand("gen", "export a stream as CSV");
  gen_flags.add_to(gen);

  auto* bench = app.add_subcommand("bench", "incremental vs batch timing");
  bench_flags.add_to(bench);
  std::size_t instances = 100000;
  std::size_t segment = 20000;
  bench->add_option("--instances", instances, "stream length");
  bench->add_option("--segment", segment, "instances between PU distribution changes (0 = none)");

  auto* proptest = app.add_subcommand("proptest", "theorem property suites");
  std::size_t pairs = 1000, runs = 100, window = 1000;
  std::uint64_t prop_seed = 1;
  proptest->add_option("--pairs", pairs, "window pairs for the histogram suite");
  proptest->add_option("--runs", runs, "counterexample runs");
  proptest->add_option("--window", window, "instances per counterexample window");
  proptest->add_option("--seed", prop_seed, "first seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*compare) return cmd_compare(compare_flags, detectors, sigmas);
    if (*gen) return cmd_gen(gen_flags);
    if (*bench) return cmd_bench(bench_flags, instances, segment);
    if (*proptest) return cmd_proptest(pairs, runs, window, prop_seed);
  } catch (const pudd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
