#include "pudd/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "pudd/errors.hpp"

namespace pudd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  const long long n = to_int(key, v);
  if (n < 0) throw ConfigError(key + ": must be non-negative");
  return static_cast<std::size_t>(n);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_key_values(in);
}

DriftSchedule default_schedule_for(StreamKind kind) {
  return kind == StreamKind::Sea ? default_sea_schedule() : default_binary_schedule();
}

ExperimentConfig apply_key_values(const KeyValues& kv, ExperimentConfig c) {
  // The stream kind decides the default concepts, so apply it first.
  if (auto it = kv.find("stream.kind"); it != kv.end()) {
    const StreamKind kind = parse_stream_kind(it->second);
    if (kind != c.stream.kind) {
      const DriftSchedule fresh = default_schedule_for(kind);
      c.stream.schedule.concepts = fresh.concepts;
    }
    c.stream.kind = kind;
  }
  for (const auto& [key, v] : kv) {
    if (key == "stream.kind") {
      continue;
    } else if (key == "stream.seed") {
      c.stream.seed = to_size(key, v);
    } else if (key == "stream.noise") {
      c.stream.noise_pct = static_cast<int>(to_int(key, v));
    } else if (key == "stream.chunk_size") {
      c.stream.schedule.chunk_size = to_size(key, v);
    } else if (key == "stream.n_chunks") {
      c.stream.schedule.n_chunks = to_size(key, v);
    } else if (key == "stream.period") {
      c.stream.schedule.period_chunks = to_size(key, v);
    } else if (key == "stream.concepts") {
      std::vector<double> concepts;
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) concepts.push_back(to_double(key, trim(item)));
      c.stream.schedule.concepts = concepts;
    } else if (key == "detector.kind") {
      c.detector = parse_detector_kind(v);
    } else if (key == "detector.sigma") {
      c.sigma = to_double(key, v);
    } else if (key == "detector.skip") {
      c.skip_heuristic = parse_skip_heuristic(v);
    } else if (key == "bucketing.k") {
      c.bucketing.k_init = static_cast<int>(to_int(key, v));
    } else if (key == "bucketing.theta") {
      c.bucketing.theta = to_double(key, v);
    } else if (key == "bucketing.min_expected") {
      c.bucketing.min_expected = to_double(key, v);
    } else if (key == "bucketing.max_rounds") {
      c.bucketing.max_amplify_rounds = static_cast<int>(to_int(key, v));
    } else if (key == "classifier.regime") {
      c.regime = parse_regime(v);
    } else if (key == "experiment.repetitions") {
      c.repetitions = static_cast<int>(to_int(key, v));
    } else if (key == "experiment.threads") {
      c.threads = static_cast<int>(to_int(key, v));
    } else if (key == "experiment.out") {
      c.output_path = v;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return c;
}

}  // namespace pudd
