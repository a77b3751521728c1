#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "pudd/harness.hpp"

namespace pudd {

/// Flat `[section]` / `key = value` file contents keyed by "section.key".
/// Lines starting with '#' or ';' are comments.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::string& path);

/// Applies recognised keys on top of `base`. Unknown keys and malformed values
/// raise ConfigError.
///
///   [stream]      kind seed noise chunk_size n_chunks period concepts
///   [detector]    kind sigma skip
///   [bucketing]   k theta min_expected max_rounds
///   [classifier]  regime
///   [experiment]  repetitions threads out
ExperimentConfig apply_key_values(const KeyValues& kv, ExperimentConfig base = {});

/// Default stream schedule for a stream kind (SEA thresholds or 0/1 reversal).
DriftSchedule default_schedule_for(StreamKind kind);

}  // namespace pudd
