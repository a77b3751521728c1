#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pudd/detector.hpp"

namespace pudd {

/// Window pair whose theorem histograms have identical proportions: window 2
/// repeats every bin count of window 1 `scale` times, with fresh PU values.
struct ProportionalPair {
  std::vector<PuSample> first;
  std::vector<PuSample> second;
  std::vector<double> miscl_edges;
};

ProportionalPair gen_proportional_pair(std::uint64_t seed);

struct Theorem1Summary {
  std::size_t pairs = 0;
  std::size_t passed = 0;
  // Largest |std_direct - std_closed_form| over all windows.
  double max_std_gap = 0.0;
  double elapsed_ms = 0.0;
};

/// Checks `pairs` generated pairs (seeds seed, seed + 1, ...).
Theorem1Summary run_theorem1_suite(std::size_t pairs, std::uint64_t seed = 1);

struct Theorem2Summary {
  std::size_t runs = 0;
  std::size_t equal_rates = 0;   // both rates exactly 0.5
  std::size_t equal_stds = 0;    // both stds exactly 0.5
  std::size_t pudd_detected = 0; // p-value below 1e-5
  std::size_t ddm_stable = 0;    // no Drift raised after the shift
  std::size_t ph_stable = 0;
  std::size_t ddm_silent = 0;    // no Drift raised on either window
  std::size_t ph_silent = 0;
  double max_p_value = 0.0;
  double elapsed_ms = 0.0;
};

/// Equal-error counterexample: PUDD compares the two windows directly while
/// DDM and Page-Hinkley consume them back to back (window 1 is warm-up).
Theorem2Summary run_theorem2_witness(std::size_t runs, std::size_t n_per_window, const BucketingConfig& bucketing = {},
                                     std::uint64_t seed = 1);

}  // namespace pudd
