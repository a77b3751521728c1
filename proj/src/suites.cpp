#include "pudd/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "pudd/baselines.hpp"
#include "pudd/streams.hpp"

namespace pudd {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Bins follow BucketSpec: [lo, hi), and std::uniform_real_distribution draws from [lo, hi).
double draw_in_bin(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

ProportionalPair gen_proportional_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_bins(1, 8);
  std::uniform_int_distribution<int> count(0, 40);
  std::uniform_int_distribution<int> scale_dist(1, 5);

  ProportionalPair pair;
  const int m = n_bins(rng);
  std::vector<double> interior(static_cast<std::size_t>(m - 1));
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (auto& e : interior) e = u(rng);
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  pair.miscl_edges.push_back(0.0);
  pair.miscl_edges.insert(pair.miscl_edges.end(), interior.begin(), interior.end());
  pair.miscl_edges.push_back(1.0);
  const std::size_t bins = pair.miscl_edges.size() - 1;

  std::vector<int> h(bins + 1);
  for (auto& c : h) c = count(rng);
  if (std::accumulate(h.begin(), h.end(), 0) == 0) h[0] = 1;
  const int scale = scale_dist(rng);

  std::uniform_real_distribution<double> pu(0.0, 1.0);
  auto fill = [&](std::vector<PuSample>& w, int factor) {
    for (int i = 0; i < h[0] * factor; ++i) w.push_back({pu(rng), true});
    for (std::size_t b = 0; b < bins; ++b) {
      for (int i = 0; i < h[b + 1] * factor; ++i) {
        w.push_back({draw_in_bin(rng, pair.miscl_edges[b], pair.miscl_edges[b + 1]), false});
      }
    }
    std::shuffle(w.begin(), w.end(), rng);
  };
  fill(pair.first, 1);
  fill(pair.second, scale);
  return pair;
}

Theorem1Summary run_theorem1_suite(std::size_t pairs, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Theorem1Summary s;
  s.pairs = pairs;
  for (std::size_t i = 0; i < pairs; ++i) {
    const ProportionalPair p = gen_proportional_pair(seed + i);
    const auto h1 = theorem_histogram(p.first, p.miscl_edges);
    const auto h2 = theorem_histogram(p.second, p.miscl_edges);
    const ErrorStats e1 = error_stats(p.first);
    const ErrorStats e2 = error_stats(p.second);
    const bool ok = proportions_equal(h1, h2) && theorem1_check(p.first, p.second, p.miscl_edges) &&
                    e1.errors * e2.total == e2.errors * e1.total;
    s.max_std_gap = std::max({s.max_std_gap, std::abs(e1.std_direct - e1.std_closed_form),
                              std::abs(e2.std_direct - e2.std_closed_form)});
    if (ok) ++s.passed;
  }
  s.elapsed_ms = elapsed_ms(start);
  return s;
}

Theorem2Summary run_theorem2_witness(std::size_t runs, std::size_t n_per_window, const BucketingConfig& bucketing,
                                     std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Theorem2Summary s;
  s.runs = runs;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto [w1, w2] = gen_equal_error_counterexample(seed + r, n_per_window);
    const ErrorStats e1 = error_stats(w1);
    const ErrorStats e2 = error_stats(w2);
    if (e1.rate == 0.5 && e2.rate == 0.5) ++s.equal_rates;
    if (e1.std_direct == 0.5 && e2.std_direct == 0.5) ++s.equal_stds;

    SubStream sub;
    sub.push({0, w1});
    sub.push({1, w2});
    const BuiltTable built = build_table(split_at_cut(sub, 0), bucketing);
    const double p = table_p_value(built.table).value_or(1.0);
    s.max_p_value = std::max(s.max_p_value, p);
    if (p < 1e-5) ++s.pudd_detected;

    // Window 1 warms the detectors up; the shift happens at the first sample of window 2.
    Ddm ddm;
    PageHinkley ph;
    bool ddm_drift[2] = {false, false};
    bool ph_drift[2] = {false, false};
    for (int w = 0; w < 2; ++w) {
      for (const auto& sample : w == 0 ? w1 : w2) {
        const int err = sample.correct ? 0 : 1;
        ddm_drift[w] |= ddm.update(err) == DriftStatus::Drift;
        ph_drift[w] |= ph.update(err) == DriftStatus::Drift;
      }
    }
    if (!ddm_drift[1]) ++s.ddm_stable;
    if (!ph_drift[1]) ++s.ph_stable;
    if (!ddm_drift[0] && !ddm_drift[1]) ++s.ddm_silent;
    if (!ph_drift[0] && !ph_drift[1]) ++s.ph_silent;
  }
  s.elapsed_ms = elapsed_ms(start);
  return s;
}

}  // namespace pudd
