#pragma once

#include <cstdint>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"

namespace chromatic {

struct LLLCheckConfig {
  double t = 0.0;            // slack, expected >= k_max
  std::size_t k_prime = 0;   // assumed minimum edge size, >= 2
};

struct MarginalBounds {
  Rational lower;  // (1 - 1/t) / q
  Rational upper;  // (1 + 4/t) / q
};

// q >= (e t Δ)^{1/(k'-1)} with a 1e-12 relative guard band; ties fail.
bool lll_threshold_holds(int q, double t, std::size_t delta, std::size_t k_prime);

// Threshold test against the instance's Δ. Returns false when the slack or
// edge-size assumptions do not match the instance.
bool check_lll(const Instance& inst, const LLLCheckConfig& cfg);

MarginalBounds marginal_bounds(int q, const Rational& t);

// Largest t with q >= (e t Δ)^{1/(k_min-1)}; zero when no edge exists.
double max_lll_slack(const Instance& inst);

// Edge-wise local lemma condition with per-edge weights x(e).
bool lll_condition_holds(const Instance& inst, const std::vector<double>& weights);
std::vector<double> uniform_lll_weights(const Instance& inst, double t);

struct ResampleResult {
  FullColouring colouring;
  std::uint64_t resamples = 0;
};

ResampleResult moser_tardos(const Instance& inst, Rng& rng, std::uint64_t max_resamples);

// Each edge cut down to its first `keep` vertices, pinnings retained.
Instance truncate_edges(const Instance& inst, std::size_t keep);

// No edge is monochromatic on its first k - k1c vertices.
bool is_prefix_proper(const Instance& inst, const FullColouring& sigma, std::size_t k1c);

ResampleResult good_base_colouring(const Instance& inst, std::size_t k1c, Rng& rng,
                                   std::uint64_t max_resamples);

}  // namespace chromatic
