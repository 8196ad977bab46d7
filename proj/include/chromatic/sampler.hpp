#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"
#include "chromatic/lp.hpp"
#include "chromatic/oracle.hpp"
#include "chromatic/params.hpp"

namespace chromatic {

// First uncoloured vertex whose surviving incident edges all keep more than
// k1s uncoloured vertices; empty when none exists or no edge survives.
std::optional<Vertex> eligible_vertex(const Instance& inst, const PartialColouring& x, std::size_t k1s);

// Components of the hypergraph on the uncoloured vertices whose edges are the
// uncoloured parts of the edges x leaves unsatisfied. Sorted by least vertex.
std::vector<std::vector<Vertex>> residual_components(const Instance& inst, const PartialColouring& x);

struct Decision {
  Vertex vertex = 0;
  Colour colour = 0;
};

struct SamplerOutcome {
  FullColouring colouring;
  std::vector<Decision> path;
  std::vector<std::size_t> residual_sizes;
  bool failed = false;           // fallback colouring returned
  bool budget_exceeded = false;  // residual enumeration ran out of budget
};

struct SamplerOptions {
  bool oracle_marginals = false;
  MarginalOptions marginal;
  OracleOptions residual{24.0};
  std::uint64_t max_resamples = 1'000'000;
};

// Draws almost-uniform proper colourings. Marginal distributions are cached
// per (pinned instance, vertex), so repeated draws reuse earlier estimates.
class Sampler {
 public:
  Sampler(const Instance& inst, double eps, const AlgoParams& params, const SamplerOptions& opts = {});

  SamplerOutcome draw(Rng& rng);
  double residual_threshold() const noexcept { return threshold_; }
  std::size_t cache_size() const noexcept { return cache_.size(); }
  double lp_solve_ms() const noexcept { return lp_solve_ms_; }

 private:
  const std::vector<double>& distribution(const Instance& pinned, Vertex v);

  Instance inst_;
  double eps_;
  AlgoParams params_;
  SamplerOptions opts_;
  double threshold_;
  std::map<std::string, std::vector<double>> cache_;
  double lp_solve_ms_ = 0.0;
};

SamplerOutcome sample(const Instance& inst, double eps, const AlgoParams& params, Rng& rng,
                      const SamplerOptions& opts = {});

}  // namespace chromatic
