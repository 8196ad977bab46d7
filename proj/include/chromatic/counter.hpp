#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"
#include "chromatic/lp.hpp"
#include "chromatic/oracle.hpp"
#include "chromatic/params.hpp"

namespace chromatic {

struct PinStep {
  Instance instance;  // before pinning `vertex`
  Vertex vertex;
  Colour colour;
};

struct PinnedSequence {
  std::vector<PinStep> steps;
  std::size_t free_vertices = 0;
};

// Pins, in global vertex order, the first vertex still in a surviving edge to
// its colour under sigma until no edge is left. Throws InvalidArgument when
// an edge would drop below k1c uncoloured vertices.
PinnedSequence pinned_sequence(const Instance& inst, const FullColouring& sigma, std::size_t k1c);

struct StepEstimate {
  Vertex vertex = 0;
  Colour colour = 0;
  double p_hat = 0.0;
  std::size_t tree_nodes = 0;
  std::size_t lp_constraints = 0;
};

struct CountEstimate {
  double log_estimate = 0.0;
  double eps = 0.0;
  std::vector<StepEstimate> per_step;
  std::size_t free_vertices = 0;
  FullColouring base_colouring;
  std::uint64_t resamples = 0;
  std::optional<Rational> exact;  // set in oracle-marginals mode
  double lp_solve_ms = 0.0;
};

struct CountOptions {
  bool oracle_marginals = false;
  MarginalOptions marginal;
  OracleOptions oracle{24.0};
  std::uint64_t max_resamples = 1'000'000;
};

// Self-reduction along a good base colouring: ln Z ~ -sum ln p_i + free ln q,
// each p_i estimated to accuracy eps / n.
CountEstimate count(const Instance& inst, double eps, const AlgoParams& params, Rng& rng,
                    const CountOptions& opts = {});

}  // namespace chromatic
