#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"

namespace chromatic {

struct OracleOptions {
  // Upper bound on log2 of the number of assignments the enumeration may visit.
  double budget_bits = 20.0;
};

struct ExactResult {
  BigInt count;
  std::optional<std::vector<std::vector<Rational>>> marginals;  // [vertex][colour]
};

// Number of proper colourings agreeing with `partial` on its coloured vertices.
BigInt count_extensions(const Instance& inst, const PartialColouring& partial,
                        const OracleOptions& opts = {});

// Lexicographically first proper colouring extending `partial`, found by
// backtracking; throws BudgetExceeded after `step_budget` search nodes.
std::optional<FullColouring> find_extension(const Instance& inst, const PartialColouring& partial,
                                            std::uint64_t step_budget = std::uint64_t{1} << 26);

BigInt exact_count(const Instance& inst, const OracleOptions& opts = {});
ExactResult exact_solve(const Instance& inst, bool with_marginals, const OracleOptions& opts = {});
Rational exact_marginal(const Instance& inst, Vertex v, Colour c, const OracleOptions& opts = {});
Rational exact_ratio(const Instance& inst, Vertex v, Colour c1, Colour c2,
                     const OracleOptions& opts = {});

// Distribution of the colour of v under the uniform measure on proper
// colourings extending `partial`.
std::vector<Rational> conditional_marginal(const Instance& inst, const PartialColouring& partial,
                                           Vertex v, const OracleOptions& opts = {});

// Uniform sampler over proper colourings consistent with a partial colouring.
// Solutions are listed in lexicographic vertex order, so a seed fixes the draw.
class ExactSampler {
 public:
  explicit ExactSampler(const Instance& inst, const OracleOptions& opts = {});
  ExactSampler(const Instance& inst, const PartialColouring& partial, const OracleOptions& opts = {});

  const BigInt& count() const noexcept { return count_; }
  FullColouring draw(Rng& rng) const;

 private:
  int q_ = 0;
  PartialColouring base_;
  std::vector<Vertex> enumerated_;     // vertices stored per solution
  std::vector<Vertex> free_isolated_;  // drawn independently
  std::vector<Colour> solutions_;      // flattened, enumerated_.size() per row
  std::size_t rows_ = 0;
  BigInt count_;
};

FullColouring exact_sample(const Instance& inst, Rng& rng, const OracleOptions& opts = {});

}  // namespace chromatic
