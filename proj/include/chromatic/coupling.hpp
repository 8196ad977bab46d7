#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"
#include "chromatic/oracle.hpp"

namespace chromatic {

// One configuration of the two-sided coupling process. V2 is the complement of V1.
struct CouplingState {
  PartialColouring x;
  PartialColouring y;
  std::vector<std::uint8_t> coloured;  // V_col membership per vertex
  std::vector<std::uint8_t> in_v1;     // V1 membership per vertex
  std::vector<std::uint8_t> live;      // per edge
  std::size_t num_coloured = 0;
  Vertex root = 0;

  bool operator==(const CouplingState&) const = default;
};

CouplingState initial_state(const Instance& inst, Vertex v, Colour c1, Colour c2);

// First uncoloured V2 vertex of the first live edge that meets V1 and still
// has an uncoloured V2 vertex; empty when the process has halted.
std::optional<Vertex> next_vertex(const Instance& inst, const CouplingState& s);

void extend_in_place(const Instance& inst, CouplingState& s, Vertex u, Colour cx, Colour cy, std::size_t k2);
CouplingState extend(const Instance& inst, const CouplingState& s, Vertex u, Colour cx, Colour cy, std::size_t k2);

// Edge ordinals blocked by (x, y): a discrepancy inside the edge, or exactly
// k2 coloured vertices while unsatisfied by x or by y. With k2 = 0 the second
// condition is disabled along with the k2 rule.
std::vector<std::uint32_t> blocked_edges(const Instance& inst, const CouplingState& s, std::size_t k2);

// Empty string when every state invariant holds, else a description.
std::string state_violation(const Instance& inst, const CouplingState& s, std::size_t k2);

// Colourings of the V1 blanks compatible with x and with y. Both are zero
// when the blanks outside V1 have no proper completion, so nx / ny always
// equals |C_x| / |C_y| whenever either side is nonempty.
struct LeafCounts {
  BigInt nx;
  BigInt ny;
};

LeafCounts leaf_counts(const Instance& inst, const CouplingState& s, double budget_bits = 24.0);
Rational leaf_ratio(const Instance& inst, const CouplingState& s, double budget_bits = 24.0);

// Row-major q x q joint law: overlap on the diagonal, residual mass paired in
// increasing colour order on both sides.
std::vector<Rational> maximal_coupling(const std::vector<Rational>& px, const std::vector<Rational>& py);

struct CouplingStep {
  Vertex vertex;
  Colour cx;
  Colour cy;
  bool operator==(const CouplingStep&) const = default;
};

struct CouplingRun {
  CouplingState state;
  std::vector<CouplingStep> trace;
};

// Randomised coupling driven by exact conditional marginals. Conditional laws
// are memoised, so repeated runs on one instance stay cheap.
class CouplingSimulator {
 public:
  CouplingSimulator(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k1, std::size_t k2,
                    const OracleOptions& opts = {});

  CouplingRun run(Rng& rng);
  const Instance& instance() const noexcept { return inst_; }

 private:
  const std::vector<double>& cumulative_joint(const CouplingState& s, Vertex u);

  Instance inst_;
  Vertex v_;
  Colour c1_, c2_;
  std::size_t k2_;
  OracleOptions opts_;
  std::map<std::vector<Colour>, std::vector<double>> joints_;
};

CouplingRun run_coupling(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k1, std::size_t k2,
                         Rng& rng, const OracleOptions& opts = {});

enum class NodeStatus : std::uint8_t { Internal, Halted, Truncated };

inline constexpr std::uint32_t kNoNode = UINT32_MAX;

struct TreeNode {
  std::uint32_t parent = kNoNode;
  std::uint32_t first_child = kNoNode;  // children are contiguous, index cx * q + cy
  std::uint32_t leaf = kNoNode;         // index into leaf counts for halted nodes
  std::uint32_t depth = 0;              // |V_col| - 1
  Vertex vertex = 0;                    // vertex coloured on entry to this node
  Vertex next = 0;                      // vertex coloured by the children
  Colour cx = kBlank;
  Colour cy = kBlank;
  NodeStatus status = NodeStatus::Internal;
};

struct TreeOptions {
  std::uint64_t node_budget = 0;  // 0 selects the environment/default cap
  double leaf_budget_bits = 24.0;
};

// Node cap from CHROMATIC_LLL_NODE_BUDGET, default 5e6.
std::uint64_t default_node_budget();

class CouplingTree {
 public:
  const Instance& instance() const noexcept { return inst_; }
  Vertex root_vertex() const noexcept { return v_; }
  Colour c1() const noexcept { return c1_; }
  Colour c2() const noexcept { return c2_; }
  std::size_t k1() const noexcept { return k1_; }
  std::size_t k2() const noexcept { return k2_; }
  std::size_t depth_bound() const noexcept { return L_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& node(std::uint32_t i) const { return nodes_.at(i); }
  std::uint32_t child(std::uint32_t i, Colour cx, Colour cy) const;
  const LeafCounts& counts(std::uint32_t i) const;

  std::size_t internal_count() const noexcept { return internal_; }
  std::size_t halted_count() const noexcept { return halted_; }
  std::size_t truncated_count() const noexcept { return truncated_; }

  // Rebuilds the full coupling state by replaying the path from the root.
  CouplingState state_at(std::uint32_t i) const;

 private:
  friend CouplingTree build_tree(const Instance&, Vertex, Colour, Colour, std::size_t, std::size_t, std::size_t,
                                 const TreeOptions&);
  Instance inst_;
  Vertex v_ = 0;
  Colour c1_ = 0, c2_ = 0;
  std::size_t k1_ = 0, k2_ = 0, L_ = 1;
  std::vector<TreeNode> nodes_;
  std::vector<LeafCounts> leaves_;
  std::size_t internal_ = 0, halted_ = 0, truncated_ = 0;
};

CouplingTree build_tree(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k1, std::size_t k2,
                        std::size_t L, const TreeOptions& opts = {});

}  // namespace chromatic
