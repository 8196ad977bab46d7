#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"

namespace chromatic {

using Node = std::uint32_t;

class SimpleGraph {
 public:
  SimpleGraph() = default;
  // Self-loops and repeated pairs are dropped.
  SimpleGraph(std::size_t n, const std::vector<std::pair<Node, Node>>& pairs);

  std::size_t size() const noexcept { return adj_.size(); }
  const std::vector<Node>& neighbours(Node u) const { return adj_.at(u); }
  bool adjacent(Node u, Node v) const;
  std::size_t max_degree() const noexcept;

 private:
  std::vector<std::vector<Node>> adj_;
};

// Node i stands for edge i; two nodes are adjacent when the edges intersect.
SimpleGraph line_graph(const Instance& inst);

// Hop distances from `source`, -1 for nodes further than `max_depth`.
std::vector<int> bfs_distances(const SimpleGraph& g, Node source, int max_depth);

// Pairwise distances truncated at `max_depth`, -1 beyond.
class DistanceTable {
 public:
  DistanceTable(const SimpleGraph& g, int max_depth);
  int operator()(Node u, Node v) const { return rows_[u][v]; }
  int max_depth() const noexcept { return max_depth_; }

 private:
  int max_depth_;
  std::vector<std::vector<int>> rows_;
};

struct TwoThreeTree {
  std::vector<Node> nodes;  // ascending
  bool operator==(const TwoThreeTree&) const = default;
};

// Pairwise distance >= 2, and connected once pairs at distance 2 or 3 are joined.
bool is_23tree(const SimpleGraph& g, const std::vector<Node>& nodes);

// Connected in the graph joining pairs at distance <= 2.
bool connected_in_square(const SimpleGraph& g, const std::vector<Node>& nodes);

std::vector<TwoThreeTree> enumerate_23trees(const SimpleGraph& g, Node root, std::size_t size,
                                            std::uint64_t budget = 10'000'000);

// Connected induced subgraphs of the given size containing `root`.
std::uint64_t count_connected_subgraphs(const SimpleGraph& g, Node root, std::size_t size,
                                        std::uint64_t budget = 100'000'000);

TwoThreeTree greedy_23tree(const SimpleGraph& g, const std::vector<Node>& candidates, Node anchor,
                           std::size_t deg_bound);

bool is_ell_bad(const Instance& inst, const FullColouring& sigma, Vertex v, std::size_t ell,
                const Rational& beta, std::size_t k2, std::uint64_t budget = 10'000'000);

}  // namespace chromatic
