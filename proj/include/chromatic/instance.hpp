#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace chromatic {

using Vertex = std::uint32_t;
using Colour = std::int32_t;
inline constexpr Colour kBlank = -1;

// Colour per vertex; kBlank marks an uncoloured vertex.
using PartialColouring = std::vector<Colour>;
// Colour per vertex with no blanks.
using FullColouring = std::vector<Colour>;

struct Edge {
  std::vector<Vertex> vertices;  // strictly ascending
  std::vector<Colour> pinned;    // strictly ascending, at most one colour once stored

  bool operator==(const Edge&) const = default;
};

// Hypergraph colouring instance with per-edge pinnings. Edges whose pinning
// already holds two colours are dropped on construction; the remaining edges
// keep their relative order.
class Instance {
 public:
  Instance() = default;
  Instance(std::size_t n, int q, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return n_; }
  int num_colours() const noexcept { return q_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  // Ordinals of the edges containing v, ascending.
  const std::vector<std::uint32_t>& incident(Vertex v) const { return incident_.at(v); }

  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t min_edge_size() const noexcept { return min_edge_; }
  std::size_t max_edge_size() const noexcept { return max_edge_; }
  bool is_uniform() const noexcept { return edges_.empty() || min_edge_ == max_edge_; }
  bool has_pinnings() const noexcept;

  bool operator==(const Instance& other) const {
    return n_ == other.n_ && q_ == other.q_ && edges_ == other.edges_;
  }

 private:
  std::size_t n_ = 0;
  int q_ = 2;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::size_t max_degree_ = 0;
  std::size_t min_edge_ = 0;
  std::size_t max_edge_ = 0;
};

Instance parse_instance(std::istream& in);
Instance parse_instance_string(const std::string& text);
Instance load_instance(const std::string& path);
std::string serialize(const Instance& inst);

bool is_proper(const Instance& inst, const FullColouring& sigma);
bool edge_satisfied(const Instance& inst, std::size_t e, const PartialColouring& x);
bool edge_satisfied(const Edge& edge, const PartialColouring& x);

Instance pin_vertex(const Instance& inst, Vertex v, Colour c);

// Every vertex coloured and every colour within [0, q).
bool is_full_colouring(const Instance& inst, const FullColouring& sigma);

}  // namespace chromatic
