#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/instance.hpp"

namespace chromatic::testing {

inline std::string fixture(const std::string& name) { return std::string(CHROMATIC_FIXTURE_DIR) + "/" + name; }

inline Instance make_instance(std::size_t n, int q, std::vector<std::vector<Vertex>> edges,
                              std::vector<std::vector<Colour>> pins = {}) {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Edge e;
    e.vertices = edges[i];
    if (i < pins.size()) e.pinned = pins[i];
    out.push_back(std::move(e));
  }
  return Instance(n, q, std::move(out));
}

// Random hypergraph: m edges of sizes in [k_lo, k_hi] drawn from n vertices,
// each edge pinned to one random colour with probability pin_percent/100.
inline Instance random_instance(Rng& rng, std::size_t n, int q, std::size_t m, std::size_t k_lo, std::size_t k_hi,
                                int pin_percent = 0) {
  std::vector<Edge> edges;
  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(k_lo, k_hi)(rng);
    std::shuffle(pool.begin(), pool.end(), rng);
    Edge e;
    e.vertices.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)));
    if (std::uniform_int_distribution<int>(0, 99)(rng) < pin_percent) {
      e.pinned.push_back(std::uniform_int_distribution<Colour>(0, q - 1)(rng));
    }
    edges.push_back(std::move(e));
  }
  return Instance(n, q, std::move(edges));
}

// Visits all q^n assignments in lexicographic order; independent of the oracle.
template <class Visit>
void for_each_assignment(std::size_t n, int q, Visit&& visit) {
  FullColouring sigma(n, 0);
  for (;;) {
    visit(static_cast<const FullColouring&>(sigma));
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++sigma[i] < q) break;
      sigma[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

inline BigInt brute_count(const Instance& inst, const PartialColouring* partial = nullptr) {
  BigInt count = 0;
  for_each_assignment(inst.num_vertices(), inst.num_colours(), [&](const FullColouring& s) {
    if (partial) {
      for (Vertex v = 0; v < s.size(); ++v) {
        if ((*partial)[v] != kBlank && (*partial)[v] != s[v]) return;
      }
    }
    if (is_proper(inst, s)) ++count;
  });
  return count;
}

inline Rational brute_marginal(const Instance& inst, Vertex v, Colour c) {
  PartialColouring p(inst.num_vertices(), kBlank);
  p[v] = c;
  return Rational(brute_count(inst, &p), brute_count(inst));
}

}  // namespace chromatic::testing
