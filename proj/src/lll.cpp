#include "chromatic/lll.hpp"

#include <algorithm>
#include <cmath>

namespace chromatic {

bool lll_threshold_holds(int q, double t, std::size_t delta, std::size_t k_prime) {
  if (k_prime < 2) fail(ErrorKind::InvalidArgument, "k_prime must be at least 2");
  if (delta == 0) return true;
  if (t <= 0.0 || q < 1) return false;
  const long double log_threshold =
      (1.0L + std::log(static_cast<long double>(t)) + std::log(static_cast<long double>(delta))) /
      static_cast<long double>(k_prime - 1);
  return std::log(static_cast<long double>(q)) >= log_threshold + std::log1p(1e-12L);
}

bool check_lll(const Instance& inst, const LLLCheckConfig& cfg) {
  if (cfg.k_prime < 2) fail(ErrorKind::InvalidArgument, "k_prime must be at least 2");
  if (inst.num_edges() == 0) return true;
  if (cfg.t < static_cast<double>(inst.max_edge_size())) return false;
  if (cfg.k_prime > inst.min_edge_size()) return false;
  return lll_threshold_holds(inst.num_colours(), cfg.t, inst.max_degree(), cfg.k_prime);
}

MarginalBounds marginal_bounds(int q, const Rational& t) {
  if (q < 2) fail(ErrorKind::InvalidArgument, "marginal_bounds needs q >= 2");
  if (t <= 1) fail(ErrorKind::InvalidArgument, "marginal_bounds needs t > 1");
  return {(1 - 1 / t) / q, (1 + 4 / t) / q};
}

double max_lll_slack(const Instance& inst) {
  if (inst.num_edges() == 0 || inst.min_edge_size() < 2) return 0.0;
  const double k1 = static_cast<double>(inst.min_edge_size() - 1);
  return std::pow(static_cast<double>(inst.num_colours()), k1) /
         (std::exp(1.0) * static_cast<double>(inst.max_degree()));
}

std::vector<double> uniform_lll_weights(const Instance& inst, double t) {
  const double delta = static_cast<double>(std::max<std::size_t>(inst.max_degree(), 1));
  return std::vector<double>(inst.num_edges(), 1.0 / (t * delta));
}

bool lll_condition_holds(const Instance& inst, const std::vector<double>& weights) {
  if (weights.size() != inst.num_edges()) fail(ErrorKind::InvalidArgument, "one weight per edge required");
  const double q = inst.num_colours();
  std::vector<std::uint32_t> stamp(inst.num_edges(), UINT32_MAX);
  for (std::uint32_t e = 0; e < inst.num_edges(); ++e) {
    const auto& edge = inst.edge(e);
    const double size = static_cast<double>(edge.vertices.size());
    const double bad = edge.pinned.empty() ? std::pow(q, 1.0 - size) : std::pow(q, -size);
    double rhs = weights[e];
    stamp[e] = e;
    for (Vertex v : edge.vertices) {
      for (auto f : inst.incident(v)) {
        if (stamp[f] == e) continue;
        stamp[f] = e;
        rhs *= 1.0 - weights[f];
      }
    }
    if (bad > rhs) return false;
  }
  return true;
}

namespace {

void recolour(const std::vector<Vertex>& vertices, FullColouring& sigma, int q, Rng& rng) {
  std::uniform_int_distribution<Colour> colour(0, q - 1);
  for (Vertex v : vertices) sigma[v] = colour(rng);
}

}  // namespace

ResampleResult moser_tardos(const Instance& inst, Rng& rng, std::uint64_t max_resamples) {
  ResampleResult out;
  out.colouring.assign(inst.num_vertices(), 0);
  std::vector<Vertex> all(inst.num_vertices());
  for (Vertex v = 0; v < all.size(); ++v) all[v] = v;
  recolour(all, out.colouring, inst.num_colours(), rng);
  for (;;) {
    const auto& edges = inst.edges();
    const auto bad = std::find_if(edges.begin(), edges.end(),
                                  [&](const Edge& e) { return !edge_satisfied(e, out.colouring); });
    if (bad == edges.end()) break;
    if (out.resamples >= max_resamples) {
      fail(ErrorKind::ResampleLimit, "Moser-Tardos exceeded " + std::to_string(max_resamples) + " resamples");
    }
    ++out.resamples;
    recolour(bad->vertices, out.colouring, inst.num_colours(), rng);
  }
  if (!is_proper(inst, out.colouring)) fail(ErrorKind::NumericalFailure, "resampling returned an improper colouring");
  return out;
}

Instance truncate_edges(const Instance& inst, std::size_t keep) {
  std::vector<Edge> edges = inst.edges();
  for (auto& e : edges) {
    if (e.vertices.size() > keep) e.vertices.resize(keep);
  }
  return Instance(inst.num_vertices(), inst.num_colours(), std::move(edges));
}

bool is_prefix_proper(const Instance& inst, const FullColouring& sigma, std::size_t k1c) {
  for (const auto& e : inst.edges()) {
    if (e.vertices.size() < k1c) return false;
    Edge prefix{{e.vertices.begin(), e.vertices.end() - static_cast<std::ptrdiff_t>(k1c)}, e.pinned};
    if (!edge_satisfied(prefix, sigma)) return false;
  }
  return true;
}

ResampleResult good_base_colouring(const Instance& inst, std::size_t k1c, Rng& rng,
                                   std::uint64_t max_resamples) {
  if (!inst.is_uniform()) fail(ErrorKind::InvalidArgument, "base colouring needs a uniform hypergraph");
  const std::size_t k = inst.max_edge_size();
  if (inst.num_edges() > 0 && (k1c == 0 || k1c + 1 >= k)) {
    fail(ErrorKind::InvalidArgument, "base colouring needs 0 < k1c < k - 1");
  }
  if (inst.num_edges() == 0) return moser_tardos(inst, rng, max_resamples);
  auto out = moser_tardos(truncate_edges(inst, k - k1c), rng, max_resamples);
  if (!is_prefix_proper(inst, out.colouring, k1c) || !is_proper(inst, out.colouring)) {
    fail(ErrorKind::NumericalFailure, "base colouring violates the prefix property");
  }
  return out;
}

}  // namespace chromatic
