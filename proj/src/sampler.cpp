#include "chromatic/sampler.hpp"

#include <algorithm>
#include <numeric>

#include "chromatic/lll.hpp"

namespace chromatic {

namespace {

std::size_t uncoloured_in(const Edge& e, const PartialColouring& x) {
  return static_cast<std::size_t>(
      std::count_if(e.vertices.begin(), e.vertices.end(), [&](Vertex v) { return x[v] == kBlank; }));
}

// Child stream indices inside one draw.
constexpr std::uint64_t kResidualStream = 1ull << 40;
constexpr std::uint64_t kFallbackStream = 1ull << 41;

}  // namespace

std::optional<Vertex> eligible_vertex(const Instance& inst, const PartialColouring& x, std::size_t k1s) {
  if (x.size() != inst.num_vertices()) fail(ErrorKind::InvalidArgument, "partial colouring size mismatch");
  std::vector<std::uint8_t> surviving(inst.num_edges(), 0);
  bool any = false;
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    surviving[e] = !edge_satisfied(inst, e, x);
    any = any || surviving[e];
  }
  if (!any) return std::nullopt;
  for (Vertex v = 0; v < inst.num_vertices(); ++v) {
    if (x[v] != kBlank) continue;
    const auto& inc = inst.incident(v);
    const bool ok = std::all_of(inc.begin(), inc.end(), [&](std::uint32_t e) {
      return !surviving[e] || uncoloured_in(inst.edge(e), x) > k1s;
    });
    if (ok) return v;
  }
  return std::nullopt;
}

std::vector<std::vector<Vertex>> residual_components(const Instance& inst, const PartialColouring& x) {
  const std::size_t n = inst.num_vertices();
  if (x.size() != n) fail(ErrorKind::InvalidArgument, "partial colouring size mismatch");
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < inst.num_edges(); ++e) {
    if (edge_satisfied(inst, e, x)) continue;
    std::optional<Vertex> first;
    for (Vertex v : inst.edge(e).vertices) {
      if (x[v] != kBlank) continue;
      if (!first) {
        first = v;
      } else {
        const Vertex a = find(*first), b = find(v);
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Vertex>> out;
  std::vector<std::int64_t> slot(n, -1);
  for (Vertex v = 0; v < n; ++v) {
    if (x[v] != kBlank) continue;
    const Vertex r = find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int64_t>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[r])].push_back(v);
  }
  return out;
}

Sampler::Sampler(const Instance& inst, double eps, const AlgoParams& params, const SamplerOptions& opts)
    : inst_(inst), eps_(eps), params_(params), opts_(opts) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  if (!inst.is_uniform()) fail(ErrorKind::InvalidArgument, "sampler needs a uniform hypergraph");
  threshold_ = chromatic::residual_threshold(inst.max_edge_size(), inst.max_degree(), inst.num_vertices(), eps);
}

const std::vector<double>& Sampler::distribution(const Instance& pinned, Vertex v) {
  std::string key = serialize(pinned);
  key += "#" + std::to_string(v);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const int q = pinned.num_colours();
  std::vector<double> dist(static_cast<std::size_t>(q), 0.0);
  if (opts_.oracle_marginals) {
    for (Colour c = 0; c < q; ++c) dist[static_cast<std::size_t>(c)] = to_double(exact_marginal(pinned, v, c, opts_.residual));
  } else {
    const double step_eps = eps_ / (2.0 * static_cast<double>(std::max<std::size_t>(inst_.num_vertices(), 1)));
    for (Colour c = 0; c < q; ++c) {
      const auto m = estimate_marginal(pinned, v, c, step_eps, params_, opts_.marginal);
      dist[static_cast<std::size_t>(c)] = m.p_hat;
      lp_solve_ms_ += m.lp_solve_ms;
    }
  }
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  if (!(total > 0.0)) fail(ErrorKind::EmptySupport, "estimated marginal distribution is empty");
  for (auto& p : dist) p /= total;
  return cache_.emplace(std::move(key), std::move(dist)).first->second;
}

SamplerOutcome Sampler::draw(Rng& rng) {
  const std::uint64_t seed = rng();
  const std::size_t n = inst_.num_vertices();
  SamplerOutcome out;
  PartialColouring x(n, kBlank);
  Instance pinned = inst_;
  std::uint64_t index = 0;
  while (const auto v = eligible_vertex(inst_, x, params_.k1)) {
    const auto& dist = distribution(pinned, *v);
    Rng step = child_stream(seed, index++);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(step);
    double acc = 0.0;
    Colour chosen = static_cast<Colour>(dist.size()) - 1;
    for (std::size_t c = 0; c < dist.size(); ++c) {
      acc += dist[c];
      if (u < acc && dist[c] > 0.0) {
        chosen = static_cast<Colour>(c);
        break;
      }
    }
    while (dist[static_cast<std::size_t>(chosen)] == 0.0) --chosen;
    x[*v] = chosen;
    pinned = pin_vertex(pinned, *v, chosen);
    out.path.push_back({*v, chosen});
  }
  const auto components = residual_components(inst_, x);
  for (const auto& comp : components) out.residual_sizes.push_back(comp.size());
  const bool too_large = std::any_of(components.begin(), components.end(),
                                     [&](const auto& c) { return static_cast<double>(c.size()) >= threshold_; });
  auto fallback = [&] {
    Rng fb = child_stream(seed, kFallbackStream);
    out.colouring = moser_tardos(inst_, fb, opts_.max_resamples).colouring;
    out.failed = true;
  };
  if (too_large) {
    fallback();
    return out;
  }
  out.colouring = x;
  std::uint64_t comp_index = 0;
  for (const auto& comp : components) {
    // The pinned instance restricted to the component; its edges lie inside it.
    std::vector<std::int64_t> local(n, -1);
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<std::int64_t>(i);
    std::vector<Edge> edges;
    for (const auto& e : pinned.edges()) {
      if (e.vertices.empty() || local[e.vertices.front()] < 0) continue;
      Edge mapped{{}, e.pinned};
      for (Vertex w : e.vertices) mapped.vertices.push_back(static_cast<Vertex>(local[w]));
      edges.push_back(std::move(mapped));
    }
    const Instance sub(comp.size(), inst_.num_colours(), std::move(edges));
    Rng rr = child_stream(seed, kResidualStream + comp_index++);
    try {
      const ExactSampler exact(sub, opts_.residual);
      const FullColouring part = exact.draw(rr);
      for (std::size_t i = 0; i < comp.size(); ++i) out.colouring[comp[i]] = part[i];
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded && e.kind() != ErrorKind::EmptySupport) throw;
      out.budget_exceeded = e.kind() == ErrorKind::BudgetExceeded;
      fallback();
      return out;
    }
  }
  if (!is_proper(inst_, out.colouring)) fail(ErrorKind::NumericalFailure, "sampler produced an improper colouring");
  return out;
}

SamplerOutcome sample(const Instance& inst, double eps, const AlgoParams& params, Rng& rng,
                      const SamplerOptions& opts) {
  Sampler s(inst, eps, params, opts);
  return s.draw(rng);
}

}  // namespace chromatic
