#include "chromatic/counter.hpp"

#include <cmath>

#include "chromatic/lll.hpp"

namespace chromatic {

PinnedSequence pinned_sequence(const Instance& inst, const FullColouring& sigma, std::size_t k1c) {
  if (!is_full_colouring(inst, sigma)) fail(ErrorKind::InvalidArgument, "sigma must colour every vertex");
  PinnedSequence out;
  Instance current = inst;
  Vertex next = 0;
  while (current.num_edges() > 0) {
    while (current.incident(next).empty()) ++next;
    out.steps.push_back({current, next, sigma[next]});
    current = pin_vertex(current, next, sigma[next]);
    for (const auto& e : current.edges()) {
      if (e.vertices.size() < k1c) {
        fail(ErrorKind::InvalidArgument, "an edge drops below k1c uncoloured vertices; sigma is not prefix-proper");
      }
    }
  }
  out.free_vertices = inst.num_vertices() - out.steps.size();
  return out;
}

CountEstimate count(const Instance& inst, double eps, const AlgoParams& params, Rng& rng, const CountOptions& opts) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  CountEstimate out;
  out.eps = eps;
  const auto base = good_base_colouring(inst, params.k1, rng, opts.max_resamples);
  out.base_colouring = base.colouring;
  out.resamples = base.resamples;
  const PinnedSequence seq = pinned_sequence(inst, base.colouring, params.k1);
  out.free_vertices = seq.free_vertices;
  const double q = static_cast<double>(inst.num_colours());
  const double step_eps = eps / static_cast<double>(std::max<std::size_t>(inst.num_vertices(), 1));
  double log_sum = 0.0;
  Rational product(1);
  for (const PinStep& step : seq.steps) {
    StepEstimate est{step.vertex, step.colour, 0.0, 0, 0};
    if (opts.oracle_marginals) {
      const Rational p = exact_marginal(step.instance, step.vertex, step.colour, opts.oracle);
      if (p == 0) fail(ErrorKind::ZeroDenominator, "base colouring has zero marginal at a step");
      product *= p;
      est.p_hat = to_double(p);
    } else {
      const auto m = estimate_marginal(step.instance, step.vertex, step.colour, step_eps, params, opts.marginal);
      est.p_hat = m.p_hat;
      est.tree_nodes = m.tree_nodes;
      est.lp_constraints = m.lp_constraints;
      out.lp_solve_ms += m.lp_solve_ms;
    }
    log_sum += std::log(est.p_hat);
    out.per_step.push_back(est);
  }
  if (opts.oracle_marginals) {
    Rational z = Rational(1) / product;
    for (std::size_t i = 0; i < seq.free_vertices; ++i) z *= inst.num_colours();
    out.exact = z;
    out.log_estimate = log_of(boost::multiprecision::numerator(z)) - log_of(boost::multiprecision::denominator(z));
  } else {
    out.log_estimate = -log_sum + static_cast<double>(seq.free_vertices) * std::log(q);
  }
  return out;
}

}  // namespace chromatic
