#include "chromatic/oracle.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace chromatic {

namespace {

// Backtracking over the vertices that lie in at least one edge, in ascending
// order. Each edge is checked once its largest vertex has been assigned.
class Enumeration {
 public:
  Enumeration(const Instance& inst, const PartialColouring& partial, const OracleOptions& opts,
              bool enforce_budget = true)
      : inst_(inst), q_(inst.num_colours()), current_(partial) {
    if (partial.size() != inst.num_vertices()) {
      fail(ErrorKind::InvalidArgument, "partial colouring size mismatch");
    }
    std::vector<std::int64_t> position(inst.num_vertices(), -1);
    std::size_t free_constrained = 0;
    for (Vertex v = 0; v < inst.num_vertices(); ++v) {
      const Colour c = partial[v];
      if (c != kBlank && (c < 0 || c >= q_)) fail(ErrorKind::InvalidArgument, "colour out of range");
      if (inst.incident(v).empty()) {
        if (c == kBlank) free_isolated_.push_back(v);
        continue;
      }
      position[v] = static_cast<std::int64_t>(order_.size());
      order_.push_back(v);
      if (c == kBlank) ++free_constrained;
    }
    const double bits = static_cast<double>(free_constrained) * std::log2(static_cast<double>(q_));
    if (enforce_budget && (bits > opts.budget_bits || bits > 62.0)) {
      fail(ErrorKind::BudgetExceeded, "enumeration needs 2^" + std::to_string(bits) +
                                          " assignments, budget is 2^" + std::to_string(opts.budget_bits));
    }
    closing_.assign(order_.size(), {});
    for (std::uint32_t e = 0; e < inst.num_edges(); ++e) {
      const auto& vs = inst.edge(e).vertices;
      if (vs.empty()) {
        if (!edge_satisfied(inst.edge(e), current_)) dead_ = true;
        continue;
      }
      closing_[static_cast<std::size_t>(position[vs.back()])].push_back(e);
    }
  }

  const std::vector<Vertex>& order() const noexcept { return order_; }
  const std::vector<Vertex>& free_isolated() const noexcept { return free_isolated_; }

  std::uint64_t count() { return dead_ ? 0 : count_from(0); }

  // First completion in lexicographic order, or empty when none exists.
  std::optional<PartialColouring> first(std::uint64_t step_budget) {
    if (dead_) return std::nullopt;
    steps_left_ = step_budget;
    if (!first_from(0)) return std::nullopt;
    return current_;
  }

  template <class Visit>
  void for_each(Visit&& visit) {
    if (!dead_) visit_from(0, visit);
  }

 private:
  bool closes_cleanly(std::size_t pos) const {
    for (auto e : closing_[pos]) {
      if (!edge_satisfied(inst_.edge(e), current_)) return false;
    }
    return true;
  }

  std::uint64_t count_from(std::size_t pos) {
    if (pos == order_.size()) return 1;
    const Vertex v = order_[pos];
    const Colour fixed = current_[v];
    std::uint64_t total = 0;
    const Colour lo = fixed == kBlank ? 0 : fixed;
    const Colour hi = fixed == kBlank ? q_ : fixed + 1;
    for (Colour c = lo; c < hi; ++c) {
      current_[v] = c;
      if (closes_cleanly(pos)) total += count_from(pos + 1);
    }
    current_[v] = fixed;
    return total;
  }

  bool first_from(std::size_t pos) {
    if (pos == order_.size()) return true;
    if (steps_left_-- == 0) fail(ErrorKind::BudgetExceeded, "search step budget exhausted");
    const Vertex v = order_[pos];
    const Colour fixed = current_[v];
    const Colour lo = fixed == kBlank ? 0 : fixed;
    const Colour hi = fixed == kBlank ? q_ : fixed + 1;
    for (Colour c = lo; c < hi; ++c) {
      current_[v] = c;
      if (closes_cleanly(pos) && first_from(pos + 1)) return true;
    }
    current_[v] = fixed;
    return false;
  }

  template <class Visit>
  void visit_from(std::size_t pos, Visit& visit) {
    if (pos == order_.size()) {
      visit(static_cast<const PartialColouring&>(current_));
      return;
    }
    const Vertex v = order_[pos];
    const Colour fixed = current_[v];
    const Colour lo = fixed == kBlank ? 0 : fixed;
    const Colour hi = fixed == kBlank ? q_ : fixed + 1;
    for (Colour c = lo; c < hi; ++c) {
      current_[v] = c;
      if (closes_cleanly(pos)) visit_from(pos + 1, visit);
    }
    current_[v] = fixed;
  }

  const Instance& inst_;
  int q_;
  PartialColouring current_;
  std::vector<Vertex> order_;
  std::vector<Vertex> free_isolated_;
  std::vector<std::vector<std::uint32_t>> closing_;
  bool dead_ = false;
  std::uint64_t steps_left_ = 0;
};

BigInt power(int base, std::size_t exponent) {
  BigInt result = 1;
  for (std::size_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

void require_vertex(const Instance& inst, Vertex v) {
  if (v >= inst.num_vertices()) fail(ErrorKind::InvalidArgument, "vertex out of range");
}

void require_colour(const Instance& inst, Colour c) {
  if (c < 0 || c >= inst.num_colours()) fail(ErrorKind::InvalidArgument, "colour out of range");
}

}  // namespace

BigInt count_extensions(const Instance& inst, const PartialColouring& partial, const OracleOptions& opts) {
  Enumeration en(inst, partial, opts);
  const std::uint64_t constrained = en.count();
  return BigInt(constrained) * power(inst.num_colours(), en.free_isolated().size());
}

std::optional<FullColouring> find_extension(const Instance& inst, const PartialColouring& partial,
                                            std::uint64_t step_budget) {
  Enumeration en(inst, partial, OracleOptions{}, false);
  auto found = en.first(step_budget);
  if (!found) return std::nullopt;
  for (Vertex v : en.free_isolated()) (*found)[v] = 0;
  return found;
}

BigInt exact_count(const Instance& inst, const OracleOptions& opts) {
  return count_extensions(inst, PartialColouring(inst.num_vertices(), kBlank), opts);
}

ExactResult exact_solve(const Instance& inst, bool with_marginals, const OracleOptions& opts) {
  const int q = inst.num_colours();
  Enumeration en(inst, PartialColouring(inst.num_vertices(), kBlank), opts);
  ExactResult result;
  if (!with_marginals) {
    result.count = BigInt(en.count()) * power(q, en.free_isolated().size());
    return result;
  }
  std::vector<std::vector<std::uint64_t>> tally(inst.num_vertices(), std::vector<std::uint64_t>(q, 0));
  std::uint64_t solutions = 0;
  en.for_each([&](const PartialColouring& sigma) {
    ++solutions;
    for (Vertex v : en.order()) ++tally[v][sigma[v]];
  });
  result.count = BigInt(solutions) * power(q, en.free_isolated().size());
  if (solutions == 0) return result;
  std::vector<std::vector<Rational>> table(inst.num_vertices(), std::vector<Rational>(q));
  for (Vertex v = 0; v < inst.num_vertices(); ++v) {
    for (Colour c = 0; c < q; ++c) {
      table[v][c] = inst.incident(v).empty() ? Rational(1, q) : Rational(tally[v][c], solutions);
    }
  }
  result.marginals = std::move(table);
  return result;
}

Rational exact_marginal(const Instance& inst, Vertex v, Colour c, const OracleOptions& opts) {
  require_vertex(inst, v);
  require_colour(inst, c);
  const BigInt total = exact_count(inst, opts);
  if (total == 0) fail(ErrorKind::EmptySupport, "instance has no proper colouring");
  PartialColouring partial(inst.num_vertices(), kBlank);
  partial[v] = c;
  return Rational(count_extensions(inst, partial, opts), total);
}

Rational exact_ratio(const Instance& inst, Vertex v, Colour c1, Colour c2, const OracleOptions& opts) {
  require_vertex(inst, v);
  require_colour(inst, c1);
  require_colour(inst, c2);
  PartialColouring partial(inst.num_vertices(), kBlank);
  partial[v] = c2;
  const BigInt denominator = count_extensions(inst, partial, opts);
  if (denominator == 0) fail(ErrorKind::ZeroDenominator, "no proper colouring gives the vertex colour c2");
  partial[v] = c1;
  return Rational(count_extensions(inst, partial, opts), denominator);
}

std::vector<Rational> conditional_marginal(const Instance& inst, const PartialColouring& partial, Vertex v,
                                           const OracleOptions& opts) {
  require_vertex(inst, v);
  if (partial.size() != inst.num_vertices()) fail(ErrorKind::InvalidArgument, "partial colouring size mismatch");
  if (partial[v] != kBlank) fail(ErrorKind::InvalidArgument, "conditional_marginal: vertex already coloured");
  const int q = inst.num_colours();
  std::vector<BigInt> counts(q);
  BigInt total = 0;
  PartialColouring probe = partial;
  for (Colour c = 0; c < q; ++c) {
    probe[v] = c;
    counts[c] = count_extensions(inst, probe, opts);
    total += counts[c];
  }
  if (total == 0) fail(ErrorKind::EmptySupport, "partial colouring has no proper extension");
  std::vector<Rational> dist(q);
  for (Colour c = 0; c < q; ++c) dist[c] = Rational(counts[c], total);
  return dist;
}

ExactSampler::ExactSampler(const Instance& inst, const OracleOptions& opts)
    : ExactSampler(inst, PartialColouring(inst.num_vertices(), kBlank), opts) {}

ExactSampler::ExactSampler(const Instance& inst, const PartialColouring& partial, const OracleOptions& opts)
    : q_(inst.num_colours()), base_(partial) {
  Enumeration en(inst, partial, opts);
  enumerated_ = en.order();
  free_isolated_ = en.free_isolated();
  en.for_each([&](const PartialColouring& sigma) {
    for (Vertex v : enumerated_) solutions_.push_back(sigma[v]);
    ++rows_;
  });
  count_ = BigInt(rows_) * power(q_, free_isolated_.size());
}

FullColouring ExactSampler::draw(Rng& rng) const {
  if (rows_ == 0) fail(ErrorKind::EmptySupport, "no proper colouring to sample");
  FullColouring sigma = base_;
  const std::size_t row = std::uniform_int_distribution<std::size_t>(0, rows_ - 1)(rng);
  const std::size_t width = enumerated_.size();
  for (std::size_t i = 0; i < width; ++i) sigma[enumerated_[i]] = solutions_[row * width + i];
  std::uniform_int_distribution<Colour> colour(0, q_ - 1);
  for (Vertex v : free_isolated_) sigma[v] = colour(rng);
  return sigma;
}

FullColouring exact_sample(const Instance& inst, Rng& rng, const OracleOptions& opts) {
  return ExactSampler(inst, opts).draw(rng);
}

}  // namespace chromatic
