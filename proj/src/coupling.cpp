#include "chromatic/coupling.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace chromatic {

namespace {

bool has_uncoloured_v2(const Edge& e, const CouplingState& s) {
  return std::any_of(e.vertices.begin(), e.vertices.end(),
                     [&](Vertex w) { return !s.in_v1[w] && !s.coloured[w]; });
}

bool meets_v1(const Edge& e, const CouplingState& s) {
  return std::any_of(e.vertices.begin(), e.vertices.end(), [&](Vertex w) { return s.in_v1[w] != 0; });
}

bool meets_v2(const Edge& e, const CouplingState& s) {
  return std::any_of(e.vertices.begin(), e.vertices.end(), [&](Vertex w) { return s.in_v1[w] == 0; });
}

std::size_t coloured_in(const Edge& e, const CouplingState& s) {
  return static_cast<std::size_t>(
      std::count_if(e.vertices.begin(), e.vertices.end(), [&](Vertex w) { return s.coloured[w] != 0; }));
}

void check_colour(const Instance& inst, Colour c) {
  if (c < 0 || c >= inst.num_colours()) fail(ErrorKind::InvalidArgument, "colour out of range");
}

// Colours u and runs the edge bookkeeping; u must be the designated vertex.
void apply_colouring(const Instance& inst, CouplingState& s, Vertex u, Colour cx, Colour cy, std::size_t k2) {
  s.x[u] = cx;
  s.y[u] = cy;
  s.coloured[u] = 1;
  ++s.num_coloured;
  if (cx != cy) s.in_v1[u] = 1;
  for (auto e : inst.incident(u)) {
    if (s.live[e] && edge_satisfied(inst.edge(e), s.x) && edge_satisfied(inst.edge(e), s.y)) s.live[e] = 0;
  }
  for (auto e : inst.incident(u)) {
    if (!s.live[e]) continue;
    const auto& edge = inst.edge(e);
    if (meets_v1(edge, s) && meets_v2(edge, s) && coloured_in(edge, s) == k2) {
      for (Vertex w : edge.vertices) {
        if (!s.coloured[w]) s.in_v1[w] = 1;
      }
      s.live[e] = 0;
    }
  }
}

}  // namespace

CouplingState initial_state(const Instance& inst, Vertex v, Colour c1, Colour c2) {
  if (v >= inst.num_vertices()) fail(ErrorKind::InvalidArgument, "root vertex out of range");
  check_colour(inst, c1);
  check_colour(inst, c2);
  if (c1 == c2) fail(ErrorKind::InvalidArgument, "root colours must differ");
  const std::size_t n = inst.num_vertices();
  CouplingState s;
  s.x.assign(n, kBlank);
  s.y.assign(n, kBlank);
  s.coloured.assign(n, 0);
  s.in_v1.assign(n, 0);
  s.live.assign(inst.num_edges(), 1);
  s.root = v;
  s.x[v] = c1;
  s.y[v] = c2;
  s.coloured[v] = 1;
  s.in_v1[v] = 1;
  s.num_coloured = 1;
  return s;
}

std::optional<Vertex> next_vertex(const Instance& inst, const CouplingState& s) {
  for (std::uint32_t e = 0; e < inst.num_edges(); ++e) {
    if (!s.live[e]) continue;
    const auto& edge = inst.edge(e);
    if (!meets_v1(edge, s) || !has_uncoloured_v2(edge, s)) continue;
    for (Vertex w : edge.vertices) {
      if (!s.in_v1[w] && !s.coloured[w]) return w;
    }
  }
  return std::nullopt;
}

void extend_in_place(const Instance& inst, CouplingState& s, Vertex u, Colour cx, Colour cy, std::size_t k2) {
  check_colour(inst, cx);
  check_colour(inst, cy);
  const auto expected = next_vertex(inst, s);
  if (!expected || *expected != u) fail(ErrorKind::InvalidArgument, "extend: vertex is not the designated next vertex");
  apply_colouring(inst, s, u, cx, cy, k2);
}

CouplingState extend(const Instance& inst, const CouplingState& s, Vertex u, Colour cx, Colour cy, std::size_t k2) {
  CouplingState out = s;
  extend_in_place(inst, out, u, cx, cy, k2);
  return out;
}

std::vector<std::uint32_t> blocked_edges(const Instance& inst, const CouplingState& s, std::size_t k2) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t e = 0; e < inst.num_edges(); ++e) {
    const auto& edge = inst.edge(e);
    const bool discrepancy = std::any_of(edge.vertices.begin(), edge.vertices.end(), [&](Vertex w) {
      return s.coloured[w] && s.x[w] != s.y[w];
    });
    const bool stalled = k2 > 0 && coloured_in(edge, s) == k2 &&
                         !(edge_satisfied(edge, s.x) && edge_satisfied(edge, s.y));
    if (discrepancy || stalled) out.push_back(e);
  }
  return out;
}

std::string state_violation(const Instance& inst, const CouplingState& s, std::size_t k2) {
  const std::size_t n = inst.num_vertices();
  if (!s.in_v1[s.root] || !s.coloured[s.root]) return "root must be coloured and in V1";
  std::size_t coloured = 0;
  for (Vertex u = 0; u < n; ++u) {
    const bool col = s.coloured[u] != 0;
    if (col != (s.x[u] != kBlank) || col != (s.y[u] != kBlank)) return "coloured set disagrees with x/y";
    if (!col) continue;
    ++coloured;
    if (s.in_v1[u] && s.x[u] == s.y[u]) return "coloured V1 vertex without discrepancy";
    if (!s.in_v1[u] && s.x[u] != s.y[u]) return "x and y differ on a V2 vertex";
    if (!s.in_v1[u]) {
      bool touches_v1 = false;
      for (auto e : inst.incident(u)) touches_v1 = touches_v1 || meets_v1(inst.edge(e), s);
      if (!touches_v1) return "coloured vertex not adjacent to V1";
    }
  }
  if (coloured != s.num_coloured) return "coloured count mismatch";
  for (std::uint32_t e = 0; e < inst.num_edges(); ++e) {
    if (s.live[e]) continue;
    const auto& edge = inst.edge(e);
    const bool satisfied = edge_satisfied(edge, s.x) && edge_satisfied(edge, s.y);
    if (!satisfied && coloured_in(edge, s) != k2) return "edge removed without cause";
  }
  return {};
}

LeafCounts leaf_counts(const Instance& inst, const CouplingState& s, double budget_bits) {
  const std::size_t n = inst.num_vertices();
  std::vector<std::int64_t> index(n, -1);
  std::size_t kept = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (s.in_v1[u] || s.coloured[u]) index[u] = static_cast<std::int64_t>(kept++);
  }
  std::vector<Edge> edges;
  for (const auto& e : inst.edges()) {
    if (!std::all_of(e.vertices.begin(), e.vertices.end(), [&](Vertex w) { return index[w] >= 0; })) continue;
    Edge mapped{{}, e.pinned};
    for (Vertex w : e.vertices) mapped.vertices.push_back(static_cast<Vertex>(index[w]));
    edges.push_back(std::move(mapped));
  }
  const Instance local(kept, inst.num_colours(), std::move(edges));
  PartialColouring px(kept, kBlank), py(kept, kBlank);
  for (Vertex u = 0; u < n; ++u) {
    if (index[u] < 0) continue;
    px[static_cast<std::size_t>(index[u])] = s.x[u];
    py[static_cast<std::size_t>(index[u])] = s.y[u];
  }
  const OracleOptions opts{budget_bits};
  LeafCounts out{count_extensions(local, px, opts), count_extensions(local, py, opts)};
  if (out.nx == 0 && out.ny == 0) return out;
  // Blanks outside V1 only meet edges inside V2, on which x and y agree. When
  // they admit no completion both sides are empty.
  std::vector<std::int64_t> outer(n, -1);
  std::size_t outer_size = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (!s.in_v1[u]) outer[u] = static_cast<std::int64_t>(outer_size++);
  }
  std::vector<Edge> outer_edges;
  for (const auto& e : inst.edges()) {
    if (!std::all_of(e.vertices.begin(), e.vertices.end(), [&](Vertex w) { return outer[w] >= 0; })) continue;
    Edge mapped{{}, e.pinned};
    for (Vertex w : e.vertices) mapped.vertices.push_back(static_cast<Vertex>(outer[w]));
    outer_edges.push_back(std::move(mapped));
  }
  PartialColouring common(outer_size, kBlank);
  for (Vertex u = 0; u < n; ++u) {
    if (outer[u] >= 0) common[static_cast<std::size_t>(outer[u])] = s.x[u];
  }
  if (!find_extension(Instance(outer_size, inst.num_colours(), std::move(outer_edges)), common)) {
    out.nx = 0;
    out.ny = 0;
  }
  return out;
}

Rational leaf_ratio(const Instance& inst, const CouplingState& s, double budget_bits) {
  if (next_vertex(inst, s)) fail(ErrorKind::InvalidArgument, "leaf_ratio needs a halted state");
  const auto counts = leaf_counts(inst, s, budget_bits);
  if (counts.ny == 0) fail(ErrorKind::ZeroDenominator, "y side of the leaf has no compatible colouring");
  return Rational(counts.nx, counts.ny);
}

std::vector<Rational> maximal_coupling(const std::vector<Rational>& px, const std::vector<Rational>& py) {
  const std::size_t q = px.size();
  if (py.size() != q) fail(ErrorKind::InvalidArgument, "marginals of different lengths");
  std::vector<Rational> joint(q * q, Rational(0));
  std::vector<Rational> rx(q), ry(q);
  for (std::size_t c = 0; c < q; ++c) {
    const Rational overlap = std::min(px[c], py[c]);
    joint[c * q + c] = overlap;
    rx[c] = px[c] - overlap;
    ry[c] = py[c] - overlap;
  }
  std::size_t i = 0, j = 0;
  while (i < q && j < q) {
    if (rx[i] == 0) {
      ++i;
    } else if (ry[j] == 0) {
      ++j;
    } else {
      const Rational m = std::min(rx[i], ry[j]);
      joint[i * q + j] += m;
      rx[i] -= m;
      ry[j] -= m;
    }
  }
  return joint;
}

CouplingSimulator::CouplingSimulator(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k1,
                                     std::size_t k2, const OracleOptions& opts)
    : inst_(inst), v_(v), c1_(c1), c2_(c2), k2_(k2), opts_(opts) {
  if (k2 >= k1) fail(ErrorKind::InvalidArgument, "coupling needs k2 < k1");
  if (inst.num_edges() > 0 && k1 > inst.min_edge_size()) fail(ErrorKind::InvalidArgument, "coupling needs k1 <= k_min");
  initial_state(inst_, v_, c1_, c2_);
}

const std::vector<double>& CouplingSimulator::cumulative_joint(const CouplingState& s, Vertex u) {
  std::vector<Colour> key = s.x;
  key.insert(key.end(), s.y.begin(), s.y.end());
  if (auto it = joints_.find(key); it != joints_.end()) return it->second;
  const auto px = conditional_marginal(inst_, s.x, u, opts_);
  const auto py = conditional_marginal(inst_, s.y, u, opts_);
  const auto joint = maximal_coupling(px, py);
  std::vector<double> cumulative(joint.size());
  double running = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    running += to_double(joint[i]);
    cumulative[i] = running;
  }
  return joints_.emplace(std::move(key), std::move(cumulative)).first->second;
}

CouplingRun CouplingSimulator::run(Rng& rng) {
  const auto q = static_cast<std::size_t>(inst_.num_colours());
  CouplingRun out{initial_state(inst_, v_, c1_, c2_), {}};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (auto u = next_vertex(inst_, out.state)) {
    const auto& cumulative = cumulative_joint(out.state, *u);
    const double draw = unit(rng) * cumulative.back();
    std::size_t pick = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), draw) - cumulative.begin());
    if (pick >= cumulative.size()) {
      // Rounding pushed the draw past the total; take the last entry with mass.
      pick = cumulative.size() - 1;
      while (pick > 0 && cumulative[pick] == cumulative[pick - 1]) --pick;
    }
    const auto cx = static_cast<Colour>(pick / q);
    const auto cy = static_cast<Colour>(pick % q);
    apply_colouring(inst_, out.state, *u, cx, cy, k2_);
    out.trace.push_back({*u, cx, cy});
  }
  return out;
}

CouplingRun run_coupling(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k1, std::size_t k2,
                         Rng& rng, const OracleOptions& opts) {
  CouplingSimulator sim(inst, v, c1, c2, k1, k2, opts);
  return sim.run(rng);
}

std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("CHROMATIC_LLL_NODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return 5'000'000;
}

std::uint32_t CouplingTree::child(std::uint32_t i, Colour cx, Colour cy) const {
  const auto& n = nodes_.at(i);
  if (n.status != NodeStatus::Internal) fail(ErrorKind::InvalidArgument, "leaf has no children");
  return n.first_child + static_cast<std::uint32_t>(cx * inst_.num_colours() + cy);
}

const LeafCounts& CouplingTree::counts(std::uint32_t i) const {
  const auto& n = nodes_.at(i);
  if (n.status != NodeStatus::Halted) fail(ErrorKind::InvalidArgument, "only halted leaves carry counts");
  return leaves_[n.leaf];
}

CouplingState CouplingTree::state_at(std::uint32_t i) const {
  std::vector<std::uint32_t> path;
  for (std::uint32_t cur = i; cur != 0; cur = nodes_.at(cur).parent) path.push_back(cur);
  CouplingState s = initial_state(inst_, v_, c1_, c2_);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const auto& n = nodes_[*it];
    apply_colouring(inst_, s, n.vertex, n.cx, n.cy, k2_);
  }
  return s;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Instance& inst, std::size_t k2, std::size_t L, std::uint64_t budget, double leaf_bits,
              std::vector<TreeNode>& nodes, std::vector<LeafCounts>& leaves)
      : inst_(inst), k2_(k2), L_(L), budget_(budget), leaf_bits_(leaf_bits), nodes_(nodes), leaves_(leaves) {}

  void expand(std::uint32_t idx, const CouplingState& s) {
    if (s.num_coloured >= L_) {
      nodes_[idx].status = NodeStatus::Truncated;
      return;
    }
    const auto u = next_vertex(inst_, s);
    if (!u) {
      nodes_[idx].status = NodeStatus::Halted;
      nodes_[idx].leaf = static_cast<std::uint32_t>(leaves_.size());
      leaves_.push_back(leaf_counts(inst_, s, leaf_bits_));
      return;
    }
    const auto q = inst_.num_colours();
    const std::size_t fan = static_cast<std::size_t>(q) * static_cast<std::size_t>(q);
    if (nodes_.size() + fan > budget_) {
      fail(ErrorKind::BudgetExceeded, "coupling tree exceeds the node budget of " + std::to_string(budget_));
    }
    const auto first = static_cast<std::uint32_t>(nodes_.size());
    nodes_[idx].status = NodeStatus::Internal;
    nodes_[idx].next = *u;
    nodes_[idx].first_child = first;
    const std::uint32_t depth = nodes_[idx].depth + 1;
    for (Colour cx = 0; cx < q; ++cx) {
      for (Colour cy = 0; cy < q; ++cy) {
        TreeNode child;
        child.parent = idx;
        child.depth = depth;
        child.vertex = *u;
        child.cx = cx;
        child.cy = cy;
        nodes_.push_back(child);
      }
    }
    for (std::uint32_t i = 0; i < fan; ++i) {
      CouplingState next = s;
      const auto& child = nodes_[first + i];
      apply_colouring(inst_, next, child.vertex, child.cx, child.cy, k2_);
      expand(first + i, next);
    }
  }

 private:
  const Instance& inst_;
  std::size_t k2_;
  std::size_t L_;
  std::uint64_t budget_;
  double leaf_bits_;
  std::vector<TreeNode>& nodes_;
  std::vector<LeafCounts>& leaves_;
};

}  // namespace

CouplingTree build_tree(const Instance& inst, Vertex v, Colour c1, Colour c2, std::size_t k1, std::size_t k2,
                        std::size_t L, const TreeOptions& opts) {
  if (L < 1) fail(ErrorKind::InvalidArgument, "depth bound must be at least 1");
  if (k2 >= k1) fail(ErrorKind::InvalidArgument, "tree needs k2 < k1");
  if (inst.num_edges() > 0 && k1 > inst.min_edge_size()) fail(ErrorKind::InvalidArgument, "tree needs k1 <= k_min");
  CouplingTree tree;
  tree.inst_ = inst;
  tree.v_ = v;
  tree.c1_ = c1;
  tree.c2_ = c2;
  tree.k1_ = k1;
  tree.k2_ = k2;
  tree.L_ = L;
  const CouplingState root = initial_state(inst, v, c1, c2);
  TreeNode root_node;
  root_node.vertex = v;
  root_node.cx = c1;
  root_node.cy = c2;
  tree.nodes_.push_back(root_node);
  const std::uint64_t budget = opts.node_budget ? opts.node_budget : default_node_budget();
  TreeBuilder builder(tree.inst_, k2, L, budget, opts.leaf_budget_bits, tree.nodes_, tree.leaves_);
  builder.expand(0, root);
  for (const auto& n : tree.nodes_) {
    switch (n.status) {
      case NodeStatus::Internal: ++tree.internal_; break;
      case NodeStatus::Halted: ++tree.halted_; break;
      case NodeStatus::Truncated: ++tree.truncated_; break;
    }
  }
  return tree;
}

}  // namespace chromatic
