#include "chromatic/graphtools.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace chromatic {

SimpleGraph::SimpleGraph(std::size_t n, const std::vector<std::pair<Node, Node>>& pairs) : adj_(n) {
  for (auto [u, v] : pairs) {
    if (u >= n || v >= n) fail(ErrorKind::InvalidArgument, "graph node out of range");
    if (u == v) continue;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

bool SimpleGraph::adjacent(Node u, Node v) const {
  const auto& list = adj_.at(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::size_t SimpleGraph::max_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& list : adj_) d = std::max(d, list.size());
  return d;
}

SimpleGraph line_graph(const Instance& inst) {
  std::vector<std::pair<Node, Node>> pairs;
  for (Vertex v = 0; v < inst.num_vertices(); ++v) {
    const auto& inc = inst.incident(v);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      for (std::size_t j = i + 1; j < inc.size(); ++j) pairs.emplace_back(inc[i], inc[j]);
    }
  }
  return SimpleGraph(inst.num_edges(), pairs);
}

std::vector<int> bfs_distances(const SimpleGraph& g, Node source, int max_depth) {
  std::vector<int> dist(g.size(), -1);
  dist.at(source) = 0;
  std::deque<Node> queue{source};
  while (!queue.empty()) {
    const Node u = queue.front();
    queue.pop_front();
    if (dist[u] == max_depth) continue;
    for (Node w : g.neighbours(u)) {
      if (dist[w] != -1) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

DistanceTable::DistanceTable(const SimpleGraph& g, int max_depth) : max_depth_(max_depth) {
  rows_.reserve(g.size());
  for (Node u = 0; u < g.size(); ++u) rows_.push_back(bfs_distances(g, u, max_depth));
}

namespace {

bool connected_under(const std::vector<Node>& nodes, const auto& linked) {
  if (nodes.empty()) return true;
  std::vector<char> seen(nodes.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (seen[j] || !linked(nodes[i], nodes[j])) continue;
      seen[j] = 1;
      ++reached;
      stack.push_back(j);
    }
  }
  return reached == nodes.size();
}

// Enumerates every connected node set containing `root` exactly once: each
// level scans its frontier in order and bans the nodes it has already tried.
template <class Admit, class Emit>
class SetGrower {
 public:
  SetGrower(const std::vector<std::vector<Node>>& adj, std::size_t size, std::uint64_t budget, Admit admit,
            Emit emit)
      : adj_(adj), size_(size), budget_(budget), admit_(admit), emit_(emit), mark_(adj.size(), 0) {}

  void run(Node root) {
    if (size_ == 0) return;
    chosen_ = {root};
    mark_[root] = 1;
    std::vector<Node> frontier;
    for (Node w : adj_[root]) {
      if (!mark_[w]) {
        mark_[w] = 1;
        frontier.push_back(w);
      }
    }
    grow(frontier);
  }

 private:
  void grow(const std::vector<Node>& frontier) {
    if (++steps_ > budget_) fail(ErrorKind::BudgetExceeded, "subgraph enumeration budget exceeded");
    if (chosen_.size() == size_) {
      emit_(chosen_);
      return;
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Node w = frontier[i];
      if (!admit_(w, chosen_)) continue;
      std::vector<Node> next(frontier.begin() + static_cast<std::ptrdiff_t>(i) + 1, frontier.end());
      const std::size_t inherited = next.size();
      for (Node nb : adj_[w]) {
        if (!mark_[nb]) {
          mark_[nb] = 1;
          next.push_back(nb);
        }
      }
      chosen_.push_back(w);
      grow(next);
      chosen_.pop_back();
      for (std::size_t j = inherited; j < next.size(); ++j) mark_[next[j]] = 0;
    }
  }

  const std::vector<std::vector<Node>>& adj_;
  std::size_t size_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
  Admit admit_;
  Emit emit_;
  std::vector<char> mark_;
  std::vector<Node> chosen_;
};

std::vector<std::vector<Node>> distance_two_three_links(const SimpleGraph& g, const DistanceTable& dist) {
  std::vector<std::vector<Node>> links(g.size());
  for (Node u = 0; u < g.size(); ++u) {
    for (Node v = 0; v < g.size(); ++v) {
      const int d = dist(u, v);
      if (d == 2 || d == 3) links[u].push_back(v);
    }
  }
  return links;
}

}  // namespace

bool is_23tree(const SimpleGraph& g, const std::vector<Node>& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[i] == nodes[j] || g.adjacent(nodes[i], nodes[j])) return false;
    }
  }
  std::vector<std::vector<int>> dist;
  for (Node u : nodes) dist.push_back(bfs_distances(g, u, 3));
  std::vector<std::size_t> index(g.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  return connected_under(nodes, [&](Node a, Node b) {
    const int d = dist[index[a]][b];
    return d == 2 || d == 3;
  });
}

bool connected_in_square(const SimpleGraph& g, const std::vector<Node>& nodes) {
  std::vector<std::vector<int>> dist;
  std::vector<std::size_t> index(g.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index[nodes[i]] = i;
    dist.push_back(bfs_distances(g, nodes[i], 2));
  }
  return connected_under(nodes, [&](Node a, Node b) {
    const int d = dist[index[a]][b];
    return d >= 0 && d <= 2;
  });
}

std::vector<TwoThreeTree> enumerate_23trees(const SimpleGraph& g, Node root, std::size_t size,
                                            std::uint64_t budget) {
  if (size == 0) fail(ErrorKind::InvalidArgument, "tree size must be at least 1");
  if (root >= g.size()) fail(ErrorKind::InvalidArgument, "root out of range");
  const DistanceTable dist(g, 3);
  const auto links = distance_two_three_links(g, dist);
  std::vector<TwoThreeTree> out;
  auto admit = [&](Node w, const std::vector<Node>& chosen) {
    return std::none_of(chosen.begin(), chosen.end(), [&](Node s) { return dist(s, w) == 1; });
  };
  auto emit = [&](const std::vector<Node>& chosen) {
    TwoThreeTree t{chosen};
    std::sort(t.nodes.begin(), t.nodes.end());
    out.push_back(std::move(t));
  };
  SetGrower grower(links, size, budget, admit, emit);
  grower.run(root);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.nodes < b.nodes; });
  return out;
}

std::uint64_t count_connected_subgraphs(const SimpleGraph& g, Node root, std::size_t size, std::uint64_t budget) {
  if (size == 0) fail(ErrorKind::InvalidArgument, "subgraph size must be at least 1");
  if (root >= g.size()) fail(ErrorKind::InvalidArgument, "root out of range");
  std::vector<std::vector<Node>> adj(g.size());
  for (Node u = 0; u < g.size(); ++u) adj[u] = g.neighbours(u);
  std::uint64_t count = 0;
  SetGrower grower(adj, size, budget, [](Node, const std::vector<Node>&) { return true; },
                   [&](const std::vector<Node>&) { ++count; });
  grower.run(root);
  return count;
}

TwoThreeTree greedy_23tree(const SimpleGraph& g, const std::vector<Node>& candidates, Node anchor,
                           std::size_t deg_bound) {
  std::vector<Node> remaining = candidates;
  std::sort(remaining.begin(), remaining.end());
  remaining.erase(std::unique(remaining.begin(), remaining.end()), remaining.end());
  if (!std::binary_search(remaining.begin(), remaining.end(), anchor)) {
    fail(ErrorKind::InvalidArgument, "anchor must belong to the candidate set");
  }
  if (!connected_in_square(g, remaining)) {
    fail(ErrorKind::InvalidArgument, "candidate set is not connected in the square graph");
  }
  for (Node u : remaining) {
    if (g.neighbours(u).size() > deg_bound) fail(ErrorKind::InvalidArgument, "degree bound too small");
  }
  TwoThreeTree tree;
  std::vector<int> to_tree(g.size(), -1);  // distance to the tree, capped at 3
  auto absorb = [&](Node e) {
    tree.nodes.push_back(e);
    const auto dist = bfs_distances(g, e, 3);
    for (Node u = 0; u < g.size(); ++u) {
      if (dist[u] >= 0 && (to_tree[u] < 0 || dist[u] < to_tree[u])) to_tree[u] = dist[u];
    }
    std::erase_if(remaining, [&](Node u) { return to_tree[u] >= 0 && to_tree[u] <= 1; });
  };
  absorb(anchor);
  while (!remaining.empty()) {
    const auto next = std::find_if(remaining.begin(), remaining.end(), [&](Node u) {
      return to_tree[u] == 2 || to_tree[u] == 3;
    });
    if (next == remaining.end()) break;
    absorb(*next);
  }
  std::sort(tree.nodes.begin(), tree.nodes.end());
  return tree;
}

namespace {

// Some colour class of size >= k2 in the edge agrees with the pinning.
bool partially_monochromatic(const Edge& e, const FullColouring& sigma, std::size_t k2, int q) {
  if (e.vertices.size() < k2) return false;
  std::vector<std::size_t> hits(static_cast<std::size_t>(q), 0);
  for (Vertex u : e.vertices) ++hits[static_cast<std::size_t>(sigma[u])];
  for (Colour c = 0; c < q; ++c) {
    const bool pin_ok = e.pinned.empty() || (e.pinned.size() == 1 && e.pinned.front() == c);
    if (pin_ok && hits[static_cast<std::size_t>(c)] >= k2) return true;
  }
  return false;
}

}  // namespace

bool is_ell_bad(const Instance& inst, const FullColouring& sigma, Vertex v, std::size_t ell, const Rational& beta,
                std::size_t k2, std::uint64_t budget) {
  if (!is_full_colouring(inst, sigma)) fail(ErrorKind::InvalidArgument, "colouring is not total");
  if (v >= inst.num_vertices()) fail(ErrorKind::InvalidArgument, "vertex out of range");
  if (inst.incident(v).empty()) fail(ErrorKind::InvalidArgument, "vertex lies in no edge");
  const Node e0 = inst.incident(v).front();
  const SimpleGraph lin = line_graph(inst);
  const Rational needed = beta * static_cast<long long>(ell);
  for (const auto& tree : enumerate_23trees(lin, e0, ell, budget)) {
    std::size_t mono = 0;
    for (Node e : tree.nodes) {
      if (partially_monochromatic(inst.edge(e), sigma, k2, inst.num_colours())) ++mono;
    }
    if (Rational(static_cast<long long>(mono)) >= needed) return true;
  }
  return false;
}

}  // namespace chromatic
