#include "chromatic/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "chromatic/core.hpp"

namespace chromatic {

Instance::Instance(std::size_t n, int q, std::vector<Edge> edges) : n_(n), q_(q) {
  if (q < 1) fail(ErrorKind::InvalidArgument, "colour count must be positive");
  incident_.assign(n, {});
  edges_.reserve(edges.size());
  for (auto& e : edges) {
    std::sort(e.vertices.begin(), e.vertices.end());
    if (std::adjacent_find(e.vertices.begin(), e.vertices.end()) != e.vertices.end()) {
      fail(ErrorKind::InvalidArgument, "duplicate vertex in an edge");
    }
    if (!e.vertices.empty() && e.vertices.back() >= n) {
      fail(ErrorKind::InvalidArgument, "vertex index out of range");
    }
    std::sort(e.pinned.begin(), e.pinned.end());
    e.pinned.erase(std::unique(e.pinned.begin(), e.pinned.end()), e.pinned.end());
    for (Colour c : e.pinned) {
      if (c < 0 || c >= q) fail(ErrorKind::InvalidArgument, "pinned colour out of range");
    }
    if (e.pinned.size() >= 2) continue;
    const auto ordinal = static_cast<std::uint32_t>(edges_.size());
    for (Vertex v : e.vertices) incident_[v].push_back(ordinal);
    edges_.push_back(std::move(e));
  }
  for (const auto& list : incident_) max_degree_ = std::max(max_degree_, list.size());
  if (!edges_.empty()) {
    min_edge_ = edges_.front().vertices.size();
    for (const auto& e : edges_) {
      min_edge_ = std::min(min_edge_, e.vertices.size());
      max_edge_ = std::max(max_edge_, e.vertices.size());
    }
  }
}

bool Instance::has_pinnings() const noexcept {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return !e.pinned.empty(); });
}

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_number(const std::string& token, std::size_t line) {
  std::uint64_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) parse_error(line, "expected a non-negative integer, got '" + token + "'");
  return value;
}

struct PendingPin {
  std::size_t line;
  std::uint64_t ordinal;
  std::vector<Colour> colours;
};

}  // namespace

Instance parse_instance(std::istream& in) {
  std::optional<std::uint64_t> q;
  std::optional<std::uint64_t> n;
  std::vector<Edge> edges;
  std::vector<PendingPin> pins;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream tokens(raw);
    std::string directive;
    if (!(tokens >> directive)) continue;
    std::vector<std::uint64_t> args;
    for (std::string tok; tokens >> tok;) args.push_back(parse_number(tok, line));

    if (directive == "colours") {
      if (q) parse_error(line, "duplicate 'colours' directive");
      if (args.size() != 1) parse_error(line, "'colours' takes one argument");
      if (args[0] < 1 || args[0] > 1'000'000) parse_error(line, "colour count out of range");
      q = args[0];
    } else if (directive == "vertices") {
      if (n) parse_error(line, "duplicate 'vertices' directive");
      if (args.size() != 1) parse_error(line, "'vertices' takes one argument");
      if (args[0] > 100'000'000) parse_error(line, "vertex count out of range");
      n = args[0];
    } else if (directive == "edge") {
      if (!q || !n) parse_error(line, "'edge' before 'colours' and 'vertices'");
      Edge e;
      for (auto a : args) {
        if (a >= *n) parse_error(line, "vertex index " + std::to_string(a) + " out of range");
        e.vertices.push_back(static_cast<Vertex>(a));
      }
      auto sorted = e.vertices;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        parse_error(line, "duplicate vertex in an edge");
      }
      edges.push_back(std::move(e));
    } else if (directive == "pin") {
      if (!q || !n) parse_error(line, "'pin' before 'colours' and 'vertices'");
      if (args.empty()) parse_error(line, "'pin' needs an edge ordinal");
      PendingPin pin{line, args[0], {}};
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] >= *q) parse_error(line, "pinned colour " + std::to_string(args[i]) + " out of range");
        pin.colours.push_back(static_cast<Colour>(args[i]));
      }
      pins.push_back(std::move(pin));
    } else {
      parse_error(line, "unknown directive '" + directive + "'");
    }
  }
  if (!q) fail(ErrorKind::Parse, "missing 'colours' directive");
  if (!n) fail(ErrorKind::Parse, "missing 'vertices' directive");
  for (const auto& pin : pins) {
    if (pin.ordinal >= edges.size()) parse_error(pin.line, "pin refers to a missing edge");
    auto& target = edges[pin.ordinal].pinned;
    target.insert(target.end(), pin.colours.begin(), pin.colours.end());
  }
  return Instance(static_cast<std::size_t>(*n), static_cast<int>(*q), std::move(edges));
}

Instance parse_instance_string(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open instance file '" + path + "'");
  return parse_instance(in);
}

std::string serialize(const Instance& inst) {
  std::ostringstream out;
  out << "colours " << inst.num_colours() << '\n' << "vertices " << inst.num_vertices() << '\n';
  for (const auto& e : inst.edges()) {
    out << "edge";
    for (Vertex v : e.vertices) out << ' ' << v;
    out << '\n';
  }
  for (std::size_t i = 0; i < inst.num_edges(); ++i) {
    const auto& pinned = inst.edge(i).pinned;
    if (pinned.empty()) continue;
    out << "pin " << i;
    for (Colour c : pinned) out << ' ' << c;
    out << '\n';
  }
  return out.str();
}

bool edge_satisfied(const Edge& edge, const PartialColouring& x) {
  Colour seen = edge.pinned.empty() ? kBlank : edge.pinned.front();
  for (Vertex v : edge.vertices) {
    const Colour c = x[v];
    if (c == kBlank) continue;
    if (seen == kBlank) {
      seen = c;
    } else if (c != seen) {
      return true;
    }
  }
  return false;
}

bool edge_satisfied(const Instance& inst, std::size_t e, const PartialColouring& x) {
  if (e >= inst.num_edges()) fail(ErrorKind::InvalidArgument, "edge ordinal out of range");
  if (x.size() != inst.num_vertices()) fail(ErrorKind::InvalidArgument, "colouring size mismatch");
  return edge_satisfied(inst.edge(e), x);
}

bool is_full_colouring(const Instance& inst, const FullColouring& sigma) {
  if (sigma.size() != inst.num_vertices()) return false;
  return std::all_of(sigma.begin(), sigma.end(),
                     [&](Colour c) { return c >= 0 && c < inst.num_colours(); });
}

bool is_proper(const Instance& inst, const FullColouring& sigma) {
  if (!is_full_colouring(inst, sigma)) fail(ErrorKind::InvalidArgument, "colouring is not total");
  return std::all_of(inst.edges().begin(), inst.edges().end(),
                     [&](const Edge& e) { return edge_satisfied(e, sigma); });
}

Instance pin_vertex(const Instance& inst, Vertex v, Colour c) {
  if (v >= inst.num_vertices()) fail(ErrorKind::InvalidArgument, "pin_vertex: vertex out of range");
  if (c < 0 || c >= inst.num_colours()) fail(ErrorKind::InvalidArgument, "pin_vertex: colour out of range");
  std::vector<Edge> edges = inst.edges();
  for (auto ordinal : inst.incident(v)) {
    auto& e = edges[ordinal];
    e.vertices.erase(std::find(e.vertices.begin(), e.vertices.end(), v));
    if (!std::binary_search(e.pinned.begin(), e.pinned.end(), c)) {
      e.pinned.insert(std::lower_bound(e.pinned.begin(), e.pinned.end(), c), c);
    }
  }
  return Instance(inst.num_vertices(), inst.num_colours(), std::move(edges));
}

}  // namespace chromatic
