#include "chromatic/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "chromatic/counter.hpp"
#include "chromatic/coupling.hpp"
#include "chromatic/graphtools.hpp"
#include "chromatic/lll.hpp"
#include "chromatic/lp.hpp"
#include "chromatic/oracle.hpp"
#include "chromatic/params.hpp"
#include "chromatic/sampler.hpp"

namespace chromatic {
namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::string path;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool timing = false;
  double budget_bits = 24.0;
};

struct Overrides {
  std::optional<std::size_t> k1;
  std::optional<std::size_t> k2;
  std::optional<std::string> beta;
  std::optional<std::size_t> depth;
  std::optional<double> t_star;
};

struct Options {
  Common common;
  Overrides ov;
  double eps = 0.1;
  std::size_t samples = 1;
  bool histogram = false;
  bool oracle_marginals = false;
  std::optional<Vertex> vertex;
  std::optional<Colour> colour;
  Colour c1 = 0;
  Colour c2 = 1;
  std::vector<double> bracket;
  std::uint64_t max_resamples = 1'000'000;
  std::size_t k1c = 0;
  std::size_t runs = 1000;
  std::size_t max_size = 4;
  std::size_t k = 0;
  std::size_t delta = 0;
  std::size_t q = 0;
  std::string mode = "counting";
  std::string format = "json";
};

Rational parse_beta(const std::string& text) {
  try {
    if (text.find('.') == std::string::npos && text.find('e') == std::string::npos) return Rational(text);
    const double value = std::stod(text);
    return Rational(BigInt(static_cast<long long>(std::llround(value * 1e9))), BigInt(1'000'000'000));
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "cannot parse beta '" + text + "'");
  }
}

ParamOverrides to_param_overrides(const Overrides& ov) {
  ParamOverrides out;
  out.k1 = ov.k1;
  out.k2 = ov.k2;
  if (ov.beta) out.beta = parse_beta(*ov.beta);
  out.L = ov.depth;
  out.t_star = ov.t_star;
  return out;
}

ordered_json overrides_echo(const Overrides& ov) {
  ordered_json j = ordered_json::object();
  if (ov.k1) j["k1c"] = *ov.k1;
  if (ov.k2) j["k2"] = *ov.k2;
  if (ov.beta) j["beta"] = *ov.beta;
  if (ov.depth) j["depth"] = *ov.depth;
  if (ov.t_star) j["tstar"] = *ov.t_star;
  return j;
}

ordered_json params_json(const ResolvedParams& rp) {
  const AlgoParams& p = rp.params;
  ordered_json j;
  j["k1"] = p.k1;
  j["k2"] = p.k2;
  j["beta"] = p.beta.str();
  j["t_star"] = p.t_star;
  j["L"] = p.L;
  j["gamma"] = p.gamma;
  j["mode"] = to_string(p.mode);
  j["in_regime"] = rp.in_regime;
  return j;
}

ordered_json colouring_json(const FullColouring& sigma) {
  ordered_json j = ordered_json::array();
  for (Colour c : sigma) j.push_back(c);
  return j;
}

std::string colouring_key(const FullColouring& sigma) {
  std::string key;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(sigma[i]);
  }
  return key;
}

void emit_warnings(const ResolvedParams& rp, ordered_json& doc, std::ostream& err) {
  doc["warnings"] = rp.warnings;
  for (const auto& w : rp.warnings) err << "warning: " << w << '\n';
}

class Runner {
 public:
  Runner(const std::string& sub, const Options& o, std::ostream& err) : sub_(sub), o_(o), err_(err) {}

  ordered_json run() {
    start_ = Clock::now();
    ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["subcommand"] = sub_;
    doc["config_echo"] = echo();
    if (sub_ == "count") count(doc);
    else if (sub_ == "sample") sample(doc);
    else if (sub_ == "marginal") marginal(doc);
    else if (sub_ == "oracle-count") oracle_count(doc);
    else if (sub_ == "oracle-marginal") oracle_marginal(doc);
    else if (sub_ == "oracle-sample") oracle_sample(doc);
    else if (sub_ == "find-colouring") find_colouring(doc);
    else if (sub_ == "base-colouring") base_colouring(doc);
    else if (sub_ == "check-regime") check_regime(doc);
    else if (sub_ == "couple-sim") couple_sim(doc);
    else if (sub_ == "tree-dump") tree_dump(doc);
    else if (sub_ == "tree-stats") tree_stats(doc);
    doc["wall_ms"] = ms(std::chrono::duration<double, std::milli>(Clock::now() - start_).count());
    return doc;
  }

 private:
  double ms(double value) const { return o_.common.timing ? value : 0.0; }

  const Instance& instance() {
    if (!inst_) inst_ = load_instance(o_.common.path);
    return *inst_;
  }

  OracleOptions oracle_options() const { return OracleOptions{o_.common.budget_bits}; }

  ordered_json echo() const {
    ordered_json j;
    if (!o_.common.path.empty()) j["instance"] = o_.common.path;
    if (sub_ == "count" || sub_ == "sample" || sub_ == "marginal" || sub_ == "couple-sim" || sub_ == "tree-dump") {
      j["eps"] = o_.eps;
    }
    if (randomized()) j["seed"] = o_.common.seed;
    if (o_.vertex) j["vertex"] = *o_.vertex;
    if (o_.colour) j["colour"] = *o_.colour;
    if (sub_ == "couple-sim" || sub_ == "tree-dump") {
      j["c1"] = o_.c1;
      j["c2"] = o_.c2;
    }
    if (sub_ == "sample" || sub_ == "oracle-sample") {
      j["samples"] = o_.samples;
      j["histogram"] = o_.histogram;
    }
    if (sub_ == "count" || sub_ == "sample") j["oracle_marginals"] = o_.oracle_marginals;
    if (o_.bracket.size() == 2) j["bracket"] = o_.bracket;
    if (sub_ == "base-colouring") j["k1c"] = o_.k1c;
    if (sub_ == "couple-sim") j["runs"] = o_.runs;
    if (sub_ == "tree-stats") j["max_size"] = o_.max_size;
    if (sub_ == "check-regime") {
      j["k"] = o_.k;
      j["delta"] = o_.delta;
      j["q"] = o_.q;
      j["mode"] = o_.mode;
    }
    if (sub_.rfind("oracle", 0) == 0 || sub_ == "sample") j["budget_bits"] = o_.common.budget_bits;
    j["overrides"] = overrides_echo(o_.ov);
    return j;
  }

  bool randomized() const {
    return sub_ == "count" || sub_ == "sample" || sub_ == "oracle-sample" || sub_ == "find-colouring" ||
           sub_ == "base-colouring" || sub_ == "couple-sim";
  }

  MarginalOptions marginal_options() const {
    MarginalOptions m;
    m.threads = std::max(1u, o_.common.threads);
    return m;
  }

  void count(ordered_json& doc) {
    const Instance& inst = instance();
    const double n = static_cast<double>(std::max<std::size_t>(inst.num_vertices(), 1));
    const ResolvedParams rp = resolve_params(inst, o_.eps / n, Mode::Counting, to_param_overrides(o_.ov));
    doc["params"] = params_json(rp);
    emit_warnings(rp, doc, err_);
    CountOptions co;
    co.oracle_marginals = o_.oracle_marginals;
    co.marginal = marginal_options();
    co.oracle = oracle_options();
    co.max_resamples = o_.max_resamples;
    Rng rng(o_.common.seed);
    const CountEstimate est = chromatic::count(inst, o_.eps, rp.params, rng, co);
    doc["log_estimate"] = est.log_estimate;
    if (est.log_estimate < 709.0) doc["estimate"] = std::exp(est.log_estimate);
    doc["eps"] = est.eps;
    ordered_json steps = ordered_json::array();
    for (const auto& s : est.per_step) {
      steps.push_back({{"vertex", s.vertex},
                       {"colour", s.colour},
                       {"p_hat", s.p_hat},
                       {"tree_nodes", s.tree_nodes},
                       {"lp_constraints", s.lp_constraints}});
    }
    doc["steps"] = steps;
    doc["free_vertices"] = est.free_vertices;
    doc["base_colouring"] = colouring_json(est.base_colouring);
    doc["resamples"] = est.resamples;
    if (est.exact) {
      doc["exact"] = est.exact->str();
      doc["log_exact"] = std::log(to_double(*est.exact));
    }
    doc["lp_solve_ms"] = ms(est.lp_solve_ms);
  }

  void sample(ordered_json& doc) {
    const Instance& inst = instance();
    const double n = static_cast<double>(std::max<std::size_t>(inst.num_vertices(), 1));
    const ResolvedParams rp = resolve_params(inst, o_.eps / (2.0 * n), Mode::Sampling, to_param_overrides(o_.ov));
    doc["params"] = params_json(rp);
    emit_warnings(rp, doc, err_);
    SamplerOptions so;
    so.oracle_marginals = o_.oracle_marginals;
    so.marginal = marginal_options();
    so.residual = oracle_options();
    so.max_resamples = o_.max_resamples;
    Sampler sampler(inst, o_.eps, rp.params, so);
    doc["residual_threshold"] = std::isfinite(sampler.residual_threshold()) ? ordered_json(sampler.residual_threshold())
                                                                            : ordered_json("inf");
    Rng rng(o_.common.seed);
    std::size_t failures = 0, budget = 0;
    std::map<std::string, std::size_t> hist;
    ordered_json draws = ordered_json::array();
    for (std::size_t i = 0; i < o_.samples; ++i) {
      const SamplerOutcome s = sampler.draw(rng);
      failures += s.failed ? 1 : 0;
      budget += s.budget_exceeded ? 1 : 0;
      if (o_.histogram) {
        ++hist[colouring_key(s.colouring)];
      } else {
        draws.push_back({{"colouring", colouring_json(s.colouring)},
                         {"failed", s.failed},
                         {"residual_sizes", s.residual_sizes}});
      }
    }
    if (o_.histogram) {
      doc["histogram"] = histogram_json(hist);
    } else {
      doc["samples"] = draws;
    }
    doc["failures"] = failures;
    doc["failure_rate"] = o_.samples ? static_cast<double>(failures) / static_cast<double>(o_.samples) : 0.0;
    doc["budget_exceeded"] = budget;
    doc["cached_distributions"] = sampler.cache_size();
    doc["lp_solve_ms"] = ms(sampler.lp_solve_ms());
  }

  static ordered_json histogram_json(const std::map<std::string, std::size_t>& hist) {
    ordered_json j = ordered_json::array();
    for (const auto& [key, c] : hist) j.push_back({{"colouring", key}, {"count", c}});
    return j;
  }

  void marginal(ordered_json& doc) {
    const Instance& inst = instance();
    if (!o_.vertex || !o_.colour) fail(ErrorKind::InvalidArgument, "marginal needs --vertex and --colour");
    const ResolvedParams rp = resolve_params(inst, o_.eps, Mode::Counting, to_param_overrides(o_.ov));
    doc["params"] = params_json(rp);
    emit_warnings(rp, doc, err_);
    MarginalOptions mo = marginal_options();
    if (o_.bracket.size() == 2) mo.bracket = std::make_pair(o_.bracket[0], o_.bracket[1]);
    const MarginalEstimate m = estimate_marginal(inst, *o_.vertex, *o_.colour, o_.eps, rp.params, mo);
    doc["p_hat"] = m.p_hat;
    doc["bracket_lo"] = m.bracket_lo;
    doc["bracket_hi"] = m.bracket_hi;
    doc["gamma"] = m.gamma;
    doc["tree_nodes"] = m.tree_nodes;
    doc["lp_constraints"] = m.lp_constraints;
    doc["lp_solve_ms"] = ms(m.lp_solve_ms);
    ordered_json ratios = ordered_json::array();
    for (const auto& r : m.ratios) {
      ratios.push_back({{"colour", r.colour}, {"r_lo", r.r_lo}, {"r_hi", r.r_hi}, {"tree_nodes", r.tree_nodes}});
    }
    doc["ratios"] = ratios;
  }

  void oracle_count(ordered_json& doc) {
    const BigInt c = exact_count(instance(), oracle_options());
    doc["count"] = c.str();
    doc["log_count"] = c > 0 ? log_of(c) : -std::numeric_limits<double>::infinity();
  }

  void oracle_marginal(ordered_json& doc) {
    const Instance& inst = instance();
    if (!o_.vertex) fail(ErrorKind::InvalidArgument, "oracle-marginal needs --vertex");
    if (o_.colour) {
      const Rational m = exact_marginal(inst, *o_.vertex, *o_.colour, oracle_options());
      doc["marginal"] = m.str();
      doc["value"] = to_double(m);
      return;
    }
    const auto dist = conditional_marginal(inst, PartialColouring(inst.num_vertices(), kBlank), *o_.vertex,
                                           oracle_options());
    ordered_json exact = ordered_json::array(), value = ordered_json::array();
    for (const auto& m : dist) {
      exact.push_back(m.str());
      value.push_back(to_double(m));
    }
    doc["marginals"] = exact;
    doc["values"] = value;
  }

  void oracle_sample(ordered_json& doc) {
    const ExactSampler sampler(instance(), oracle_options());
    doc["count"] = sampler.count().str();
    Rng rng(o_.common.seed);
    std::map<std::string, std::size_t> hist;
    ordered_json draws = ordered_json::array();
    for (std::size_t i = 0; i < o_.samples; ++i) {
      const FullColouring s = sampler.draw(rng);
      if (o_.histogram) {
        ++hist[colouring_key(s)];
      } else {
        draws.push_back(colouring_json(s));
      }
    }
    if (o_.histogram) {
      doc["histogram"] = histogram_json(hist);
    } else {
      doc["samples"] = draws;
    }
  }

  void find_colouring(ordered_json& doc) {
    Rng rng(o_.common.seed);
    const ResampleResult r = moser_tardos(instance(), rng, o_.max_resamples);
    doc["colouring"] = colouring_json(r.colouring);
    doc["resamples"] = r.resamples;
    doc["proper"] = is_proper(instance(), r.colouring);
  }

  void base_colouring(ordered_json& doc) {
    Rng rng(o_.common.seed);
    const ResampleResult r = good_base_colouring(instance(), o_.k1c, rng, o_.max_resamples);
    doc["colouring"] = colouring_json(r.colouring);
    doc["resamples"] = r.resamples;
    doc["prefix_proper"] = is_prefix_proper(instance(), r.colouring, o_.k1c);
  }

  void check_regime(ordered_json& doc) {
    const RegimeReport rep = regime_check(o_.k, o_.delta, o_.q, parse_mode(o_.mode));
    doc["in_regime"] = rep.in_regime;
    doc["settled"] = {{"k1", rep.settled.k1}, {"k2", rep.settled.k2}, {"beta", rep.settled.beta.str()}};
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
      checks.push_back(
          {{"name", c.name}, {"relation", c.relation}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
    }
    doc["checks"] = checks;
  }

  ResolvedParams tree_params() {
    return resolve_params(instance(), o_.eps, Mode::Counting, to_param_overrides(o_.ov));
  }

  void couple_sim(ordered_json& doc) {
    const Instance& inst = instance();
    const Vertex v = o_.vertex.value_or(0);
    const ResolvedParams rp = tree_params();
    doc["params"] = params_json(rp);
    emit_warnings(rp, doc, err_);
    CouplingSimulator sim(inst, v, o_.c1, o_.c2, rp.params.k1, rp.params.k2, oracle_options());
    std::vector<std::size_t> steps_hist;
    std::size_t total_steps = 0, total_coloured = 0, total_disc = 0, max_steps = 0;
    for (std::size_t i = 0; i < o_.runs; ++i) {
      Rng rng = child_stream(o_.common.seed, i);
      const CouplingRun run = sim.run(rng);
      const std::size_t steps = run.trace.size();
      if (steps_hist.size() <= steps) steps_hist.resize(steps + 1, 0);
      ++steps_hist[steps];
      total_steps += steps;
      max_steps = std::max(max_steps, steps);
      total_coloured += run.state.num_coloured;
      for (std::size_t u = 0; u < inst.num_vertices(); ++u) {
        if (run.state.x[u] != run.state.y[u]) ++total_disc;
      }
    }
    const double runs = static_cast<double>(std::max<std::size_t>(o_.runs, 1));
    doc["runs"] = o_.runs;
    doc["mean_steps"] = static_cast<double>(total_steps) / runs;
    doc["max_steps"] = max_steps;
    doc["steps_histogram"] = steps_hist;
    doc["mean_coloured"] = static_cast<double>(total_coloured) / runs;
    doc["mean_discrepancies"] = static_cast<double>(total_disc) / runs;
  }

  void tree_dump(ordered_json& doc) {
    const Instance& inst = instance();
    const ResolvedParams rp = tree_params();
    doc["params"] = params_json(rp);
    emit_warnings(rp, doc, err_);
    const CouplingTree tree =
        build_tree(inst, o_.vertex.value_or(0), o_.c1, o_.c2, rp.params.k1, rp.params.k2, rp.params.L);
    doc["nodes"] = tree.size();
    doc["internal"] = tree.internal_count();
    doc["halted"] = tree.halted_count();
    doc["truncated"] = tree.truncated_count();
    struct Tally {
      std::size_t nodes = 0, internal = 0, halted = 0, truncated = 0;
    };
    std::vector<Tally> depth;
    std::size_t positive = 0, x_zero = 0, y_zero = 0, both_zero = 0;
    for (std::uint32_t i = 0; i < tree.size(); ++i) {
      const TreeNode& nd = tree.node(i);
      if (depth.size() <= nd.depth) depth.resize(nd.depth + 1);
      Tally& t = depth[nd.depth];
      ++t.nodes;
      if (nd.status == NodeStatus::Internal) ++t.internal;
      if (nd.status == NodeStatus::Truncated) ++t.truncated;
      if (nd.status == NodeStatus::Halted) {
        ++t.halted;
        const LeafCounts& lc = tree.counts(i);
        if (lc.nx == 0 && lc.ny == 0) ++both_zero;
        else if (lc.nx == 0) ++x_zero;
        else if (lc.ny == 0) ++y_zero;
        else ++positive;
      }
    }
    ordered_json per_depth = ordered_json::array();
    for (std::size_t d = 0; d < depth.size(); ++d) {
      per_depth.push_back({{"depth", d},
                           {"nodes", depth[d].nodes},
                           {"internal", depth[d].internal},
                           {"halted", depth[d].halted},
                           {"truncated", depth[d].truncated}});
    }
    doc["per_depth"] = per_depth;
    doc["leaf_classes"] = {{"positive", positive}, {"x_zero", x_zero}, {"y_zero", y_zero}, {"both_zero", both_zero}};
    doc["lp_constraints"] = lp_constraint_count(tree, rp.params.t_star);
  }

  void tree_stats(ordered_json& doc) {
    const SimpleGraph g = line_graph(instance());
    const double d = static_cast<double>(g.max_degree());
    doc["line_graph_nodes"] = g.size();
    doc["line_graph_max_degree"] = g.max_degree();
    ordered_json sizes = ordered_json::array();
    for (std::size_t ell = 2; ell <= o_.max_size; ++ell) {
      std::set<std::vector<Node>> distinct;
      std::uint64_t max_rooted = 0, max_connected = 0;
      for (Node r = 0; r < g.size(); ++r) {
        const auto trees = enumerate_23trees(g, r, ell);
        max_rooted = std::max<std::uint64_t>(max_rooted, trees.size());
        for (const auto& t : trees) distinct.insert(t.nodes);
        max_connected = std::max(max_connected, count_connected_subgraphs(g, r, ell));
      }
      const double e = std::exp(1.0);
      sizes.push_back({{"size", ell},
                       {"distinct_23trees", distinct.size()},
                       {"max_rooted_23trees", max_rooted},
                       {"bound_23trees", std::pow(e * d * d * d, static_cast<double>(ell - 1)) / 2.0},
                       {"max_rooted_connected", max_connected},
                       {"bound_connected", std::pow(e * d, static_cast<double>(ell - 1)) / 2.0}});
    }
    doc["sizes"] = sizes;
  }

  std::string sub_;
  const Options& o_;
  std::ostream& err_;
  std::optional<Instance> inst_;
  Clock::time_point start_;
};

void print_table(const ordered_json& doc, std::ostream& out) {
  out << "in_regime " << (doc["in_regime"].get<bool>() ? "yes" : "no") << '\n';
  out << "k1 " << doc["settled"]["k1"] << "  k2 " << doc["settled"]["k2"] << "  beta "
      << doc["settled"]["beta"].get<std::string>() << '\n';
  for (const auto& c : doc["checks"]) {
    out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  " << c["lhs"] << ' '
        << c["relation"].get<std::string>() << ' ' << c["rhs"] << '\n';
  }
}

int exit_code(ErrorKind kind) {
  return kind == ErrorKind::Parse || kind == ErrorKind::InvalidArgument ? kExitUsage : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Counting and sampling proper colourings of hypergraphs", "chromatic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto add_common = [&](CLI::App* sub, bool needs_instance, bool needs_seed) {
    if (needs_instance) sub->add_option("instance", o.common.path, "Instance file")->required();
    auto* seed = sub->add_option("--seed", o.common.seed, "RNG seed");
    if (needs_seed) seed->required();
    sub->add_option("--threads", o.common.threads, "Worker threads for marginal estimation");
    sub->add_flag("--timing", o.common.timing, "Report measured wall and LP times");
    sub->add_option("--budget-bits", o.common.budget_bits, "log2 cap on exact enumeration");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--k1c", o.ov.k1, "Override k1");
    sub->add_option("--k2", o.ov.k2, "Override k2");
    sub->add_option("--beta", o.ov.beta, "Override beta, as a/b or decimal");
    sub->add_option("--depth", o.ov.depth, "Override the truncation depth L");
    sub->add_option("--tstar", o.ov.t_star, "Override t*");
  };

  auto* count = app.add_subcommand("count", "Approximate the number of proper colourings");
  add_common(count, true, true);
  add_params(count);
  count->add_option("--eps", o.eps, "Target accuracy")->required();
  count->add_flag("--oracle-marginals", o.oracle_marginals, "Use exact marginals");
  count->add_option("--max-resamples", o.max_resamples, "Moser-Tardos resample cap");

  auto* sample = app.add_subcommand("sample", "Draw almost-uniform proper colourings");
  add_common(sample, true, true);
  add_params(sample);
  sample->add_option("--eps", o.eps, "Target accuracy")->required();
  sample->add_option("--samples", o.samples, "Number of draws");
  sample->add_flag("--histogram", o.histogram, "Aggregate draws into a histogram");
  sample->add_flag("--oracle-marginals", o.oracle_marginals, "Use exact marginals");
  sample->add_option("--max-resamples", o.max_resamples, "Moser-Tardos resample cap");

  auto* marginal = app.add_subcommand("marginal", "Estimate one vertex marginal through the coupling LP");
  add_common(marginal, true, false);
  add_params(marginal);
  marginal->add_option("--vertex", o.vertex, "Vertex")->required();
  marginal->add_option("--colour", o.colour, "Colour")->required();
  marginal->add_option("--eps", o.eps, "Target accuracy")->required();
  marginal->add_option("--bracket", o.bracket, "Initial ratio bracket lo hi")->expected(2);

  auto* ocount = app.add_subcommand("oracle-count", "Exact count by enumeration");
  add_common(ocount, true, false);

  auto* omarg = app.add_subcommand("oracle-marginal", "Exact marginal by enumeration");
  add_common(omarg, true, false);
  omarg->add_option("--vertex", o.vertex, "Vertex")->required();
  omarg->add_option("--colour", o.colour, "Colour; all colours when omitted");

  auto* osample = app.add_subcommand("oracle-sample", "Exact uniform samples by enumeration");
  add_common(osample, true, true);
  osample->add_option("--samples", o.samples, "Number of draws");
  osample->add_flag("--histogram", o.histogram, "Aggregate draws into a histogram");

  auto* find = app.add_subcommand("find-colouring", "Proper colouring by Moser-Tardos resampling");
  add_common(find, true, true);
  find->add_option("--max-resamples", o.max_resamples, "Resample cap");

  auto* base = app.add_subcommand("base-colouring", "Colouring proper on every edge prefix of size k1c");
  add_common(base, true, true);
  base->add_option("--k1c", o.k1c, "Prefix size")->required();
  base->add_option("--max-resamples", o.max_resamples, "Resample cap");

  auto* regime = app.add_subcommand("check-regime", "Evaluate the parameter inequalities");
  add_common(regime, false, false);
  regime->add_option("--k", o.k, "Edge size")->required();
  regime->add_option("--delta", o.delta, "Maximum degree")->required();
  regime->add_option("--q", o.q, "Number of colours")->required();
  regime->add_option("--mode", o.mode, "counting or sampling")->check(CLI::IsMember({"counting", "sampling"}));
  regime->add_option("--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}));

  auto* couple = app.add_subcommand("couple-sim", "Run the randomised coupling with exact marginals");
  add_common(couple, true, true);
  add_params(couple);
  couple->add_option("--vertex", o.vertex, "Root vertex");
  couple->add_option("--c1", o.c1, "Colour of the root under x");
  couple->add_option("--c2", o.c2, "Colour of the root under y");
  couple->add_option("--runs", o.runs, "Number of runs");
  couple->add_option("--eps", o.eps, "Accuracy fixing the default depth");

  auto* dump = app.add_subcommand("tree-dump", "Build a coupling tree and tally its nodes");
  add_common(dump, true, false);
  add_params(dump);
  dump->add_option("--vertex", o.vertex, "Root vertex");
  dump->add_option("--c1", o.c1, "Colour of the root under x");
  dump->add_option("--c2", o.c2, "Colour of the root under y");
  dump->add_option("--eps", o.eps, "Accuracy fixing the default depth");

  auto* stats = app.add_subcommand("tree-stats", "Count {2,3}-trees of the line graph by size");
  add_common(stats, true, false);
  stats->add_option("--max-size", o.max_size, "Largest tree size; sizes start at 2");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const ordered_json doc = Runner(sub, o, err).run();
    if (sub == "check-regime" && o.format == "table") {
      print_table(doc, out);
    } else {
      out << doc.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace chromatic
