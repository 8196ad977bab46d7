#include "chromatic/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>

#include "chromatic/lll.hpp"
#include "chromatic/simplex.hpp"

namespace chromatic {

namespace {

constexpr std::size_t kDenseVarCap = 1500;
constexpr double kNegligible = 1e-200;

std::uint32_t child_index(const CouplingTree& tree, std::uint32_t i, int cx, int cy) {
  const int q = tree.instance().num_colours();
  return tree.node(i).first_child + static_cast<std::uint32_t>(cx * q + cy);
}

void check_guesses(double r_lo, double r_hi, double t_star) {
  if (!(r_lo > 0.0) || !(r_hi > 0.0) || !std::isfinite(r_lo) || !std::isfinite(r_hi)) {
    fail(ErrorKind::InvalidArgument, "ratio guesses must be positive and finite");
  }
  if (!(t_star > 0.0)) fail(ErrorKind::InvalidArgument, "t* must be positive");
}

}  // namespace

std::size_t LPSystem::count(ConstraintFamily f) const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(), [f](const auto& c) { return c.family == f; }));
}

std::size_t lp_constraint_count(const CouplingTree& tree, [[maybe_unused]] double t_star) {
  const std::size_t q = static_cast<std::size_t>(tree.instance().num_colours());
  return 2 * tree.halted_count() + 2 * q * tree.internal_count() + 2 * q * (q - 1) * tree.internal_count() + 2;
}

LPSystem generate_lp(const CouplingTree& tree, double r_lo, double r_hi, double t_star) {
  check_guesses(r_lo, r_hi, t_star);
  const int q = tree.instance().num_colours();
  const double slack = 5.0 / t_star;
  LPSystem sys;
  sys.num_vars = 2 * tree.size();
  sys.r_lo = r_lo;
  sys.r_hi = r_hi;
  sys.t_star = t_star;
  sys.depth_bound = tree.depth_bound();
  sys.vacuous = tree.halted_count() == 0;
  sys.tree = &tree;
  auto& rows = sys.constraints;
  rows.push_back({ConstraintFamily::RootMass, Sense::Equal, {{x_var(0), 1.0}}, 1.0, 0});
  rows.push_back({ConstraintFamily::RootMass, Sense::Equal, {{y_var(0), 1.0}}, 1.0, 0});
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const TreeNode& nd = tree.node(i);
    if (nd.status == NodeStatus::Halted) {
      // Scale the exact counts so the larger one becomes 1.
      const LeafCounts& lc = tree.counts(i);
      const BigInt& big = lc.nx > lc.ny ? lc.nx : lc.ny;
      const double nx = big == 0 ? 0.0 : to_double(Rational(lc.nx, big));
      const double ny = big == 0 ? 0.0 : to_double(Rational(lc.ny, big));
      rows.push_back({ConstraintFamily::LeafRatio, Sense::LessEqual, {{y_var(i), r_lo * ny}, {x_var(i), -nx}}, 0.0, i});
      rows.push_back({ConstraintFamily::LeafRatio, Sense::LessEqual, {{x_var(i), nx}, {y_var(i), -r_hi * ny}}, 0.0, i});
    } else if (nd.status == NodeStatus::Internal) {
      for (int c = 0; c < q; ++c) {
        LinearConstraint row{ConstraintFamily::RowSum, Sense::Equal, {}, 0.0, i};
        LinearConstraint col{ConstraintFamily::ColumnSum, Sense::Equal, {}, 0.0, i};
        for (int c2 = 0; c2 < q; ++c2) {
          row.terms.push_back({x_var(child_index(tree, i, c, c2)), 1.0});
          col.terms.push_back({y_var(child_index(tree, i, c2, c)), 1.0});
        }
        row.terms.push_back({x_var(i), -1.0});
        col.terms.push_back({y_var(i), -1.0});
        rows.push_back(std::move(row));
        rows.push_back(std::move(col));
      }
      for (int cx = 0; cx < q; ++cx) {
        for (int cy = 0; cy < q; ++cy) {
          if (cx == cy) continue;
          const std::uint32_t j = child_index(tree, i, cx, cy);
          rows.push_back({ConstraintFamily::OffDiagonal, Sense::LessEqual, {{x_var(j), 1.0}, {x_var(i), -slack}}, 0.0, i});
          rows.push_back({ConstraintFamily::OffDiagonal, Sense::LessEqual, {{y_var(j), 1.0}, {y_var(i), -slack}}, 0.0, i});
        }
      }
    }
  }
  return sys;
}

std::optional<std::vector<double>> dense_solution(const LPSystem& sys, double& max_violation) {
  if (sys.num_vars > kDenseVarCap) return std::nullopt;
  std::size_t rows = sys.num_vars;  // boxes
  for (const auto& c : sys.constraints) rows += c.sense == Sense::Equal ? 2 : 1;
  const auto n = static_cast<Eigen::Index>(sys.num_vars);
  DenseLP lp;
  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), n + 1);
  lp.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  lp.sense.assign(rows, RowSense::LessEqual);
  lp.c = Eigen::VectorXd::Zero(n + 1);
  lp.c(n) = 1.0;
  Eigen::Index r = 0;
  for (const auto& c : sys.constraints) {
    for (double sign : {1.0, -1.0}) {
      if (sign < 0 && c.sense != Sense::Equal) break;
      for (const auto& t : c.terms) lp.A(r, t.var) += sign * t.coeff;
      lp.A(r, n) = -1.0;
      lp.b(r) = sign * c.rhs;
      ++r;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j, ++r) {
    lp.A(r, j) = 1.0;
    lp.b(r) = 1.0;
  }
  const LPSolution sol = solve_dense(lp);
  if (sol.status != LPStatus::Optimal) {
    fail(ErrorKind::NumericalFailure, "dense simplex did not reach an optimum");
  }
  max_violation = sol.objective;
  return std::vector<double>(sol.x.data(), sol.x.data() + n);
}

bool feasible_dense(const LPSystem& sys, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (sys.constraints.empty()) return true;
  double violation = 0.0;
  if (!dense_solution(sys, violation)) {
    fail(ErrorKind::InvalidArgument, "system too large for the dense route");
  }
  return violation <= tol;
}

bool feasible(const LPSystem& sys, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (sys.tree == nullptr) return feasible_dense(sys, tol);
  TreeConeSolver solver(*sys.tree, sys.t_star, tol);
  return solver.feasible(sys.r_lo, sys.r_hi);
}

TreeConeSolver::TreeConeSolver(const CouplingTree& tree, double t_star, double tol)
    : tree_(tree), slack_(5.0 / t_star), tol_(tol) {
  if (!(t_star > 0.0)) fail(ErrorKind::InvalidArgument, "t* must be positive");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
  const std::size_t n = tree.size();
  dependent_.assign(n, 0);
  fixed_.assign(n, Cone{});
  for (std::size_t r = n; r-- > 0;) {
    const auto i = static_cast<std::uint32_t>(r);
    const TreeNode& nd = tree.node(i);
    if (nd.status == NodeStatus::Halted) {
      const LeafCounts& lc = tree.counts(i);
      dependent_[i] = lc.nx > 0 && lc.ny > 0;
      if (!dependent_[i]) fixed_[i] = leaf_cone(i, 1.0, 1.0);
    } else if (nd.status == NodeStatus::Truncated) {
      fixed_[i] = leaf_cone(i, 1.0, 1.0);
    } else {
      const int q = tree.instance().num_colours();
      for (int c = 0; c < q * q; ++c) {
        if (dependent_[nd.first_child + static_cast<std::uint32_t>(c)]) dependent_[i] = 1;
      }
      if (!dependent_[i]) fixed_[i] = internal_cone(i, fixed_);
    }
  }
  work_ = fixed_;
}

TreeConeSolver::Cone TreeConeSolver::leaf_cone(std::uint32_t i, double r_lo, double r_hi) const {
  const TreeNode& nd = tree_.node(i);
  if (nd.status == NodeStatus::Truncated) return {false, 0.0, 1.0};
  const LeafCounts& lc = tree_.counts(i);
  if (lc.nx == 0 && lc.ny == 0) return {false, 0.0, 1.0};
  if (lc.nx == 0) return {false, 0.0, 0.0};
  if (lc.ny == 0) return {false, 1.0, 1.0};
  // y/x mass ratio lies in [rho / r_hi, rho / r_lo] with rho = nx / ny.
  const double rho = to_double(Rational(lc.nx, lc.ny));
  const double lo = rho / r_hi * (1.0 - tol_);
  const double hi = rho / r_lo * (1.0 + tol_);
  if (lo > hi) return {};
  return {false, lo / (1.0 + lo), hi / (1.0 + hi)};
}

TreeConeSolver::Cone TreeConeSolver::internal_cone(std::uint32_t i, const std::vector<Cone>& cones) {
  const TreeNode& nd = tree_.node(i);
  const int q = tree_.instance().num_colours();
  auto cone_of = [&](int cx, int cy) -> const Cone& { return cones[nd.first_child + static_cast<std::uint32_t>(cx * q + cy)]; };

  bool diagonal_full = true;
  for (int c = 0; c < q && diagonal_full; ++c) {
    const Cone& k = cone_of(c, c);
    diagonal_full = !k.zero && k.lo <= 0.0 && k.hi >= 1.0;
  }
  if (diagonal_full) return {false, 0.0, 1.0};

  // Variables: a, b, then one multiplier per extreme ray of every child cone.
  struct Ray {
    int cx, cy;
    double f;
  };
  std::vector<Ray> rays;
  for (int cx = 0; cx < q; ++cx) {
    for (int cy = 0; cy < q; ++cy) {
      const Cone& k = cone_of(cx, cy);
      if (k.zero) continue;
      rays.push_back({cx, cy, k.lo});
      if (k.hi > k.lo) rays.push_back({cx, cy, k.hi});
    }
  }
  const bool off_diagonal = slack_ < 1.0;
  const auto nvars = static_cast<Eigen::Index>(2 + rays.size());
  const Eigen::Index nrows = 1 + 2 * q + (off_diagonal ? 2 * q * (q - 1) : 0);
  DenseLP lp;
  lp.A = Eigen::MatrixXd::Zero(nrows, nvars);
  lp.b = Eigen::VectorXd::Zero(nrows);
  lp.sense.assign(static_cast<std::size_t>(nrows), RowSense::Equal);
  lp.A(0, 0) = 1.0;
  lp.A(0, 1) = 1.0;
  lp.b(0) = 1.0;
  for (int c = 0; c < q; ++c) {
    lp.A(1 + c, 0) = -1.0;
    lp.A(1 + q + c, 1) = -1.0;
  }
  auto off_row = [&](int cx, int cy) {
    int idx = cx * q + cy;
    idx -= cx + (cy > cx ? 1 : 0);
    return 1 + 2 * q + 2 * idx;
  };
  if (off_diagonal) {
    for (int cx = 0; cx < q; ++cx) {
      for (int cy = 0; cy < q; ++cy) {
        if (cx == cy) continue;
        const int r = off_row(cx, cy);
        lp.sense[static_cast<std::size_t>(r)] = RowSense::LessEqual;
        lp.sense[static_cast<std::size_t>(r + 1)] = RowSense::LessEqual;
        lp.A(r, 0) = -slack_;
        lp.A(r + 1, 1) = -slack_;
      }
    }
  }
  for (std::size_t k = 0; k < rays.size(); ++k) {
    const Ray& ray = rays[k];
    const auto col = static_cast<Eigen::Index>(2 + k);
    lp.A(1 + ray.cx, col) += 1.0 - ray.f;
    lp.A(1 + q + ray.cy, col) += ray.f;
    if (off_diagonal && ray.cx != ray.cy) {
      const int r = off_row(ray.cx, ray.cy);
      lp.A(r, col) += 1.0 - ray.f;
      lp.A(r + 1, col) += ray.f;
    }
  }
  double bounds[2] = {0.0, 0.0};
  for (int side = 0; side < 2; ++side) {
    lp.c = Eigen::VectorXd::Zero(nvars);
    lp.c(1) = side == 0 ? 1.0 : -1.0;
    const LPSolution sol = solve_dense(lp);
    ++lp_solves_;
    if (sol.status == LPStatus::Infeasible) return {};
    if (sol.status != LPStatus::Optimal) {
      fail(ErrorKind::NumericalFailure, "node simplex did not reach an optimum");
    }
    bounds[side] = std::clamp(sol.x(1), 0.0, 1.0);
  }
  return {false, std::min(bounds[0], bounds[1]), std::max(bounds[0], bounds[1])};
}

void TreeConeSolver::evaluate(double r_lo, double r_hi) {
  for (std::size_t r = tree_.size(); r-- > 0;) {
    const auto i = static_cast<std::uint32_t>(r);
    if (!dependent_[i]) continue;
    work_[i] = tree_.node(i).status == NodeStatus::Internal ? internal_cone(i, work_) : leaf_cone(i, r_lo, r_hi);
  }
}

std::optional<std::pair<double, double>> TreeConeSolver::root_cone(double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi > 0.0)) fail(ErrorKind::InvalidArgument, "ratio guesses must be positive");
  evaluate(r_lo, r_hi);
  const Cone& root = work_.at(0);
  if (root.zero) return std::nullopt;
  return std::make_pair(root.lo, root.hi);
}

bool TreeConeSolver::feasible(double r_lo, double r_hi) {
  const auto cone = root_cone(r_lo, r_hi);
  return cone && cone->first - tol_ <= 0.5 && 0.5 <= cone->second + tol_;
}

RatioBracket binary_search_ratio(const CouplingTree& tree, const RatioBracket& initial, double target_width,
                                 double t_star, double tol, SearchStats* stats) {
  check_guesses(initial.r_lo, initial.r_hi, t_star);
  if (initial.r_lo > initial.r_hi) fail(ErrorKind::InvalidArgument, "initial bracket is reversed");
  if (!(target_width > 0.0)) fail(ErrorKind::InvalidArgument, "target width must be positive");
  if (tree.halted_count() == 0) {
    fail(ErrorKind::VacuousSystem, "coupling tree has no halted leaf below the depth bound");
  }
  TreeConeSolver solver(tree, t_star, tol);
  const auto start = std::chrono::steady_clock::now();
  std::size_t checks = 0;
  auto test = [&](double lo, double hi) {
    ++checks;
    return solver.feasible(lo, hi);
  };
  auto finish = [&] {
    if (stats == nullptr) return;
    stats->feasibility_checks += checks;
    stats->node_lp_solves += solver.lp_solves();
    stats->lp_solve_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  double a = initial.r_lo;
  double b = initial.r_hi;
  if (!test(a, b)) {
    finish();
    fail(ErrorKind::InitialInfeasible, "initial ratio bracket is infeasible");
  }
  while (std::log(b / a) > target_width + 1e-12) {
    const double m = std::sqrt(a * b);
    if (test(a, m)) {
      b = m;
    } else if (test(m, b)) {
      a = m;
    } else {
      finish();
      fail(ErrorKind::BothHalvesInfeasible, "both halves of the ratio bracket are infeasible");
    }
  }
  finish();
  const Instance& inst = tree.instance();
  return {a, b, truncation_gamma(tree.depth_bound(), inst.max_edge_size(), inst.max_degree())};
}

RatioBracket initial_ratio_bracket(const Instance& inst, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidArgument, "delta must lie in (0,1)");
  const double t = max_lll_slack(inst);
  if (inst.num_edges() > 0 && std::isfinite(t) && t >= static_cast<double>(std::max<std::size_t>(inst.max_edge_size(), 2))) {
    const MarginalBounds mb = marginal_bounds(inst.num_colours(), Rational(t));
    const double lo = to_double(mb.lower);
    const double hi = to_double(mb.upper);
    return {lo / hi, hi / lo, 0.0};
  }
  return {delta, 1.0 / delta, 0.0};
}

namespace {

bool root_extends(const Instance& inst, Vertex v, Colour c) {
  PartialColouring p(inst.num_vertices(), kBlank);
  p[v] = c;
  return find_extension(inst, p).has_value();
}

}  // namespace

MarginalEstimate estimate_marginal(const Instance& inst, Vertex v, Colour c, double eps, const AlgoParams& params,
                                   const MarginalOptions& opts) {
  const int q = inst.num_colours();
  if (v >= inst.num_vertices()) fail(ErrorKind::InvalidArgument, "vertex out of range");
  if (c < 0 || c >= q) fail(ErrorKind::InvalidArgument, "colour out of range");
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  MarginalEstimate out;
  out.gamma = truncation_gamma(params.L, inst.max_edge_size(), inst.max_degree());
  if (q == 1) {
    out.p_hat = out.bracket_lo = out.bracket_hi = 1.0;
    return out;
  }
  const RatioBracket wide{opts.delta, 1.0 / opts.delta, 0.0};
  RatioBracket initial = opts.bracket ? RatioBracket{opts.bracket->first, opts.bracket->second, 0.0}
                                      : initial_ratio_bracket(inst, opts.delta);
  struct Job {
    ColourRatio ratio;
    std::size_t constraints = 0;
    SearchStats stats;
  };
  auto run = [&](Colour other) {
    Job job;
    const CouplingTree tree = build_tree(inst, v, other, c, params.k1, params.k2, params.L, opts.tree);
    job.ratio.colour = other;
    job.ratio.tree_nodes = tree.size();
    job.constraints = lp_constraint_count(tree, params.t_star);
    RatioBracket br;
    try {
      br = binary_search_ratio(tree, initial, eps, params.t_star, opts.tol, &job.stats);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InitialInfeasible || opts.bracket) throw;
      try {
        br = binary_search_ratio(tree, wide, eps, params.t_star, opts.tol, &job.stats);
      } catch (const Error& again) {
        if (again.kind() != ErrorKind::InitialInfeasible) throw;
        // The ratio lies outside [delta, 1/delta]; settle for a one-sided bracket.
        TreeConeSolver solver(tree, params.t_star, opts.tol);
        if (solver.feasible(kNegligible, wide.r_lo)) {
          br = {0.0, wide.r_lo, 0.0};
        } else if (solver.feasible(wide.r_hi, 1.0 / kNegligible)) {
          br = {wide.r_hi, std::numeric_limits<double>::infinity(), 0.0};
        } else if (!root_extends(inst, v, other)) {
          br = {0.0, 0.0, 0.0};
        } else if (!root_extends(inst, v, c)) {
          br = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};
        } else {
          throw;
        }
      }
    }
    job.ratio.r_lo = br.r_lo;
    job.ratio.r_hi = br.r_hi;
    return job;
  };
  std::vector<Colour> others;
  for (Colour o = 0; o < q; ++o) {
    if (o != c) others.push_back(o);
  }
  std::vector<Job> jobs;
  jobs.reserve(others.size());
  const std::size_t width = std::max(1u, opts.threads);
  for (std::size_t start = 0; start < others.size(); start += width) {
    const std::size_t stop = std::min(others.size(), start + width);
    if (width == 1) {
      jobs.push_back(run(others[start]));
      continue;
    }
    std::vector<std::future<Job>> batch;
    for (std::size_t k = start; k < stop; ++k) batch.push_back(std::async(std::launch::async, run, others[k]));
    for (auto& f : batch) jobs.push_back(f.get());
  }
  double sum = 1.0, sum_lo = 1.0, sum_hi = 1.0;
  const double eg = std::exp(out.gamma);
  for (const Job& job : jobs) {
    const bool one_sided = job.ratio.r_lo == 0.0 || std::isinf(job.ratio.r_hi);
    sum += one_sided ? (job.ratio.r_lo == 0.0 ? 0.0 : job.ratio.r_hi) : std::sqrt(job.ratio.r_lo * job.ratio.r_hi);
    sum_lo += job.ratio.r_lo / eg;
    sum_hi += job.ratio.r_hi * eg;
    out.tree_nodes += job.ratio.tree_nodes;
    out.lp_constraints += job.constraints;
    out.lp_solve_ms += job.stats.lp_solve_ms;
    out.ratios.push_back(job.ratio);
  }
  out.p_hat = 1.0 / sum;
  out.bracket_lo = 1.0 / sum_hi;
  out.bracket_hi = 1.0 / sum_lo;
  return out;
}

TrueValues true_lp_values(const CouplingTree& tree, const OracleOptions& opts) {
  const Instance& inst = tree.instance();
  const int q = inst.num_colours();
  const std::size_t n = tree.size();
  TrueValues tv;
  tv.px.assign(n, Rational(0));
  tv.py.assign(n, Rational(0));
  std::vector<Rational> mu(n, Rational(0));
  const CouplingState root = tree.state_at(0);
  const BigInt c1 = count_extensions(inst, root.x, opts);
  const BigInt c2 = count_extensions(inst, root.y, opts);
  if (c1 == 0 || c2 == 0) fail(ErrorKind::ZeroDenominator, "a root colour admits no proper colouring");
  tv.ratio = Rational(c1, c2);
  mu[0] = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    const TreeNode& nd = tree.node(i);
    const CouplingState s = tree.state_at(i);
    const BigInt nx = count_extensions(inst, s.x, opts);
    const BigInt ny = count_extensions(inst, s.y, opts);
    const bool diagonal = i == 0 || nd.cx == nd.cy;
    const Rational parent_x = i == 0 ? Rational(1) : tv.px[nd.parent];
    const Rational parent_y = i == 0 ? Rational(1) : tv.py[nd.parent];
    tv.px[i] = nx > 0 ? mu[i] * Rational(c1, nx) : (diagonal ? parent_x : Rational(0));
    tv.py[i] = ny > 0 ? mu[i] * Rational(c2, ny) : (diagonal ? parent_y : Rational(0));
    if (nd.status != NodeStatus::Internal || mu[i] == 0) continue;
    const auto mx = conditional_marginal(inst, s.x, nd.next, opts);
    const auto my = conditional_marginal(inst, s.y, nd.next, opts);
    const auto joint = maximal_coupling(mx, my);
    for (int cx = 0; cx < q; ++cx) {
      for (int cy = 0; cy < q; ++cy) {
        mu[child_index(tree, i, cx, cy)] = mu[i] * joint[static_cast<std::size_t>(cx * q + cy)];
      }
    }
  }
  return tv;
}

TruthReport check_truth(const CouplingTree& tree, const TrueValues& tv, const Rational& t_star) {
  TruthReport rep;
  const int q = tree.instance().num_colours();
  const Rational slack = Rational(5) / t_star;
  auto note = [&rep](const std::string& msg) {
    if (rep.first_failure.empty()) rep.first_failure = msg;
  };
  if (tv.px.at(0) != 1 || tv.py.at(0) != 1) {
    rep.mass_ok = false;
    note("root masses differ from 1");
  }
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const TreeNode& nd = tree.node(i);
    if (nd.status == NodeStatus::Halted) {
      const LeafCounts& lc = tree.counts(i);
      if (tv.px[i] * Rational(lc.nx) != tv.ratio * tv.py[i] * Rational(lc.ny)) {
        rep.leaf_ratio_ok = false;
        note("leaf ratio constraint fails at node " + std::to_string(i));
      }
    }
    if (nd.status != NodeStatus::Internal) continue;
    for (int c = 0; c < q; ++c) {
      Rational row(0), col(0);
      for (int c2 = 0; c2 < q; ++c2) {
        row += tv.px[child_index(tree, i, c, c2)];
        col += tv.py[child_index(tree, i, c2, c)];
      }
      if (row != tv.px[i] || col != tv.py[i]) {
        rep.mass_ok = false;
        note("mass constraint fails at node " + std::to_string(i));
      }
    }
    for (int cx = 0; cx < q; ++cx) {
      for (int cy = 0; cy < q; ++cy) {
        if (cx == cy) continue;
        const std::uint32_t j = child_index(tree, i, cx, cy);
        if (tv.px[j] > slack * tv.px[i] || tv.py[j] > slack * tv.py[i]) {
          rep.off_diagonal_ok = false;
          ++rep.off_diagonal_violations;
          note("off-diagonal constraint fails at node " + std::to_string(j));
        }
      }
    }
  }
  return rep;
}

}  // namespace chromatic
