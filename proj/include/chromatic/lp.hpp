#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chromatic/core.hpp"
#include "chromatic/coupling.hpp"
#include "chromatic/instance.hpp"
#include "chromatic/oracle.hpp"
#include "chromatic/params.hpp"

namespace chromatic {

enum class ConstraintFamily : std::uint8_t { LeafRatio, RootMass, RowSum, ColumnSum, OffDiagonal };
enum class Sense : std::uint8_t { LessEqual, Equal };

struct LinearTerm {
  std::uint32_t var;
  double coeff;
};

struct LinearConstraint {
  ConstraintFamily family;
  Sense sense;
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
  std::uint32_t node = 0;
};

// Variables 2i and 2i+1 are the x-side and y-side masses of tree node i,
// each boxed to [0, 1]. Boxes are implicit and not listed as constraints.
struct LPSystem {
  std::size_t num_vars = 0;
  std::vector<LinearConstraint> constraints;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double t_star = 0.0;
  std::size_t depth_bound = 0;
  bool vacuous = true;  // no halted leaf, so no ratio information
  const CouplingTree* tree = nullptr;

  std::size_t count(ConstraintFamily f) const;
};

inline std::uint32_t x_var(std::uint32_t node) { return 2 * node; }
inline std::uint32_t y_var(std::uint32_t node) { return 2 * node + 1; }

// 2 * halted + 2q * internal + 2q(q-1) * internal (when 5/t* < 1) + 2.
std::size_t lp_constraint_count(const CouplingTree& tree, double t_star);

LPSystem generate_lp(const CouplingTree& tree, double r_lo, double r_hi, double t_star);

// True iff some point meets every constraint within additive slack tol.
// Systems built over a tree are decided by the tree cone solver; others by
// the dense simplex. Throws NumericalFailure if the solver does not converge.
bool feasible(const LPSystem& sys, double tol);
// Dense route: minimises the largest constraint violation with a simplex.
bool feasible_dense(const LPSystem& sys, double tol);
// Minimiser of the largest violation, or empty past the dense size cap.
std::optional<std::vector<double>> dense_solution(const LPSystem& sys, double& max_violation);

// Decides feasibility over a coupling tree by propagating, bottom-up, the
// cone of attainable (x-mass, y-mass) pairs at every node. A cone is stored
// as the interval of y-mass fractions b / (a + b). Subtrees without leaf
// ratio constraints do not depend on the guesses and are solved once.
class TreeConeSolver {
 public:
  TreeConeSolver(const CouplingTree& tree, double t_star, double tol);

  bool feasible(double r_lo, double r_hi);
  // Root cone for the given guesses, or empty when only the zero point is attainable.
  std::optional<std::pair<double, double>> root_cone(double r_lo, double r_hi);
  std::size_t lp_solves() const noexcept { return lp_solves_; }

 private:
  struct Cone {
    bool zero = true;
    double lo = 0.0;
    double hi = 0.0;
  };
  Cone leaf_cone(std::uint32_t i, double r_lo, double r_hi) const;
  Cone internal_cone(std::uint32_t i, const std::vector<Cone>& cones);
  void evaluate(double r_lo, double r_hi);

  const CouplingTree& tree_;
  double slack_;  // 5 / t*
  double tol_;
  std::vector<std::uint8_t> dependent_;
  std::vector<Cone> fixed_;
  std::vector<Cone> work_;
  std::size_t lp_solves_ = 0;
};

struct RatioBracket {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double gamma = 0.0;
};

struct SearchStats {
  std::size_t feasibility_checks = 0;
  std::size_t node_lp_solves = 0;
  double lp_solve_ms = 0.0;
};

// Geometric bisection keeping a feasible bracket; prefers the lower half.
RatioBracket binary_search_ratio(const CouplingTree& tree, const RatioBracket& initial, double target_width,
                                 double t_star, double tol, SearchStats* stats = nullptr);

struct MarginalOptions {
  double tol = 1e-9;
  double delta = 1e-6;
  std::optional<std::pair<double, double>> bracket;  // overrides the initial bracket
  TreeOptions tree;
  unsigned threads = 1;
};

struct ColourRatio {
  Colour colour = 0;
  double r_lo = 1.0;
  double r_hi = 1.0;
  std::size_t tree_nodes = 0;
};

struct MarginalEstimate {
  double p_hat = 0.0;
  double bracket_lo = 0.0;  // bounds on the marginal implied by the ratio brackets
  double bracket_hi = 0.0;
  double gamma = 0.0;
  std::size_t tree_nodes = 0;
  std::size_t lp_constraints = 0;
  double lp_solve_ms = 0.0;
  std::vector<ColourRatio> ratios;
};

// Initial bracket for marginal(c')/marginal(c): marginal bounds when the
// instance satisfies the local lemma with slack t >= k, else [delta, 1/delta].
RatioBracket initial_ratio_bracket(const Instance& inst, double delta);

// A ratio found outside [delta, 1/delta] is reported as the one-sided bracket
// [0, delta] (counted as 0) or [1/delta, inf] (driving the estimate to 0).
// When no bracket is feasible because a root colour has no proper
// extension, the ratio is settled exactly as 0 or inf.
MarginalEstimate estimate_marginal(const Instance& inst, Vertex v, Colour c, double eps, const AlgoParams& params,
                                   const MarginalOptions& opts = {});

// Exact masses realised by the optimal coupling: p^x = mu * |C1| / |C_x| on
// x-consistent nodes; an x-inconsistent node inherits its parent's x-mass on
// the diagonal child and 0 elsewhere. Symmetric on the y side.
struct TrueValues {
  std::vector<Rational> px;
  std::vector<Rational> py;
  Rational ratio;  // |C1| / |C2|
};

TrueValues true_lp_values(const CouplingTree& tree, const OracleOptions& opts = {});

struct TruthReport {
  bool leaf_ratio_ok = true;
  bool mass_ok = true;
  bool off_diagonal_ok = true;
  std::size_t off_diagonal_violations = 0;
  std::string first_failure;
};

// Checks the three constraint families exactly at r_lo = r_hi = ratio.
TruthReport check_truth(const CouplingTree& tree, const TrueValues& tv, const Rational& t_star);

}  // namespace chromatic
