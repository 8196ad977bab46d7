#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace chromatic {

enum class RowSense { LessEqual, Equal, GreaterEqual };

// minimise c.x subject to A x (sense) b and x >= 0.
struct DenseLP {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<RowSense> sense;
  Eigen::VectorXd c;
};

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

struct SimplexOptions {
  double pivot_eps = 1e-10;
  double feasibility_eps = 1e-9;
  std::size_t max_iterations = 200000;
};

// Two-phase tableau simplex; Dantzig pricing with a switch to Bland's rule
// on degenerate runs. Deterministic.
LPSolution solve_dense(const DenseLP& lp, const SimplexOptions& opts = {});

}  // namespace chromatic
