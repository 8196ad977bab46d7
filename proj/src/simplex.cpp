#include "chromatic/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chromatic/core.hpp"

namespace chromatic {

namespace {

constexpr std::size_t kDegenerateSwitch = 50;

class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<Eigen::Index> basis, const SimplexOptions& opts)
      : t_(std::move(t)), basis_(std::move(basis)), opts_(opts) {}

  Eigen::MatrixXd& data() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs() const { return t_.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Dantzig pricing over columns [0, allowed), switching to Bland's rule
  // while pivots are degenerate so that the method cannot cycle.
  LPStatus optimise(Eigen::Index allowed) {
    const Eigen::Index obj = rows();
    std::size_t degenerate_run = 0;
    for (std::size_t it = 0; it < opts_.max_iterations; ++it) {
      const bool bland = degenerate_run >= kDegenerateSwitch;
      Eigen::Index enter = -1;
      double most = -opts_.pivot_eps;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        const double d = t_(obj, j);
        if (d < most) {
          enter = j;
          if (bland) break;
          most = d;
        }
      }
      if (enter < 0) return LPStatus::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < obj; ++i) {
        const double a = t_(i, enter);
        if (a <= opts_.pivot_eps) continue;
        const double ratio = t_(i, rhs()) / a;
        const bool tie = leave >= 0 && ratio <= best + 1e-12 &&
                         basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)];
        if (leave < 0 || ratio < best - 1e-12 || tie) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      degenerate_run = best <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
    return LPStatus::IterationLimit;
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  const SimplexOptions& opts_;
};

}  // namespace

LPSolution solve_dense(const DenseLP& lp, const SimplexOptions& opts) {
  const Eigen::Index m = lp.A.rows();
  const Eigen::Index n = lp.A.cols();
  if (lp.b.size() != m || static_cast<Eigen::Index>(lp.sense.size()) != m || lp.c.size() != n) {
    fail(ErrorKind::InvalidArgument, "inconsistent LP dimensions");
  }
  // Normalise to b >= 0, then count slack and artificial columns.
  Eigen::MatrixXd A = lp.A;
  Eigen::VectorXd b = lp.b;
  std::vector<RowSense> sense = lp.sense;
  Eigen::Index slacks = 0, artificials = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
      auto& s = sense[static_cast<std::size_t>(i)];
      if (s == RowSense::LessEqual) {
        s = RowSense::GreaterEqual;
      } else if (s == RowSense::GreaterEqual) {
        s = RowSense::LessEqual;
      }
    }
    const auto s = sense[static_cast<std::size_t>(i)];
    if (s != RowSense::Equal) ++slacks;
    if (s != RowSense::LessEqual) ++artificials;
  }
  const Eigen::Index cols = n + slacks + artificials;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  Eigen::Index next_slack = n, next_art = n + slacks;
  for (Eigen::Index i = 0; i < m; ++i) {
    t.row(i).head(n) = A.row(i);
    t(i, cols) = b(i);
    const auto s = sense[static_cast<std::size_t>(i)];
    if (s == RowSense::LessEqual) {
      t(i, next_slack) = 1.0;
      basis[static_cast<std::size_t>(i)] = next_slack++;
    } else {
      if (s == RowSense::GreaterEqual) t(i, next_slack++) = -1.0;
      t(i, next_art) = 1.0;
      t.row(m) -= t.row(i);
      t(m, next_art) += 1.0;
      basis[static_cast<std::size_t>(i)] = next_art++;
    }
  }
  Tableau tab(std::move(t), std::move(basis), opts);
  LPSolution out;
  if (artificials > 0) {
    const auto status = tab.optimise(cols);
    if (status == LPStatus::IterationLimit) {
      out.status = status;
      return out;
    }
    if (-tab.data()(m, cols) > opts.feasibility_eps) {
      out.status = LPStatus::Infeasible;
      return out;
    }
    // Pivot remaining artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < n + slacks) continue;
      for (Eigen::Index j = 0; j < n + slacks; ++j) {
        if (std::abs(tab.data()(i, j)) > opts.pivot_eps) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }
  auto& data = tab.data();
  data.row(m).setZero();
  data.row(m).head(n) = lp.c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bi = tab.basis()[static_cast<std::size_t>(i)];
    const double cb = bi < n ? lp.c(bi) : 0.0;
    if (cb != 0.0) data.row(m) -= cb * data.row(i);
  }
  out.status = tab.optimise(n + slacks);
  if (out.status != LPStatus::Optimal) return out;
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bi = tab.basis()[static_cast<std::size_t>(i)];
    if (bi < n) out.x(bi) = data(i, cols);
  }
  out.objective = lp.c.dot(out.x);
  return out;
}

}  // namespace chromatic
