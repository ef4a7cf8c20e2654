#pragma once

#include <rqp/control.hpp>
#include <rqp/types.hpp>

#include <vector>

namespace rqp {

// Dense strictly convex QP: min 0.5 u'Hu + g'u  s.t.  A u <= b.
struct QpProblem {
  Mat H;
  Vec g;
  Mat A;
  Vec b;

  int dim() const { return static_cast<int>(g.size()); }
  int n_ineq() const { return static_cast<int>(b.size()); }
};

struct QpSolution {
  Vec u;
  Vec duals;                    // one multiplier per inequality row (0 when inactive)
  std::vector<int> active_set;  // row indices at equality
  double kkt_residual = 0;
  bool infeasible = false;
  std::vector<int> conflict_rows;      // irreducible conflicting subset when infeasible
  std::vector<Vec> slack_per_task;     // filled by solve_assembled
};

// One weighted task block: minimize w*||J u + r||^2 where r is the affine
// residual at u = 0 (Jdot*alpha - sddot_ref - mu on the integrator side).
struct TaskBlock {
  Mat J;
  Vec r;
  double w = 1.0;
};

struct AssembledQp {
  QpProblem qp;
  std::vector<TaskBlock> tasks;
};

inline constexpr double kQpRegFloor = 1e-9;

// H = sum w_j J_j'J_j + w0 S'S + eps_reg I, g = sum w_j J_j'r_j + w0 S'kappa.
// Throws std::invalid_argument when w0 <= 0 or any w_j < 0.
AssembledQp assemble(const std::vector<TaskBlock>& tasks, const Mat& S, const Vec& kappa,
                     double w0, const std::vector<IneqRow>& rows,
                     double eps_reg = kQpRegFloor);

// max of the stationarity / primal feasibility / dual feasibility /
// complementarity residuals.
double kkt_residual(const QpProblem& p, const Vec& u, const Vec& duals);

// Dual (Goldfarb-Idnani style) active-set solver for strictly convex dense
// QPs: start at the unconstrained optimum and add violated rows one at a
// time, taking partial dual steps that may drop blocking rows from the
// working set. A solver instance keeps the last active set as a warm start
// (used as a row-selection priority); it is deterministic either way.
class QpSolver {
 public:
  QpSolution solve(const QpProblem& p);
  void reset() { warm_.clear(); }

 private:
  std::vector<int> warm_;
};

// Convenience wrapper: solve and fill slack_per_task (delta_j = J_j u + r_j).
QpSolution solve_assembled(const AssembledQp& a, QpSolver& solver);

}  // namespace rqp
