#include <rqp/qp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rqp {

AssembledQp assemble(const std::vector<TaskBlock>& tasks, const Mat& S, const Vec& kappa,
                     double w0, const std::vector<IneqRow>& rows, double eps_reg) {
  if (!(w0 > 0.0)) throw std::invalid_argument("assemble: w0 must be > 0");
  if (!(eps_reg > 0.0)) throw std::invalid_argument("assemble: eps_reg must be > 0");
  const int n = static_cast<int>(S.cols());
  if (S.rows() != kappa.size()) throw std::invalid_argument("assemble: posture dimension mismatch");
  AssembledQp out;
  out.tasks = tasks;
  out.qp.H = w0 * S.transpose() * S + eps_reg * Mat::Identity(n, n);
  out.qp.g = w0 * S.transpose() * kappa;
  for (const auto& t : tasks) {
    if (t.w < 0.0) throw std::invalid_argument("assemble: task weight must be >= 0");
    if (t.J.cols() != n || t.J.rows() != t.r.size())
      throw std::invalid_argument("assemble: task block dimension mismatch");
    out.qp.H += t.w * t.J.transpose() * t.J;
    out.qp.g += t.w * t.J.transpose() * t.r;
  }
  out.qp.A.resize(static_cast<int>(rows.size()), n);
  out.qp.b.resize(static_cast<int>(rows.size()));
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    if (rows[i].a.size() != n) throw std::invalid_argument("assemble: constraint row dimension mismatch");
    out.qp.A.row(i) = rows[i].a;
    out.qp.b[i] = rows[i].b;
  }
  return out;
}

double kkt_residual(const QpProblem& p, const Vec& u, const Vec& duals) {
  double res = (p.H * u + p.g + p.A.transpose() * duals).cwiseAbs().maxCoeff();
  if (p.n_ineq() > 0) {
    const Vec slack = p.A * u - p.b;  // <= 0 when feasible
    res = std::max(res, slack.maxCoeff());
    res = std::max(res, (-duals).maxCoeff());
    res = std::max(res, duals.cwiseProduct(slack).cwiseAbs().maxCoeff());
  }
  return std::max(res, 0.0);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GiResult {
  Vec u;
  Vec duals;
  std::vector<int> active;
  bool infeasible = false;
  std::vector<int> conflict;  // raw conflicting working set (not yet minimal)
};

double violation(const QpProblem& p, const Vec& u, int i) {
  return p.A.row(i).dot(u) - p.b[i];
}

bool is_violated(const QpProblem& p, const Vec& u, int i) {
  return violation(p, u, i) > 1e-10 * (1.0 + std::abs(p.b[i]));
}

// Dual active-set iteration (Goldfarb-Idnani scheme, constraints handled in
// the n'u >= d form with n = -a'). Factorizations are recomputed per
// iteration; problem sizes here are tiny.
GiResult gi_solve(const QpProblem& p, const std::vector<int>& warm) {
  const int n = p.dim();
  const int k = p.n_ineq();
  if (p.H.rows() != n || p.H.cols() != n)
    throw std::invalid_argument("qp solve: Hessian dimension mismatch");
  if ((p.H - p.H.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + p.H.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("qp solve: Hessian must be symmetric");
  Eigen::LLT<Mat> llt(p.H);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("qp solve: Hessian must be positive-definite");

  GiResult res;
  res.u = -llt.solve(p.g);
  res.duals = Vec::Zero(k);
  std::vector<int> W;
  std::vector<double> lamW;

  const int max_iter = 100 * (k + 2);
  int iter = 0;
  while (true) {
    // pick a violated row: warm-start rows first, then the most violated
    int pick = -1;
    for (int w : warm) {
      if (w >= 0 && w < k && std::find(W.begin(), W.end(), w) == W.end() &&
          is_violated(p, res.u, w)) {
        pick = w;
        break;
      }
    }
    if (pick < 0) {
      double worst = 0;
      for (int i = 0; i < k; ++i) {
        if (std::find(W.begin(), W.end(), i) != W.end()) continue;
        const double v = violation(p, res.u, i);
        if (is_violated(p, res.u, i) && v > worst) {
          worst = v;
          pick = i;
        }
      }
    }
    if (pick < 0) break;  // primal feasible: done

    double lam_p = 0.0;
    const Vec np = -p.A.row(pick).transpose();
    while (true) {
      if (++iter > max_iter) throw std::runtime_error("qp solve: active-set iteration cap hit");
      const Vec hi_np = llt.solve(np);
      Vec z;
      Vec r;
      if (W.empty()) {
        z = hi_np;
      } else {
        Mat N(n, static_cast<int>(W.size()));
        for (size_t j = 0; j < W.size(); ++j) N.col(static_cast<int>(j)) = -p.A.row(W[j]).transpose();
        const Mat hi_N = llt.solve(N);
        const Mat B = N.transpose() * hi_N;
        r = B.fullPivLu().solve(N.transpose() * hi_np);
        z = hi_np - hi_N * r;
      }
      const double ztnp = z.dot(np);
      const double s = np.dot(res.u) + p.b[pick];  // n'u - d, negative when violated
      double t2 = kInf;
      if (ztnp > 1e-14 * (1.0 + np.squaredNorm())) t2 = -s / ztnp;
      double t1 = kInf;
      int drop = -1;
      for (size_t j = 0; j < W.size(); ++j) {
        if (r.size() > 0 && r[static_cast<int>(j)] > 1e-12) {
          const double ratio = lamW[j] / r[static_cast<int>(j)];
          if (ratio < t1) {
            t1 = ratio;
            drop = static_cast<int>(j);
          }
        }
      }
      if (t1 == kInf && t2 == kInf) {
        res.infeasible = true;
        res.conflict = W;
        res.conflict.push_back(pick);
        std::sort(res.conflict.begin(), res.conflict.end());
        return res;
      }
      const double t = std::min(t1, t2);
      if (t2 < kInf) res.u += t * z;
      for (size_t j = 0; j < W.size(); ++j)
        if (r.size() > 0) lamW[j] -= t * r[static_cast<int>(j)];
      lam_p += t;
      if (t == t2) {
        W.push_back(pick);
        lamW.push_back(lam_p);
        break;
      }
      // dual step was blocking: drop the constraint and retry the same row
      W.erase(W.begin() + drop);
      lamW.erase(lamW.begin() + drop);
    }
  }

  res.active = W;
  std::sort(res.active.begin(), res.active.end());
  for (size_t j = 0; j < W.size(); ++j) res.duals[W[j]] = lamW[j];
  return res;
}

bool rows_feasible(const QpProblem& p, const std::vector<int>& rows) {
  QpProblem sub;
  const int n = p.dim();
  sub.H = Mat::Identity(n, n);
  sub.g = Vec::Zero(n);
  sub.A.resize(static_cast<int>(rows.size()), n);
  sub.b.resize(static_cast<int>(rows.size()));
  for (size_t j = 0; j < rows.size(); ++j) {
    sub.A.row(static_cast<int>(j)) = p.A.row(rows[j]);
    sub.b[static_cast<int>(j)] = p.b[rows[j]];
  }
  return !gi_solve(sub, {}).infeasible;
}

// Deletion filter: shrink the conflicting set to an irreducible subset.
std::vector<int> minimal_conflict(const QpProblem& p, std::vector<int> conflict) {
  for (size_t i = 0; i < conflict.size();) {
    std::vector<int> trial = conflict;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (!rows_feasible(p, trial)) {
      conflict = trial;  // row i was not needed for the conflict
    } else {
      ++i;
    }
  }
  return conflict;
}

}  // namespace

QpSolution QpSolver::solve(const QpProblem& p) {
  GiResult gi = gi_solve(p, warm_);
  QpSolution sol;
  sol.u = gi.u;
  sol.duals = gi.duals;
  sol.active_set = gi.active;
  sol.infeasible = gi.infeasible;
  if (gi.infeasible) {
    sol.conflict_rows = minimal_conflict(p, gi.conflict);
    sol.kkt_residual = kInf;
    return sol;
  }
  sol.kkt_residual = kkt_residual(p, sol.u, sol.duals);
  warm_ = sol.active_set;
  return sol;
}

QpSolution solve_assembled(const AssembledQp& a, QpSolver& solver) {
  QpSolution sol = solver.solve(a.qp);
  if (!sol.infeasible) {
    sol.slack_per_task.reserve(a.tasks.size());
    for (const auto& t : a.tasks) sol.slack_per_task.push_back(t.J * sol.u + t.r);
  }
  return sol;
}

}  // namespace rqp
