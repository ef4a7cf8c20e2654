#include <rqp/accept.hpp>

#include <rqp/builtins.hpp>
#include <rqp/sim.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rqp::accept {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

CriterionResult make(int id, const std::string& name, bool pass, const std::string& detail) {
  return CriterionResult{id, name, pass, detail};
}

struct RunSummary {
  SimLog log;
  Metrics metrics;
};

RunSummary run_builtin(const std::string& name) {
  const Scenario s = builtin_scenario(name);
  RunSummary r;
  r.log = run_scenario(s);
  r.metrics = compute_metrics(r.log, s.metrics.osc_window);
  return r;
}

// --- closed-loop criteria -------------------------------------------------

CriterionResult crit1() {
  const RunSummary left = run_builtin("fig4-left");
  const RunSummary right = run_builtin("fig4-right");
  const bool ok_left = left.metrics.steady_state_error <= 0.02 &&
                       left.metrics.oscillation_index < 0.5 && !left.metrics.instability_flag;
  const bool ok_right = right.metrics.instability_flag;
  return make(1, "output-feedback stability split", ok_left && ok_right,
              "low-gain |e|=" + fmt(left.metrics.steady_state_error) +
                  " osc=" + fmt(left.metrics.oscillation_index) +
                  "; high-gain flag=" + (right.metrics.instability_flag ? "1" : "0"));
}

CriterionResult crit2() {
  const RunSummary lo = run_builtin("fig8-eps-0.01");
  const RunSummary mid = run_builtin("fig8-eps-1");
  const RunSummary hi = run_builtin("fig8-eps-2");
  const bool ok_lo = lo.metrics.oscillation_index >= 0.95;
  const bool ok_mid = !mid.metrics.instability_flag && mid.metrics.steady_state_error <= 0.07;
  const bool ok_hi = !hi.metrics.instability_flag && hi.metrics.steady_state_error <= 0.07;
  const bool ok_order = hi.metrics.settling_time > mid.metrics.settling_time;
  return make(2, "integral-gain sweep", ok_lo && ok_mid && ok_hi && ok_order,
              "osc(0.01)=" + fmt(lo.metrics.oscillation_index) +
                  " |e|(1)=" + fmt(mid.metrics.steady_state_error) +
                  " |e|(2)=" + fmt(hi.metrics.steady_state_error) + " settle " +
                  fmt(mid.metrics.settling_time) + " -> " + fmt(hi.metrics.settling_time));
}

double onset_correlation(const SimLog& log, double t_on, double span) {
  const int i0 = static_cast<int>(std::llround(t_on / log.dt));
  const int i1 = std::min(log.steps(), i0 + static_cast<int>(std::llround(span / log.dt)));
  double num = 0, na = 0, nb = 0;
  for (int i = i0; i < i1; ++i) {
    const double a = log.qd_d[i][0];
    const double b = log.qd[i][0];
    num += a * b;
    na += a * a;
    nb += b * b;
  }
  return num / (std::sqrt(na) * std::sqrt(nb) + 1e-300);
}

CriterionResult crit3() {
  const RunSummary a = run_builtin("fig10-a");
  const RunSummary b = run_builtin("fig10-b");
  const double corr_a = onset_correlation(a.log, 10.0, 0.5);
  const double corr_b = onset_correlation(b.log, 10.0, 0.5);
  return make(3, "compliant variant onset response", corr_b > 0.0 && corr_a < 0.0,
              "corr stiff=" + fmt(corr_a) + " corr compliant=" + fmt(corr_b));
}

CriterionResult crit4() {
  const RunSummary ffwd = run_builtin("fig7-ffwd");
  const RunSummary fb = run_builtin("fig7-fb");
  double min_h_d = 1e300;
  for (double v : ffwd.log.barriers[0].h_d) min_h_d = std::min(min_h_d, v);
  const double over = ffwd.metrics.overshoot_beyond_boundary;
  const bool ok_ffwd = over >= 0.008 && over <= 0.012 && min_h_d >= -1e-6;
  const bool ok_fb = fb.metrics.oscillation_index >= 0.95;
  return make(4, "barrier mode comparison", ok_ffwd && ok_fb,
              "ffwd max(-h)=" + fmt(over) + " min(h_d)=" + fmt(min_h_d) +
                  " fb osc=" + fmt(fb.metrics.oscillation_index));
}

CriterionResult crit5() {
  const RunSummary lo = run_builtin("fig12-eps-0.02");
  const RunSummary mid = run_builtin("fig12-eps-2");
  const RunSummary hi = run_builtin("fig12-eps-5");
  const bool ok_lo = lo.metrics.oscillation_index >= 0.95;
  const bool ok_mid =
      mid.metrics.oscillation_index < 0.95 && mid.metrics.overshoot_beyond_boundary <= 0.02;
  const double ttb_mid = mid.metrics.time_to_boundary[0];
  const double ttb_hi = hi.metrics.time_to_boundary[0];
  const bool ok_hi = hi.metrics.oscillation_index < 0.95 && ttb_hi > ttb_mid && ttb_mid > 0;
  return make(5, "robust barrier sweep", ok_lo && ok_mid && ok_hi,
              "osc(0.02)=" + fmt(lo.metrics.oscillation_index) +
                  " max(-h)(2)=" + fmt(mid.metrics.overshoot_beyond_boundary) + " ttb " +
                  fmt(ttb_mid) + " -> " + fmt(ttb_hi));
}

CriterionResult crit11() {
  Scenario s = builtin_scenario("fig7-ffwd");
  s.id = "comparison-lemma";
  s.disturbances.clear();  // disturbance-free plant
  const SimLog log = run_scenario(s);
  const auto& trace = log.barriers[0];
  int t0 = -1;
  for (size_t i = 0; i < trace.active.size(); ++i) {
    if (trace.active[i]) {
      t0 = static_cast<int>(i);
      break;
    }
  }
  if (t0 < 0) return make(11, "comparison-lemma bound", false, "barrier row never inserted");
  Mat2 F;
  F << 0.0, 1.0, -s.barriers[0].gains.ks, -s.barriers[0].gains.kd;
  const Mat2 M = (F * log.dt).exp();
  Vec2 eta{trace.h_d[t0], trace.h_dot_d[t0]};
  double worst = 1e300;
  for (int i = t0; i < log.steps(); ++i) {
    worst = std::min(worst, trace.h_d[i] - eta[0]);
    eta = M * eta;
  }
  return make(11, "comparison-lemma bound", worst >= -1e-6,
              "min(h_d - bound)=" + fmt(worst));
}

// --- qp oracle ------------------------------------------------------------

CriterionResult crit6() {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<int> nrows(0, 8);
  double worst_du = 0, worst_kkt = 0;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim(rng);
    const int k = nrows(rng);
    Mat M(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) M(r, c) = unit(rng);
    QpProblem p;
    p.H = M.transpose() * M + 0.3 * Mat::Identity(n, n);
    p.g.resize(n);
    for (int r = 0; r < n; ++r) p.g[r] = unit(rng);
    Vec u0(n);
    for (int r = 0; r < n; ++r) u0[r] = unit(rng);
    p.A.resize(k, n);
    p.b.resize(k);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < n; ++c) p.A(r, c) = unit(rng);
      p.b[r] = p.A.row(r).dot(u0) + std::abs(unit(rng));  // feasible at u0
    }
    QpSolver solver;
    const QpSolution sol = solver.solve(p);
    const QpSolution ref = solve_qp_bruteforce(p);
    if (sol.infeasible || ref.infeasible)
      return make(6, "qp oracle equivalence", false, "unexpected infeasibility verdict");
    worst_du = std::max(worst_du, (sol.u - ref.u).norm());
    worst_kkt = std::max(worst_kkt, sol.kkt_residual);
    ++checked;
  }
  const bool ok = worst_du <= 1e-8 && worst_kkt <= 1e-8;
  return make(6, "qp oracle equivalence", ok,
              fmt(checked * 1.0) + " problems, max|du|=" + fmt(worst_du) +
                  " max kkt=" + fmt(worst_kkt));
}

// --- analysis -------------------------------------------------------------

CriterionResult crit7() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> g1(0.5, 100.0);
  std::uniform_real_distribution<double> g2(0.1, 50.0);
  double worst_sym = 0, worst_res = 0, worst_min = 1e300;
  for (int i = 0; i < 50; ++i) {
    const double ks = g1(rng), kd = g2(rng), ki = g2(rng);
    const Mat2 P = are_solve(ks, kd, ki);
    Mat2 F;
    F << 0, 1, -ks, -kd;
    worst_sym = std::max(worst_sym, std::abs(P(0, 1) - P(1, 0)));
    worst_res = std::max(
        worst_res,
        (F.transpose() * P + P * F + ki * Mat2::Identity()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat2> es(P);
    worst_min = std::min(worst_min, es.eigenvalues()[0]);
  }
  const Mat2 Ph = are_solve(1.0, 2.0, 1.0);
  Mat2 Pref;
  Pref << 1.5, 0.5, 0.5, 0.5;
  const double hand_err = (Ph - Pref).cwiseAbs().maxCoeff();
  const bool ok = worst_sym <= 1e-12 && worst_res <= 1e-10 && worst_min > 0 && hand_err <= 1e-12;
  return make(7, "lyapunov solve suite", ok,
              "max residual=" + fmt(worst_res) + " min eig=" + fmt(worst_min) +
                  " hand case err=" + fmt(hand_err));
}

CriterionResult crit8() {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    const int m = 1 + (i % 3);
    TaskGains g;
    g.ks.resize(m);
    g.kd.resize(m);
    g.ki = Vec::Zero(m);
    TaskPsi psi;
    psi.e.resize(m);
    psi.e_dot.resize(m);
    psi.e_dot_d.resize(m);
    for (int c = 0; c < m; ++c) {
      g.ks[c] = pos(rng);
      g.kd[c] = pos(rng);
      psi.e[c] = unit(rng);
      psi.e_dot[c] = unit(rng);
      psi.e_dot_d[c] = unit(rng);
    }
    const Vec mu_h = mu_heterogeneous(g, psi);
    const Vec mu_o = mu_output_feedback(g.ks, g.kd, TaskState{psi.e, psi.e_dot});
    if (!(mu_h.array() == mu_o.array()).all()) ok = false;

    BarrierGains bg{pos(rng), pos(rng), 0.0};
    BarrierPsi bpsi{unit(rng), unit(rng), unit(rng)};
    RowVec j(2);
    j << unit(rng), unit(rng);
    const double jd = unit(rng);
    const IneqRow r1 = recbf_row(bg, bpsi, j, jd);
    const IneqRow r2 = ecbf_row_feedback(bg, BarrierState{bpsi.h, bpsi.h_dot}, j, jd);
    if (!(r1.a.array() == r2.a.array()).all() || r1.b != r2.b) ok = false;
  }
  return make(8, "recovery identities", ok, ok ? "exact on 1000 random inputs" : "mismatch");
}

// --- kinematics -----------------------------------------------------------

CriterionResult crit9() {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  double worst_j = 0, worst_jd = 0;
  for (int links = 2; links <= 3; ++links) {
    PlanarChain chain;
    chain.link_lengths = Vec::Constant(links, 1.0);
    chain.link_lengths[links - 1] = 0.7;
    for (int trial = 0; trial < 200; ++trial) {
      Vec q(links), qd(links), delta(links);
      for (int c = 0; c < links; ++c) {
        q[c] = ang(rng);
        qd[c] = vel(rng);
        delta[c] = ang(rng);
      }
      delta.normalize();
      const double eps = 1e-7;
      const Mat J = jacobian(chain, q);
      const Vec2 fd = (fk(chain, q + eps * delta) - fk(chain, q)) / eps;
      worst_j = std::max(worst_j, (fd - J * delta).norm());
      const Mat Jd = jacobian_dot(chain, q, qd);
      const Mat fdJ = (jacobian(chain, q + eps * qd) - J) / eps;
      worst_jd = std::max(worst_jd, (fdJ - Jd).cwiseAbs().maxCoeff());
    }
  }
  const bool ok = worst_j <= 1e-6 && worst_jd <= 1e-5;
  return make(9, "kinematics finite-difference suite", ok,
              "max J err=" + fmt(worst_j) + " max Jdot err=" + fmt(worst_jd));
}

// --- planar ramp ----------------------------------------------------------

CriterionResult crit10() {
  Scenario het = builtin_scenario("planar-gain-ramp");
  Scenario of = het;
  of.id = "planar-gain-ramp-output-feedback";
  for (auto& t : of.tasks) {
    t.law = TaskLaw::OutputFeedback;
    t.gains.ki.setZero();
  }
  const SimLog log_of = run_scenario(of);
  const SimLog log_het = run_scenario(het);
  const Metrics m_of = compute_metrics(log_of, of.metrics.osc_window);
  const Metrics m_het = compute_metrics(log_het, het.metrics.osc_window);
  const bool ok = m_of.instability_flag && !m_het.instability_flag;
  return make(10, "planar gain-ramp ordering", ok,
              std::string("output-feedback flag=") + (m_of.instability_flag ? "1" : "0") +
                  " (t=" + fmt(log_of.steps() * log_of.dt) + ") integral flag=" +
                  (m_het.instability_flag ? "1" : "0"));
}

}  // namespace

QpSolution solve_qp_bruteforce(const QpProblem& p) {
  const int n = p.dim();
  const int k = p.n_ineq();
  if (k > 24) throw std::invalid_argument("bruteforce oracle: too many rows");
  QpSolution best;
  best.infeasible = true;
  double best_obj = 1e300;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) act.push_back(i);
    const int na = static_cast<int>(act.size());
    Mat K(n + na, n + na);
    K.setZero();
    K.topLeftCorner(n, n) = p.H;
    Vec rhs(n + na);
    rhs.head(n) = -p.g;
    for (int i = 0; i < na; ++i) {
      K.block(n + i, 0, 1, n) = p.A.row(act[i]);
      K.block(0, n + i, n, 1) = p.A.row(act[i]).transpose();
      rhs[n + i] = p.b[act[i]];
    }
    Eigen::FullPivLU<Mat> lu(K);
    if (!lu.isInvertible()) continue;
    const Vec sol = lu.solve(rhs);
    const Vec u = sol.head(n);
    Vec duals = Vec::Zero(k);
    bool ok = true;
    for (int i = 0; i < na; ++i) {
      duals[act[i]] = sol[n + i];
      if (sol[n + i] < -1e-9) ok = false;
    }
    if (!ok) continue;
    for (int i = 0; i < k; ++i) {
      if (p.A.row(i).dot(u) > p.b[i] + 1e-9) ok = false;
    }
    if (!ok) continue;
    const double obj = 0.5 * u.dot(p.H * u) + p.g.dot(u);
    if (obj < best_obj) {
      best_obj = obj;
      best.u = u;
      best.duals = duals.cwiseMax(0.0);
      best.active_set = act;
      best.infeasible = false;
      best.kkt_residual = kkt_residual(p, u, best.duals);
    }
  }
  return best;
}

std::vector<std::string> suite_names() {
  return {"1dof", "qp-oracle", "analysis", "kinematics", "planar", "all"};
}

std::vector<CriterionResult> run_suite(const std::string& suite) {
  std::vector<CriterionResult> out;
  const bool all = suite == "all";
  if (all || suite == "1dof") {
    out.push_back(crit1());
    out.push_back(crit2());
    out.push_back(crit3());
    out.push_back(crit4());
    out.push_back(crit5());
    if (!all) out.push_back(crit11());
  }
  if (all || suite == "qp-oracle") out.push_back(crit6());
  if (all || suite == "analysis") {
    out.push_back(crit7());
    out.push_back(crit8());
  }
  if (all || suite == "kinematics") out.push_back(crit9());
  if (all || suite == "planar") out.push_back(crit10());
  if (all) out.push_back(crit11());
  if (out.empty()) throw std::invalid_argument("unknown acceptance suite: " + suite);
  return out;
}

}  // namespace rqp::accept
