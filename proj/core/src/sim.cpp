#include <rqp/sim.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rqp {

namespace {

Vec sample_setpoint(const std::vector<SetPoint>& refs, double t, int dim) {
  Vec v = Vec::Zero(dim);
  for (const auto& sp : refs) {
    if (sp.t <= t) v = sp.value;
  }
  return v;
}

Vec sample_disturbance(const std::vector<DisturbancePulse>& pulses, double t, int n) {
  Vec tau = Vec::Zero(n);
  for (const auto& d : pulses) {
    if (t >= d.t_on && t < d.t_off) tau += d.tau;
  }
  return tau;
}

bool posture_enabled(const Scenario& s) { return s.posture.kp.size() != 0; }

TaskGains ramped_gains(const TaskConfig& task, const GainRamp& ramp, double t) {
  TaskGains g = task.gains;
  if (!ramp.enabled || t < ramp.t0) return g;
  const int episode = static_cast<int>(std::floor((t - ramp.t0) / ramp.period));
  const double ks = ramp.ks0 + ramp.increment * episode;
  const double kd = ramp.kd_factor * std::sqrt(ks);
  const double ki = task.law == TaskLaw::Heterogeneous ? ramp.eps_i * kd : 0.0;
  g.ks.setConstant(ks);
  g.kd.setConstant(kd);
  g.ki.setConstant(ki);
  return g;
}

}  // namespace

void Scenario::validate() const {
  if (joints.empty()) throw std::invalid_argument("scenario: joints must be non-empty");
  for (const auto& j : joints) j.validate();
  if (chain) {
    chain->validate();
    if (chain->dof() != dof()) throw std::invalid_argument("scenario: chain/joints size mismatch");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("scenario: dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("scenario: t_end must be > 0");
  if (substeps < 1) throw std::invalid_argument("scenario: substeps must be >= 1");
  if (!(blow_up_cap > 0.0)) throw std::invalid_argument("scenario: blow_up_cap must be > 0");
  if (q0.size() != dof() || qd0.size() != dof())
    throw std::invalid_argument("scenario: q0/qd0 must match the joint count");
  if (tasks.empty()) throw std::invalid_argument("scenario: tasks must be non-empty");
  for (const auto& task : tasks) {
    const int m = task.kind == TaskKind::JointSpace ? dof() : 2;
    if (task.kind == TaskKind::PlanarPosition && !chain)
      throw std::invalid_argument("scenario: planar task requires a chain");
    if (task.gains.ks.size() != m || task.gains.kd.size() != m || task.gains.ki.size() != m)
      throw std::invalid_argument("scenario: task gain dimension mismatch");
    if (task.law == TaskLaw::OutputFeedback) {
      if ((task.gains.ks.array() <= 0.0).any() || (task.gains.kd.array() <= 0.0).any())
        throw std::invalid_argument("scenario: output-feedback gains must be > 0");
    } else {
      task.gains.validate();
    }
    if (task.weight < 0.0) throw std::invalid_argument("scenario: task weight must be >= 0");
    if (task.refs.empty()) throw std::invalid_argument("scenario: task needs at least one set-point");
    for (size_t i = 0; i < task.refs.size(); ++i) {
      if (task.refs[i].value.size() != m)
        throw std::invalid_argument("scenario: set-point dimension mismatch");
      if (i > 0 && task.refs[i].t < task.refs[i - 1].t)
        throw std::invalid_argument("scenario: set-points must be sorted by time");
    }
  }
  for (const auto& bar : barriers) {
    if (bar.geom.form == BarrierForm::HalfPlane && !chain)
      throw std::invalid_argument("scenario: half-plane barrier requires a chain");
    if (bar.geom.form != BarrierForm::HalfPlane &&
        (bar.geom.joint < 0 || bar.geom.joint >= dof()))
      throw std::invalid_argument("scenario: barrier joint index out of range");
    if (!(bar.gains.ks > 0.0)) throw std::invalid_argument("scenario: barrier ks must be > 0");
    if (bar.mode == BarrierMode::Recbf && !(bar.gains.ki > 0.0))
      throw std::invalid_argument("scenario: recbf barrier needs ki > 0");
  }
  for (size_t i = 0; i < disturbances.size(); ++i) {
    if (disturbances[i].tau.size() != dof())
      throw std::invalid_argument("scenario: disturbance dimension mismatch");
    if (disturbances[i].t_off < disturbances[i].t_on)
      throw std::invalid_argument("scenario: disturbance window reversed");
    if (i > 0 && disturbances[i].t_on < disturbances[i - 1].t_on)
      throw std::invalid_argument("scenario: disturbances must be sorted by time");
  }
  if (ramp.enabled && (!(ramp.period > 0.0) || !(ramp.ks0 > 0.0)))
    throw std::invalid_argument("scenario: ramp needs period > 0 and ks0 > 0");
  if (!(posture.w0 > 0.0)) throw std::invalid_argument("scenario: posture w0 must be > 0");
  if (posture.kp.size() != 0 &&
      (posture.kp.size() != dof() || posture.kv.size() != dof() || posture.q_ref.size() != dof()))
    throw std::invalid_argument("scenario: posture gain dimension mismatch");
  if (!(metrics.osc_window > 0.0))
    throw std::invalid_argument("scenario: oscillation window must be > 0");
}

SimLog run_scenario(const Scenario& s) {
  s.validate();
  const int n = s.dof();
  const int steps = static_cast<int>(std::llround(s.t_end / s.dt));

  ServoPlant plant{s.joints};
  PlantState x{s.q0, s.qd0};
  DesiredState xd{s.q0, s.qd0};

  std::vector<TaskMap> maps;
  for (const auto& task : s.tasks) maps.push_back(TaskMap{task.kind, s.chain});

  SimLog log;
  log.dt = s.dt;
  log.metrics = s.metrics;
  log.barriers.resize(s.barriers.size());
  QpSolver solver;
  Vec u_prev = Vec::Zero(n);

  for (int i = 0; i < steps; ++i) {
    const double t = i * s.dt;
    const Vec tau_l = sample_disturbance(s.disturbances, t, n);

    // task feedback terms, both paths evaluated at time t
    std::vector<TaskBlock> blocks;
    Vec mu_all;
    Vec e0;
    for (size_t ti = 0; ti < s.tasks.size(); ++ti) {
      const auto& task = s.tasks[ti];
      const auto& map = maps[ti];
      const int m = map.task_dim(n);
      TaskRefs refs;
      refs.s_ref = sample_setpoint(task.refs, t, m);
      refs.sdot_ref = Vec::Zero(m);
      refs.sddot_ref = Vec::Zero(m);
      const TaskState eta = task_state(map, refs, x.q, x.qd);
      const TaskState eta_d = task_state(map, refs, xd.q, xd.qd);
      const TaskGains gains = ramped_gains(task, s.ramp, t);
      Vec mu;
      if (task.law == TaskLaw::OutputFeedback) {
        mu = mu_output_feedback(gains.ks, gains.kd, eta);
      } else {
        mu = mu_heterogeneous(gains, TaskPsi{eta.e, eta.e_dot, eta_d.e_dot});
      }
      TaskBlock blk;
      blk.J = task_jacobian(map, xd.q);
      blk.r = task_jacobian_dot(map, xd.q, xd.qd) * xd.qd - refs.sddot_ref - mu;
      blk.w = task.weight;
      blocks.push_back(std::move(blk));
      if (ti == 0) e0 = eta.e;
      mu_all.conservativeResize(mu_all.size() + m);
      mu_all.tail(m) = mu;
    }

    // barrier rows
    std::vector<IneqRow> rows;
    for (size_t bi = 0; bi < s.barriers.size(); ++bi) {
      const auto& bar = s.barriers[bi];
      const BarrierState bs = barrier_state(bar.geom, s.chain, x.q, x.qd);
      const BarrierState bs_d = barrier_state(bar.geom, s.chain, xd.q, xd.qd);
      auto& trace = log.barriers[bi];
      trace.h.push_back(bs.h);
      trace.h_d.push_back(bs_d.h);
      trace.h_dot.push_back(bs.h_dot);
      trace.h_dot_d.push_back(bs_d.h_dot);
      const bool active = bar.always_active || bs.h <= bar.activate_h;
      trace.active.push_back(active ? 1 : 0);
      if (!active) continue;
      const RowVec j_h_d = barrier_jacobian(bar.geom, s.chain, xd.q);
      const double jdot_alpha_d = barrier_jdot_alpha(bar.geom, s.chain, xd.q, xd.qd);
      // relative-degree-1 forms only carry the stiffness term
      BarrierGains g = bar.gains;
      BarrierState bsm = bs, bsd = bs_d;
      double hdot_d = bs_d.h_dot;
      if (barrier_relative_degree(bar.geom.form) == 1) {
        g.kd = 0.0;
        bsm.h_dot = bsd.h_dot = hdot_d = 0.0;
      }
      switch (bar.mode) {
        case BarrierMode::FeedforwardEcbf:
          rows.push_back(ecbf_row_feedforward(g, bsd, j_h_d, jdot_alpha_d));
          break;
        case BarrierMode::FeedbackEcbf:
          rows.push_back(ecbf_row_feedback(g, bsm, j_h_d, jdot_alpha_d));
          break;
        case BarrierMode::Recbf:
          rows.push_back(recbf_row(g, BarrierPsi{bsm.h, bsm.h_dot, hdot_d}, j_h_d, jdot_alpha_d));
          break;
      }
    }

    Vec kappa = Vec::Zero(n);
    if (posture_enabled(s)) {
      kappa = posture_feedback(s.posture.kp, s.posture.kv, RobotState{x.q, x.qd}, s.posture.q_ref);
    }
    const AssembledQp asm_qp = assemble(blocks, Mat::Identity(n, n), kappa, s.posture.w0, rows);
    const QpSolution sol = solve_assembled(asm_qp, solver);

    Vec u;
    if (sol.infeasible) {
      u = u_prev;  // freeze the command for this step and flag the run
      if (!log.infeasible) {
        log.infeasible = true;
        log.infeasible_step = i;
        log.conflict_rows = sol.conflict_rows;
      }
    } else {
      u = sol.u;
    }

    log.t.push_back(t);
    log.q.push_back(x.q);
    log.qd.push_back(x.qd);
    log.q_d.push_back(xd.q);
    log.qd_d.push_back(xd.qd);
    log.u.push_back(u);
    log.mu.push_back(mu_all);
    log.task_err.push_back(e0);
    log.kkt.push_back(sol.infeasible ? -1.0 : sol.kkt_residual);
    log.active_set.push_back(sol.active_set);

    xd = integrate_desired(xd, u, s.dt);
    x = plant.step(x, xd, tau_l, s.dt, s.substeps);
    u_prev = u;

    if (exceeds_cap(x, s.blow_up_cap) ||
        exceeds_cap(PlantState{xd.q, xd.qd}, s.blow_up_cap)) {
      log.blew_up = true;
      break;
    }
  }
  return log;
}

namespace {

double peak_to_peak(const std::vector<double>& y, int begin, int end) {
  double lo = y[begin], hi = y[begin];
  for (int i = begin; i < end; ++i) {
    lo = std::min(lo, y[i]);
    hi = std::max(hi, y[i]);
  }
  return hi - lo;
}

}  // namespace

Metrics compute_metrics(const SimLog& log, double window) {
  if (log.steps() == 0) throw std::invalid_argument("compute_metrics: empty log");
  const int n_steps = log.steps();
  if (window > n_steps * log.dt + 1e-12)
    throw std::invalid_argument("compute_metrics: window longer than the log");

  std::vector<double> y(n_steps);
  for (int i = 0; i < n_steps; ++i) y[i] = log.task_err[i][0];

  Metrics m;
  m.steady_state_error = log.task_err.back().norm();

  // settling: last time the signal leaves the band around its final value
  const double yf = y.back();
  m.settling_time = 0.0;
  for (int i = n_steps - 1; i >= 0; --i) {
    if (std::abs(y[i] - yf) > log.metrics.settle_band) {
      m.settling_time = (i + 1) * log.dt;
      break;
    }
  }

  // oscillation index: peak-to-peak of the last window over the one before
  int w = static_cast<int>(std::llround(window / log.dt));
  w = std::max(1, std::min(w, n_steps / 2));
  const double p2p_last = peak_to_peak(y, n_steps - w, n_steps);
  const double p2p_prev = peak_to_peak(y, n_steps - 2 * w, n_steps - w);
  if (p2p_last < log.metrics.noise_floor || p2p_prev < 1e-12) {
    m.oscillation_index = 0.0;
  } else {
    m.oscillation_index = p2p_last / p2p_prev;
  }

  for (const auto& trace : log.barriers) {
    double worst = 0.0;
    double ttb = -1.0;
    for (size_t i = 0; i < trace.h.size(); ++i) {
      worst = std::max(worst, -trace.h[i]);
      if (ttb < 0.0 && trace.h[i] <= log.metrics.ttb_threshold)
        ttb = static_cast<double>(i) * log.dt;
    }
    m.overshoot_beyond_boundary = std::max(m.overshoot_beyond_boundary, worst);
    m.time_to_boundary.push_back(ttb);
  }

  m.instability_flag =
      log.blew_up || (m.oscillation_index >= 0.95 && p2p_last >= log.metrics.noise_floor);
  return m;
}

std::vector<BatchResult> batch_run(const std::vector<Scenario>& scenarios) {
  std::vector<BatchResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    BatchResult r;
    r.id = s.id;
    try {
      const SimLog log = run_scenario(s);
      r.metrics = compute_metrics(log, s.metrics.osc_window);
      r.ok = true;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rqp
