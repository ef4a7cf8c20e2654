#include <doctest.h>

#include <rqp/builtins.hpp>
#include <rqp/scenario_io.hpp>
#include <rqp/sim.hpp>

#include <algorithm>
#include <cmath>

using namespace rqp;

namespace {

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

SimLog synthetic_log(const std::vector<double>& y, double dt = 1e-3) {
  SimLog log;
  log.dt = dt;
  for (size_t i = 0; i < y.size(); ++i) {
    log.t.push_back(i * dt);
    log.q.push_back(v1(y[i]));
    log.qd.push_back(v1(0));
    log.q_d.push_back(v1(y[i]));
    log.qd_d.push_back(v1(0));
    log.u.push_back(v1(0));
    log.mu.push_back(v1(0));
    log.task_err.push_back(v1(y[i]));
    log.kkt.push_back(0);
    log.active_set.push_back({});
  }
  return log;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("low-gain output feedback settles on the reference") {
  const Scenario s = builtin_scenario("fig4-left");
  const SimLog log = run_scenario(s);
  const Metrics m = compute_metrics(log, s.metrics.osc_window);
  CHECK(m.steady_state_error <= 0.02);
  CHECK(m.oscillation_index < 0.5);
  CHECK_FALSE(m.instability_flag);
  CHECK(log.steps() == 10000);
}

TEST_CASE("runs are deterministic") {
  const Scenario s = builtin_scenario("fig4-left");
  const SimLog a = run_scenario(s);
  const SimLog b = run_scenario(s);
  CHECK(log_to_csv(a) == log_to_csv(b));
}

TEST_CASE("metrics on synthetic logs") {
  // constant at the reference
  const SimLog flat = synthetic_log(std::vector<double>(5000, 0.0));
  const Metrics mf = compute_metrics(flat, 2.0);
  CHECK(mf.settling_time == 0.0);
  CHECK(mf.oscillation_index == 0.0);
  CHECK_FALSE(mf.instability_flag);

  // pure sine: sustained oscillation
  std::vector<double> sine(8000);
  for (size_t i = 0; i < sine.size(); ++i) sine[i] = 0.3 * std::sin(2.0 * 3.14159265 * i * 1e-3);
  const Metrics ms = compute_metrics(synthetic_log(sine), 2.0);
  CHECK(ms.oscillation_index == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ms.instability_flag);

  CHECK_THROWS_AS(compute_metrics(flat, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_metrics(SimLog{}, 1.0), std::invalid_argument);
}

TEST_CASE("loop matches a directly-wired reference controller") {
  // with a near-zero regularizer the QP step reduces to u = mu
  Scenario s = builtin_scenario("fig4-left");
  s.posture.w0 = 1e-12;
  s.t_end = 2.0;
  const SimLog log = run_scenario(s);

  const ServoParams p = presets::system1();
  const Vec ks = s.tasks[0].gains.ks, kd = s.tasks[0].gains.kd;
  DesiredState xd{v1(0), v1(0)};
  Vec2 x{0.0, 0.0};
  double worst = 0.0;
  for (int i = 0; i < log.steps(); ++i) {
    worst = std::max(worst, std::abs(x[0] - log.q[i][0]));
    const Vec mu = mu_output_feedback(ks, kd, TaskState{v1(x[0] - 1.0), v1(x[1])});
    xd = integrate_desired(xd, mu, s.dt);
    x = step_joint(p, x, xd.q[0], xd.qd[0], 0.0, s.dt, s.substeps);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("integral feedback rejects a constant disturbance") {
  const Scenario s = builtin_scenario("fig8-eps-1");
  const SimLog log = run_scenario(s);
  const Metrics m = compute_metrics(log, s.metrics.osc_window);
  CHECK_FALSE(m.instability_flag);
  // terminal error stays below the open-loop servo offset
  CHECK(m.steady_state_error <= 0.0625);
  // the integrator-side state drifts to counterbalance the disturbance
  CHECK(log.q_d.back()[0] < 1.0);
}

TEST_CASE("feedforward barrier keeps the integrator side inside the set") {
  const Scenario s = builtin_scenario("fig7-ffwd");
  const SimLog log = run_scenario(s);
  const auto& trace = log.barriers[0];
  for (size_t i = 0; i < trace.h_d.size(); ++i) {
    if (trace.active[i]) CHECK(trace.h_d[i] >= -1e-6);
  }
}

TEST_CASE("conflicting barrier rows freeze the command and flag the run") {
  Scenario s = builtin_scenario("fig4-left");
  s.id = "conflict";
  BarrierConfig upper;
  upper.geom.form = BarrierForm::JointUpper;
  upper.geom.joint = 0;
  upper.geom.limit = 1.0;
  upper.mode = BarrierMode::FeedforwardEcbf;
  upper.gains = BarrierGains{10.0, 1.0, 0.0};
  upper.always_active = true;
  BarrierConfig lower = upper;
  lower.geom.form = BarrierForm::JointLower;
  lower.geom.limit = 2.0;  // q >= 2 contradicts q <= 1
  s.barriers = {upper, lower};
  s.t_end = 0.1;
  const SimLog log = run_scenario(s);
  CHECK(log.infeasible);
  CHECK(log.infeasible_step == 0);
  CHECK(log.conflict_rows.size() == 2);
  // frozen command: u stays at the previous value (zero at the first step)
  CHECK(log.u[0][0] == 0.0);
}

TEST_CASE("lyapunov function decays outside the robustness threshold") {
  // integrator-side error dynamics under the mixed law with a bounded
  // measured/desired discrepancy:
  //   eta_dot = [[0,1],[-ks,-(kd+ki)]] eta + [0, -ks w1 - kd w2]
  const double ks = 30.0, kd = 2.0 * std::sqrt(30.0), ki = kd;
  const Mat2 P = are_solve(ks, kd + ki, ki);
  const double eta_phi_inf = 0.05;
  const StabilityReport rep = robustness_margin(ks, kd, ki, P, eta_phi_inf, 0.5, 1e9);
  CHECK(rep.threshold > 0.0);

  Mat2 F;
  F << 0, 1, -ks, -(kd + ki);
  auto V = [&](const Vec2& eta) { return 0.5 * eta.dot(P * eta); };

  const double dt = 1e-4;
  Vec2 eta{3.0 * rep.threshold, 0.0};
  int checked = 0;
  for (int i = 0; i < 200000; ++i) {
    // adversarial discrepancy: worst-case aligned against the decay direction
    const Vec2 grad = P * eta;
    const double wmag = std::hypot(ks, kd) * eta_phi_inf;
    const Vec2 w{0.0, grad[1] >= 0.0 ? wmag : -wmag};
    const double v0 = V(eta);
    // RK4 with the disturbance held constant over the step
    auto f = [&](const Vec2& e) { return Vec2(F * e + w); };
    const Vec2 k1 = f(eta);
    const Vec2 k2 = f(eta + 0.5 * dt * k1);
    const Vec2 k3 = f(eta + 0.5 * dt * k2);
    const Vec2 k4 = f(eta + dt * k3);
    eta += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (eta.norm() > rep.threshold) {
      CHECK(V(eta) < v0);
      ++checked;
    }
  }
  CHECK(checked > 100);
  // the trajectory ends inside the ultimate bound
  const double lmin = Eigen::SelfAdjointEigenSolver<Mat2>(P).eigenvalues()[0];
  CHECK(eta.norm() <= rep.ultimate_bound + 1e-9);
  CHECK(rep.ultimate_bound >= rep.threshold);
  CHECK(lmin > 0.0);
}

TEST_CASE("batch runs are isolated and order-stable") {
  CHECK(batch_run({}).empty());

  Scenario good = builtin_scenario("fig4-left");
  good.t_end = 1.0;
  good.metrics.osc_window = 0.25;
  Scenario bad = good;
  bad.id = "broken";
  bad.dt = -1.0;
  const auto results = batch_run({good, bad, good});
  REQUIRE(results.size() == 3);
  CHECK(results[0].ok);
  CHECK_FALSE(results[1].ok);
  CHECK(results[1].id == "broken");
  CHECK_FALSE(results[1].error.empty());
  CHECK(results[2].ok);
  CHECK(results[0].metrics.steady_state_error == results[2].metrics.steady_state_error);
}

TEST_CASE("scenario validation names the offending field") {
  Scenario s = builtin_scenario("fig4-left");
  s.dt = 0.0;
  CHECK_THROWS_WITH_AS(s.validate(), "scenario: dt must be > 0", std::invalid_argument);
  s = builtin_scenario("fig4-left");
  s.tasks[0].refs.clear();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = builtin_scenario("fig4-left");
  s.q0.resize(2);
  s.q0 << 0, 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

}  // TEST_SUITE
