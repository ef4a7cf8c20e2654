#include <rqp/builtins.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rqp {

namespace {

Vec vec1(double v) {
  Vec x(1);
  x << v;
  return x;
}

Vec vec2v(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

Scenario base_1dof(const std::string& id, const ServoParams& servo) {
  Scenario s;
  s.id = id;
  s.joints = {servo};
  s.q0 = vec1(0);
  s.qd0 = vec1(0);
  return s;
}

TaskConfig joint_task(TaskLaw law, double ks, double kd, double ki, double q_ref) {
  TaskConfig t;
  t.law = law;
  t.kind = TaskKind::JointSpace;
  t.gains.ks = vec1(ks);
  t.gains.kd = vec1(kd);
  t.gains.ki = vec1(ki);
  t.refs = {SetPoint{0.0, vec1(q_ref)}};
  return t;
}

DisturbancePulse const_torque(double tau, double t_on) {
  return DisturbancePulse{t_on, 1e9, vec1(tau)};
}

Scenario fig4(const std::string& id, double ks) {
  Scenario s = base_1dof(id, presets::system1());
  s.tasks = {joint_task(TaskLaw::OutputFeedback, ks, 2.0 * std::sqrt(ks), 0.0, 1.0)};
  s.t_end = 10.0;
  // the slowest closed-loop mode decays at ~0.36/s; a 3 s window keeps the
  // decaying tail clearly below the sustained-oscillation ratio
  s.metrics.osc_window = 3.0;
  return s;
}

Scenario fig8(const std::string& id, double eps) {
  Scenario s = base_1dof(id, presets::system1());
  const double kd = 2.0 * std::sqrt(30.0);
  s.tasks = {joint_task(TaskLaw::Heterogeneous, 30.0, kd, eps * kd, 1.0)};
  s.disturbances = {const_torque(5.0, 0.0)};
  s.t_end = 20.0;
  return s;
}

Scenario fig10(const std::string& id, double kd, double ki) {
  Scenario s = base_1dof(id, presets::system1());
  s.tasks = {joint_task(TaskLaw::Heterogeneous, 30.0, kd, ki, 1.0)};
  s.disturbances = {const_torque(5.0, 10.0)};
  s.t_end = 14.0;
  return s;
}

BarrierConfig joint_upper_barrier(BarrierMode mode, double ki_h) {
  BarrierConfig b;
  b.geom.form = BarrierForm::JointUpper;
  b.geom.joint = 0;
  b.geom.limit = 3.0;
  b.mode = mode;
  // repeated pole at -40: ks_h = 1600, kd_h = 80
  b.gains = BarrierGains{1600.0, 80.0, ki_h};
  b.activate_h = 4.0;
  return b;
}

Scenario fig7(const std::string& id, BarrierMode mode) {
  Scenario s = base_1dof(id, presets::system2());
  s.tasks = {joint_task(TaskLaw::OutputFeedback, 30.0, 2.0 * std::sqrt(30.0), 0.0, 5.0)};
  s.barriers = {joint_upper_barrier(mode, 0.0)};
  s.disturbances = {const_torque(5.0, 0.0)};
  s.t_end = 10.0;
  return s;
}

Scenario fig12(const std::string& id, double eps) {
  Scenario s = base_1dof(id, presets::system2());
  s.tasks = {joint_task(TaskLaw::OutputFeedback, 30.0, 2.0 * std::sqrt(30.0), 0.0, 5.0)};
  s.barriers = {joint_upper_barrier(BarrierMode::Recbf, eps * 80.0)};
  s.disturbances = {const_torque(5.0, 0.0)};
  s.t_end = 20.0;
  return s;
}

Scenario planar_gain_ramp() {
  Scenario s;
  s.id = "planar-gain-ramp";
  s.joints = {presets::underdamped(), presets::underdamped()};
  PlanarChain chain;
  chain.link_lengths = vec2v(1.0, 1.0);
  s.chain = chain;
  s.q0 = vec2v(0.8, 1.2);
  s.qd0 = vec2v(0.0, 0.0);

  const Vec2 p0 = fk(chain, s.q0);
  const Vec target_a = vec2v(p0[0] + 0.15, p0[1] - 0.15);
  const Vec target_b = vec2v(p0[0] - 0.15, p0[1] + 0.10);

  TaskConfig t;
  t.law = TaskLaw::Heterogeneous;
  t.kind = TaskKind::PlanarPosition;
  const double kd = 2.0 * std::sqrt(50.0);
  t.gains.ks = vec2v(50.0, 50.0);
  t.gains.kd = vec2v(kd, kd);
  t.gains.ki = vec2v(kd, kd);
  // alternate targets over the first episodes only, so the trailing metric
  // windows measure the closed loop rather than commanded switches
  for (int ep = 0; ep < 3; ++ep) {
    t.refs.push_back(SetPoint{2.0 * ep, ep % 2 == 0 ? target_a : target_b});
  }
  s.tasks = {t};

  s.ramp.enabled = true;
  s.ramp.t0 = 0.0;
  s.ramp.period = 2.0;
  s.ramp.ks0 = 50.0;
  s.ramp.increment = 50.0;
  s.ramp.kd_factor = 2.0;
  s.ramp.eps_i = 1.0;
  s.t_end = 12.0;
  return s;
}

Scenario planar_halfplane_recbf() {
  Scenario s;
  s.id = "planar-halfplane-recbf";
  s.joints = {presets::system1(), presets::system1()};
  PlanarChain chain;
  chain.link_lengths = vec2v(1.0, 1.0);
  s.chain = chain;
  s.q0 = vec2v(0.8, 1.2);
  s.qd0 = vec2v(0.0, 0.0);

  TaskConfig t;
  t.law = TaskLaw::Heterogeneous;
  t.kind = TaskKind::PlanarPosition;
  const double kd = 2.0 * std::sqrt(30.0);
  t.gains.ks = vec2v(30.0, 30.0);
  t.gains.kd = vec2v(kd, kd);
  t.gains.ki = vec2v(kd, kd);
  // target lies beyond the keep-out plane x <= 0.5
  t.refs = {SetPoint{0.0, vec2v(0.9, 1.4)}};
  s.tasks = {t};

  BarrierConfig b;
  b.geom.form = BarrierForm::HalfPlane;
  b.geom.normal = Vec2(-1.0, 0.0);
  b.geom.offset = 0.5;
  b.mode = BarrierMode::Recbf;
  b.gains = BarrierGains{100.0, 20.0, 40.0};  // pole -10, ki = 2*kd
  b.activate_h = 4.0;
  s.barriers = {b};

  // one pulse push and one persistent push
  s.disturbances = {DisturbancePulse{3.0, 3.5, vec2v(2.0, 2.0)},
                    DisturbancePulse{6.0, 1e9, vec2v(1.0, 1.0)}};
  s.t_end = 10.0;
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  out.push_back(fig4("fig4-left", 10.0));
  out.push_back(fig4("fig4-right", 30.0));
  out.push_back(fig7("fig7-ffwd", BarrierMode::FeedforwardEcbf));
  out.push_back(fig7("fig7-fb", BarrierMode::FeedbackEcbf));
  for (double eps : {0.01, 0.1, 1.0, 2.0}) {
    char id[32];
    std::snprintf(id, sizeof(id), "fig8-eps-%g", eps);
    out.push_back(fig8(id, eps));
  }
  out.push_back(fig10("fig10-a", 2.0 * std::sqrt(30.0), 2.0 * std::sqrt(30.0)));
  out.push_back(fig10("fig10-b", -1.8 * std::sqrt(30.0), 3.2 * std::sqrt(30.0)));
  for (double eps : {0.02, 0.2, 2.0, 5.0}) {
    char id[32];
    std::snprintf(id, sizeof(id), "fig12-eps-%g", eps);
    out.push_back(fig12(id, eps));
  }
  out.push_back(planar_gain_ramp());
  out.push_back(planar_halfplane_recbf());
  return out;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& s : builtin_scenarios()) names.push_back(s.id);
  return names;
}

Scenario builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.id == name) return s;
  }
  throw std::invalid_argument("unknown builtin scenario: " + name);
}

}  // namespace rqp
