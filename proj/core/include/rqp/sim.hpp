#pragma once

#include <rqp/control.hpp>
#include <rqp/kinematics.hpp>
#include <rqp/plant.hpp>
#include <rqp/qp.hpp>
#include <rqp/types.hpp>

#include <string>
#include <vector>

namespace rqp {

enum class TaskLaw { OutputFeedback, Heterogeneous };

// Piecewise-constant reference: value holds from time t onward.
struct SetPoint {
  double t = 0;
  Vec value;
};

struct TaskConfig {
  TaskLaw law = TaskLaw::OutputFeedback;
  TaskKind kind = TaskKind::JointSpace;
  TaskGains gains;
  std::vector<SetPoint> refs;
  double weight = 1.0;
};

enum class BarrierMode { FeedforwardEcbf, FeedbackEcbf, Recbf };

struct BarrierConfig {
  BarrierGeom geom;
  BarrierMode mode = BarrierMode::FeedforwardEcbf;
  BarrierGains gains;
  double activate_h = 4.0;     // row inserted once measured h <= activate_h
  bool always_active = false;
};

// Constant disturbance torque applied on [t_on, t_off).
struct DisturbancePulse {
  double t_on = 0;
  double t_off = 0;
  Vec tau;
};

// Stepwise stiffness ramp: ks(t) = ks0 + increment*floor((t - t0)/period)
// for t >= t0, applied to every task; kd = kd_factor*sqrt(ks) and, for
// heterogeneous tasks, ki = eps_i*kd are recomputed at each step.
struct GainRamp {
  bool enabled = false;
  double t0 = 0;
  double period = 2.0;
  double ks0 = 50.0;
  double increment = 50.0;
  double kd_factor = 2.0;
  double eps_i = 1.0;
};

struct PostureConfig {
  double w0 = 1e-6;
  Vec kp;   // empty => kappa = 0
  Vec kv;
  Vec q_ref;
};

struct MetricsConfig {
  double osc_window = 2.0;
  double noise_floor = 1e-4;
  double settle_band = 0.02;
  double ttb_threshold = 0.02;
};

struct Scenario {
  std::string id;
  int schema_version = 1;
  std::vector<ServoParams> joints;
  std::optional<PlanarChain> chain;
  Vec q0;
  Vec qd0;
  std::vector<TaskConfig> tasks;
  std::vector<BarrierConfig> barriers;
  std::vector<DisturbancePulse> disturbances;
  GainRamp ramp;
  PostureConfig posture;
  MetricsConfig metrics;
  double dt = 1e-3;
  double t_end = 10.0;
  int substeps = 10;
  double blow_up_cap = 1e6;

  int dof() const { return static_cast<int>(joints.size()); }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct BarrierTrace {
  std::vector<double> h, h_d, h_dot, h_dot_d;
  std::vector<int> active;  // row inserted at this step
};

struct SimLog {
  double dt = 1e-3;
  MetricsConfig metrics;
  std::vector<double> t;
  std::vector<Vec> q, qd, q_d, qd_d;   // measured and integrator-side states
  std::vector<Vec> u;                  // commanded acceleration
  std::vector<Vec> mu;                 // stacked per-task feedback terms
  std::vector<Vec> task_err;           // first task's error e
  std::vector<BarrierTrace> barriers;
  std::vector<double> kkt;
  std::vector<std::vector<int>> active_set;
  bool blew_up = false;
  bool infeasible = false;
  int infeasible_step = -1;
  std::vector<int> conflict_rows;

  int steps() const { return static_cast<int>(t.size()); }
};

struct Metrics {
  double settling_time = 0;
  double steady_state_error = 0;
  double overshoot_beyond_boundary = 0;           // max over barriers
  double oscillation_index = 0;
  bool instability_flag = false;
  std::vector<double> time_to_boundary;           // per barrier; -1 if never reached
};

// Runs the full closed loop at the control rate: sample references and
// schedules, evaluate both feedback paths, build mu and constraint rows,
// assemble and solve the QP (warm started), integrate the desired state,
// step the plant with the command held over dt, log. Stops early on plant
// blow-up; a QP infeasibility freezes the command for the step and flags
// the run.
SimLog run_scenario(const Scenario& s);

// Metrics over the log; the scalar oscillation/settling signal is the first
// coordinate of the first task's error. Throws std::invalid_argument when
// the window exceeds the log duration or the log is empty.
Metrics compute_metrics(const SimLog& log, double window);

struct BatchResult {
  std::string id;
  bool ok = false;
  std::string error;
  Metrics metrics;
};

// Runs scenarios independently; failures are isolated per entry and the
// result order matches the input order.
std::vector<BatchResult> batch_run(const std::vector<Scenario>& scenarios);

}  // namespace rqp
