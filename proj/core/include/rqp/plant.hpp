#pragma once

#include <rqp/model.hpp>
#include <rqp/types.hpp>

#include <vector>

namespace rqp {

// Per-joint second-order linear servo
//   qddot = a1*q + a2*qd + a3*q_cmd + a4*qd_cmd + a5*tau_l
// with a3 = -a1 and the homogeneous matrix [[0,1],[a1,a2]] Hurwitz
// (a1 < 0, a2 < 0), so the servo tracks its command and is ISS w.r.t. tau_l.
struct ServoParams {
  double a1 = 0;
  double a2 = 0;
  double a3 = 0;
  double a4 = 0;
  double a5 = 0;

  bool hurwitz() const { return a1 < 0.0 && a2 < 0.0; }
  // Throws std::invalid_argument when a3 != -a1 or the homogeneous part is
  // not Hurwitz.
  void validate() const;
};

// PD-controlled DC motor constants; maps onto ServoParams via
//   a1 = -b1*b3, a2 = -b2*b3 - b4, a3 = -a1, a4 = b2*b3, a5 = b3*b5.
struct MotorParams {
  double b1 = 0;
  double b2 = 0;
  double b3 = 0;
  double b4 = 0;
  double b5 = 0;
};

// Throws std::invalid_argument when b3 <= 0, b4 < 0, or the resulting servo
// is not Hurwitz.
ServoParams servo_from_motor(const MotorParams& m);

namespace presets {
// Stiff well-damped servo ("System 1").
ServoParams system1();
// Very stiff servo with relatively lower damping ("System 2").
ServoParams system2();
// Lightly damped servo (wn = 20 rad/s, zeta = 0.5); stands in for joint
// flexibility in the multi-DoF scenarios.
ServoParams underdamped();
}  // namespace presets

// Plant-side state, one (q, qd) pair per joint.
struct PlantState {
  Vec q;
  Vec qd;

  int dof() const { return static_cast<int>(q.size()); }
};

// RK4 step of a single joint over dt (substeps subdivisions), with the
// command (q_cmd, qd_cmd) and disturbance torque held constant.
Vec2 step_joint(const ServoParams& p, const Vec2& x, double q_cmd, double qd_cmd,
                double tau_l, double dt, int substeps);

// Diagonal multi-joint servo plant: one independent ServoParams per joint.
struct ServoPlant {
  std::vector<ServoParams> joints;

  int dof() const { return static_cast<int>(joints.size()); }
  // Steps every joint over dt with cmd and tau_l held constant (ZOH).
  // Throws std::invalid_argument on dt <= 0, substeps < 1, or size mismatch.
  PlantState step(const PlantState& s, const DesiredState& cmd, const Vec& tau_l,
                  double dt, int substeps) const;
};

// True when any state entry exceeds the blow-up cap (or is non-finite);
// used by the simulation loop to flag closed-loop instability.
bool exceeds_cap(const PlantState& s, double cap);

// Analytic steady state under a constant command ramp and constant tau_l:
//   q_ss  = q_d - ((a2 + a4)*qd_d + a5*tau_l)/a1   (uses a3 = -a1)
//   qd_ss = qd_d
// Throws std::invalid_argument when a1 == 0.
PlantState steady_state(const ServoParams& p, double q_d, double qd_d, double tau_l);

}  // namespace rqp
