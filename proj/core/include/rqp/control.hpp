#pragma once

#include <rqp/kinematics.hpp>
#include <rqp/model.hpp>
#include <rqp/types.hpp>

#include <array>
#include <complex>

namespace rqp {

// Diagonal task gains (per-coordinate entries). Kd may be negative in the
// compliant variant as long as Kd + Ki stays positive.
struct TaskGains {
  Vec ks;
  Vec kd;
  Vec ki;

  // Requirements of the integrator-side closed loop: ks > 0, ki >= 0 and
  // kd + ki > 0 per coordinate (F_check Hurwitz). Throws std::invalid_argument.
  void validate() const;
};

// Mixed feedback state: measured (e, e_dot) plus the integrator-side rate.
struct TaskPsi {
  Vec e;
  Vec e_dot;
  Vec e_dot_d;
};

// mu = -Ks*e - Kd*e_dot on the measured task state.
Vec mu_output_feedback(const Vec& ks, const Vec& kd, const TaskState& eta);

// mu = -Ks*e - Kd*e_dot - Ki*e_dot_d. With ki = 0 this equals
// mu_output_feedback bit-for-bit. Throws when the gain invariants fail.
Vec mu_heterogeneous(const TaskGains& gains, const TaskPsi& psi);

// Scalar barrier gains.
struct BarrierGains {
  double ks = 0;
  double kd = 0;
  double ki = 0;
};

// Mixed barrier feedback state.
struct BarrierPsi {
  double h = 0;
  double h_dot = 0;
  double h_dot_d = 0;
};

// One inequality row in the QP's a*u <= b convention.
struct IneqRow {
  RowVec a;
  double b = 0;
};

// Feedforward barrier row on the integrator-side state:
//   -J_h_d*u <= Jdot_alpha_d + ks*h_d + kd*h_dot_d
IneqRow ecbf_row_feedforward(const BarrierGains& g, const BarrierState& bs_d,
                             const RowVec& j_h_d, double jdot_alpha_d);

// Same row with the measured (h, h_dot) in the feedback part.
IneqRow ecbf_row_feedback(const BarrierGains& g, const BarrierState& bs_meas,
                          const RowVec& j_h_d, double jdot_alpha_d);

// Robust row mixing measured (h, h_dot) with the integrator-side rate:
//   -J_h_d*u <= Jdot_alpha_d + ks*h + kd*h_dot + ki*h_dot_d
// With ki = 0 this degenerates to ecbf_row_feedback exactly; ki < 0 throws.
IneqRow recbf_row(const BarrierGains& g, const BarrierPsi& psi, const RowVec& j_h_d,
                  double jdot_alpha_d);

// Eigenvalues of [[0,1],[-ks,-kd_eff]]; Hurwitz iff ks > 0 and kd_eff > 0.
struct HurwitzInfo {
  std::array<std::complex<double>, 2> eig;
  bool hurwitz = false;
};

HurwitzInfo check_hurwitz(double ks, double kd_eff);

// Closed-form solution of the Lyapunov equation F'P + PF = -diag(ki, ki)
// for the companion matrix F = [[0,1],[-ks,-kd_eff]]:
//   p12 = ki/(2 ks), p22 = (ki + 2 p12)/(2 kd_eff), p11 = kd_eff*p12 + ks*p22.
// Throws std::invalid_argument when F is not Hurwitz or ki <= 0.
Mat2 are_solve(double ks, double kd_eff, double ki);

// Per-coordinate robustness analysis report.
struct StabilityReport {
  Mat2 P;
  Mat2 Q;
  std::array<std::complex<double>, 2> eigenvalues;  // of F_check
  double threshold = 0;      // radius beyond which the Lyapunov function decays
  double ultimate_bound = 0; // rho (or sigma for barrier coordinates)
  bool margin_ok = false;
};

// threshold = 2*lmax(P)*||[ks kd]||*eta_phi_inf / (theta*ki)
// ultimate_bound = sqrt(lmax(P)/lmin(P)) * threshold
// margin_ok flags ultimate_bound <= target_radius.
// Throws std::invalid_argument when theta is outside (0, 1).
StabilityReport robustness_margin(double ks, double kd, double ki, const Mat2& P,
                                  double eta_phi_inf, double theta, double target_radius);

// kappa = Kp*(q - q_post) + Kv*qd, the feedback inside the regularizing task.
Vec posture_feedback(const Vec& kp, const Vec& kv, const RobotState& state, const Vec& q_post);

}  // namespace rqp
