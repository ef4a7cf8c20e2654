#include <rqp/control.hpp>

#include <cmath>
#include <stdexcept>

namespace rqp {

void TaskGains::validate() const {
  const auto m = ks.size();
  if (kd.size() != m || ki.size() != m)
    throw std::invalid_argument("TaskGains: gain vectors must share one length");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(ks[i] > 0.0)) throw std::invalid_argument("TaskGains: ks must be > 0");
    if (ki[i] < 0.0) throw std::invalid_argument("TaskGains: ki must be >= 0");
    if (!(kd[i] + ki[i] > 0.0))
      throw std::invalid_argument("TaskGains: kd + ki must be > 0 (closed loop not Hurwitz)");
  }
}

Vec mu_output_feedback(const Vec& ks, const Vec& kd, const TaskState& eta) {
  if (ks.size() != eta.e.size() || kd.size() != eta.e.size())
    throw std::invalid_argument("mu_output_feedback: dimension mismatch");
  return -ks.cwiseProduct(eta.e) - kd.cwiseProduct(eta.e_dot);
}

Vec mu_heterogeneous(const TaskGains& gains, const TaskPsi& psi) {
  gains.validate();
  if (psi.e.size() != gains.ks.size() || psi.e_dot.size() != gains.ks.size() ||
      psi.e_dot_d.size() != gains.ks.size())
    throw std::invalid_argument("mu_heterogeneous: dimension mismatch");
  return -gains.ks.cwiseProduct(psi.e) - gains.kd.cwiseProduct(psi.e_dot) -
         gains.ki.cwiseProduct(psi.e_dot_d);
}

IneqRow ecbf_row_feedforward(const BarrierGains& g, const BarrierState& bs_d,
                             const RowVec& j_h_d, double jdot_alpha_d) {
  IneqRow row;
  row.a = -j_h_d;
  row.b = jdot_alpha_d + g.ks * bs_d.h + g.kd * bs_d.h_dot;
  return row;
}

IneqRow ecbf_row_feedback(const BarrierGains& g, const BarrierState& bs_meas,
                          const RowVec& j_h_d, double jdot_alpha_d) {
  IneqRow row;
  row.a = -j_h_d;
  row.b = jdot_alpha_d + g.ks * bs_meas.h + g.kd * bs_meas.h_dot;
  return row;
}

IneqRow recbf_row(const BarrierGains& g, const BarrierPsi& psi, const RowVec& j_h_d,
                  double jdot_alpha_d) {
  if (g.ki < 0.0) throw std::invalid_argument("recbf_row: ki must be >= 0");
  IneqRow row;
  row.a = -j_h_d;
  row.b = jdot_alpha_d + g.ks * psi.h + g.kd * psi.h_dot + g.ki * psi.h_dot_d;
  return row;
}

HurwitzInfo check_hurwitz(double ks, double kd_eff) {
  // eigenvalues of [[0,1],[-ks,-kd_eff]]: roots of s^2 + kd_eff s + ks
  HurwitzInfo info;
  const double disc = kd_eff * kd_eff - 4.0 * ks;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    info.eig[0] = {(-kd_eff - r) / 2.0, 0.0};
    info.eig[1] = {(-kd_eff + r) / 2.0, 0.0};
  } else {
    const double im = std::sqrt(-disc) / 2.0;
    info.eig[0] = {-kd_eff / 2.0, -im};
    info.eig[1] = {-kd_eff / 2.0, im};
  }
  info.hurwitz = ks > 0.0 && kd_eff > 0.0;
  return info;
}

Mat2 are_solve(double ks, double kd_eff, double ki) {
  if (!check_hurwitz(ks, kd_eff).hurwitz)
    throw std::invalid_argument("are_solve: closed-loop matrix not Hurwitz");
  if (!(ki > 0.0)) throw std::invalid_argument("are_solve: ki must be > 0");
  const double p12 = ki / (2.0 * ks);
  const double p22 = (ki + 2.0 * p12) / (2.0 * kd_eff);
  const double p11 = kd_eff * p12 + ks * p22;
  Mat2 P;
  P << p11, p12, p12, p22;
  return P;
}

StabilityReport robustness_margin(double ks, double kd, double ki, const Mat2& P,
                                  double eta_phi_inf, double theta, double target_radius) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("robustness_margin: theta must lie in (0, 1)");
  if (!(ki > 0.0)) throw std::invalid_argument("robustness_margin: ki must be > 0");
  if (!std::isfinite(eta_phi_inf) || eta_phi_inf < 0.0)
    throw std::invalid_argument("robustness_margin: invalid disturbance bound");
  StabilityReport rep;
  rep.P = P;
  rep.Q = ki * Mat2::Identity();
  rep.eigenvalues = check_hurwitz(ks, kd + ki).eig;
  Eigen::SelfAdjointEigenSolver<Mat2> es(P);
  const double lmin = es.eigenvalues()[0];
  const double lmax = es.eigenvalues()[1];
  const double k_norm = std::hypot(ks, kd);
  rep.threshold = 2.0 * lmax * k_norm * eta_phi_inf / (theta * ki);
  rep.ultimate_bound = std::sqrt(lmax / lmin) * rep.threshold;
  rep.margin_ok = rep.ultimate_bound <= target_radius;
  return rep;
}

Vec posture_feedback(const Vec& kp, const Vec& kv, const RobotState& state, const Vec& q_post) {
  if (kp.size() != state.q.size() || kv.size() != state.q.size() ||
      q_post.size() != state.q.size())
    throw std::invalid_argument("posture_feedback: dimension mismatch");
  return kp.cwiseProduct(state.q - q_post) + kv.cwiseProduct(state.qd);
}

}  // namespace rqp
