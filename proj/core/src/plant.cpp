#include <rqp/plant.hpp>

#include <cmath>
#include <stdexcept>

namespace rqp {

void ServoParams::validate() const {
  if (std::abs(a3 + a1) > 1e-9 * std::max(1.0, std::abs(a1)))
    throw std::invalid_argument("ServoParams: a3 must equal -a1");
  if (!hurwitz())
    throw std::invalid_argument("ServoParams: homogeneous part not Hurwitz (need a1 < 0, a2 < 0)");
}

ServoParams servo_from_motor(const MotorParams& m) {
  if (!(m.b3 > 0.0)) throw std::invalid_argument("servo_from_motor: b3 must be > 0");
  if (m.b4 < 0.0) throw std::invalid_argument("servo_from_motor: b4 must be >= 0");
  ServoParams p;
  p.a1 = -m.b1 * m.b3;
  p.a2 = -m.b2 * m.b3 - m.b4;
  p.a3 = -p.a1;
  p.a4 = m.b2 * m.b3;
  p.a5 = m.b3 * m.b5;
  p.validate();
  return p;
}

namespace presets {

ServoParams system1() { return {-376.5977, -158.5073, 376.5977, 2.8245, 4.7034}; }
ServoParams system2() { return {-2380.6356, -173.5712, 2380.6356, 17.8884, 4.7034}; }
ServoParams underdamped() { return {-400.0, -20.0, 400.0, 2.0, 4.7}; }

}  // namespace presets

namespace {

inline Vec2 deriv(const ServoParams& p, const Vec2& x, double q_cmd, double qd_cmd,
                  double tau_l) {
  return {x[1], p.a1 * x[0] + p.a2 * x[1] + p.a3 * q_cmd + p.a4 * qd_cmd + p.a5 * tau_l};
}

}  // namespace

Vec2 step_joint(const ServoParams& p, const Vec2& x0, double q_cmd, double qd_cmd,
                double tau_l, double dt, int substeps) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_joint: dt must be > 0");
  if (substeps < 1) throw std::invalid_argument("step_joint: substeps must be >= 1");
  const double h = dt / substeps;
  Vec2 x = x0;
  for (int i = 0; i < substeps; ++i) {
    const Vec2 k1 = deriv(p, x, q_cmd, qd_cmd, tau_l);
    const Vec2 k2 = deriv(p, x + 0.5 * h * k1, q_cmd, qd_cmd, tau_l);
    const Vec2 k3 = deriv(p, x + 0.5 * h * k2, q_cmd, qd_cmd, tau_l);
    const Vec2 k4 = deriv(p, x + h * k3, q_cmd, qd_cmd, tau_l);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

PlantState ServoPlant::step(const PlantState& s, const DesiredState& cmd, const Vec& tau_l,
                            double dt, int substeps) const {
  const int n = dof();
  if (s.dof() != n || cmd.dof() != n || tau_l.size() != n)
    throw std::invalid_argument("ServoPlant::step: dimension mismatch");
  PlantState next;
  next.q.resize(n);
  next.qd.resize(n);
  for (int j = 0; j < n; ++j) {
    const Vec2 x =
        step_joint(joints[j], {s.q[j], s.qd[j]}, cmd.q[j], cmd.qd[j], tau_l[j], dt, substeps);
    next.q[j] = x[0];
    next.qd[j] = x[1];
  }
  return next;
}

bool exceeds_cap(const PlantState& s, double cap) {
  if (!s.q.allFinite() || !s.qd.allFinite()) return true;
  return s.q.cwiseAbs().maxCoeff() > cap || s.qd.cwiseAbs().maxCoeff() > cap;
}

PlantState steady_state(const ServoParams& p, double q_d, double qd_d, double tau_l) {
  if (p.a1 == 0.0) throw std::invalid_argument("steady_state: a1 must be nonzero");
  PlantState s;
  s.q.resize(1);
  s.qd.resize(1);
  s.q[0] = q_d - ((p.a2 + p.a4) * qd_d + p.a5 * tau_l) / p.a1;
  s.qd[0] = qd_d;
  return s;
}

}  // namespace rqp
