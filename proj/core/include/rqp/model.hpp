#pragma once

#include <rqp/types.hpp>

namespace rqp {

// Measured joint-space state of the robot (positions + velocities).
struct RobotState {
  Vec q;
  Vec qd;

  int dof() const { return static_cast<int>(q.size()); }
};

// Integrator-side desired state; evolves as a double integrator driven by
// the commanded acceleration u.
struct DesiredState {
  Vec q;
  Vec qd;

  int dof() const { return static_cast<int>(q.size()); }
};

// Stacked position/velocity tracking error (measured minus desired).
struct TrackingError {
  Vec phi;  // [q - q_d; qd - qd_d], length 2n
};

// Exact zero-order-hold update of the desired-state double integrator:
//   q_d  <- q_d + qd_d*dt + 0.5*u*dt^2
//   qd_d <- qd_d + u*dt
// Throws std::invalid_argument on non-finite input, dt <= 0, or size mismatch.
DesiredState integrate_desired(const DesiredState& state, const Vec& u, double dt);

// phi = [q - q_d; qd - qd_d]. Throws std::invalid_argument on dimension mismatch.
TrackingError tracking_error(const RobotState& actual, const DesiredState& desired);

}  // namespace rqp
