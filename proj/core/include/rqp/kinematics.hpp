#pragma once

#include <rqp/types.hpp>

#include <optional>

namespace rqp {

// Planar serial chain, base at the origin; joint i rotates link i.
struct PlanarChain {
  Vec link_lengths;

  int dof() const { return static_cast<int>(link_lengths.size()); }
  // Throws std::invalid_argument when any length <= 0.
  void validate() const;
};

// End-effector position (x, y).
Vec2 fk(const PlanarChain& chain, const Vec& q);

// Analytic 2xn end-effector Jacobian.
Mat jacobian(const PlanarChain& chain, const Vec& q);

// Analytic time derivative of the Jacobian along (q, qd).
Mat jacobian_dot(const PlanarChain& chain, const Vec& q, const Vec& qd);

// Task output map: either the identity on joint space or the planar
// end-effector position of a chain.
enum class TaskKind { JointSpace, PlanarPosition };

struct TaskMap {
  TaskKind kind = TaskKind::JointSpace;
  std::optional<PlanarChain> chain;  // required for PlanarPosition

  int task_dim(int n_joints) const { return kind == TaskKind::JointSpace ? n_joints : 2; }
};

Vec task_value(const TaskMap& map, const Vec& q);
Mat task_jacobian(const TaskMap& map, const Vec& q);
Mat task_jacobian_dot(const TaskMap& map, const Vec& q, const Vec& qd);

// References sampled at the current time.
struct TaskRefs {
  Vec s_ref;
  Vec sdot_ref;
  Vec sddot_ref;
};

// Task output state: e = s(q) - s_ref, e_dot = J(q)*qd - sdot_ref.
// Evaluated on the measured state and on the desired state alike; the two
// evaluations realize the measured and integrator-side feedback paths.
struct TaskState {
  Vec e;
  Vec e_dot;
};

TaskState task_state(const TaskMap& map, const TaskRefs& refs, const Vec& q, const Vec& qd);

// Supported barrier shapes. Joint velocity bounds have relative degree 1;
// the others have relative degree 2.
enum class BarrierForm { JointUpper, JointLower, JointVelUpper, JointVelLower, HalfPlane };

// Geometric part of a barrier: the scalar function h(x) >= 0 and its
// derivatives. Gains and formulation mode live in the scenario config.
struct BarrierGeom {
  BarrierForm form = BarrierForm::JointUpper;
  int joint = 0;        // joint bounds
  double limit = 0.0;   // joint bounds
  Vec2 normal{0, 0};    // half-plane: h = normal . fk(q) + offset
  double offset = 0.0;
};

// Barrier output state (h, h_dot). For the relative-degree-1 velocity
// bounds h_dot is not a function of the state and is reported as 0; the
// constraint-row builders use the degree-1 structure for those forms.
struct BarrierState {
  double h = 0;
  double h_dot = 0;
};

int barrier_relative_degree(BarrierForm form);

// Throws std::invalid_argument for an unsupported form or a missing chain.
BarrierState barrier_state(const BarrierGeom& geom, const std::optional<PlanarChain>& chain,
                           const Vec& q, const Vec& qd);

// Row of coefficients of u in the highest state derivative of h:
//   degree 2: h_ddot = Jdot_h*qd-term + J_h * u
//   degree 1: h_dot  = J_h * u
RowVec barrier_jacobian(const BarrierGeom& geom, const std::optional<PlanarChain>& chain,
                        const Vec& q);

// The drift term Jdot_h(q, qd) * qd (zero for affine barriers and for the
// degree-1 forms).
double barrier_jdot_alpha(const BarrierGeom& geom, const std::optional<PlanarChain>& chain,
                          const Vec& q, const Vec& qd);

}  // namespace rqp
