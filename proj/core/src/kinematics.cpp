#include <rqp/kinematics.hpp>

#include <cmath>
#include <stdexcept>

namespace rqp {

void PlanarChain::validate() const {
  if (link_lengths.size() == 0)
    throw std::invalid_argument("PlanarChain: empty chain");
  if ((link_lengths.array() <= 0.0).any())
    throw std::invalid_argument("PlanarChain: link lengths must be > 0");
}

Vec2 fk(const PlanarChain& chain, const Vec& q) {
  const int n = chain.dof();
  if (q.size() != n) throw std::invalid_argument("fk: dimension mismatch");
  Vec2 p{0, 0};
  double c = 0;
  for (int i = 0; i < n; ++i) {
    c += q[i];
    p[0] += chain.link_lengths[i] * std::cos(c);
    p[1] += chain.link_lengths[i] * std::sin(c);
  }
  return p;
}

Mat jacobian(const PlanarChain& chain, const Vec& q) {
  const int n = chain.dof();
  if (q.size() != n) throw std::invalid_argument("jacobian: dimension mismatch");
  Mat J = Mat::Zero(2, n);
  // column j sums the links distal to joint j
  double c = 0;
  Vec cs(n), sn(n);
  for (int i = 0; i < n; ++i) {
    c += q[i];
    cs[i] = chain.link_lengths[i] * std::cos(c);
    sn[i] = chain.link_lengths[i] * std::sin(c);
  }
  double sx = 0, sy = 0;
  for (int j = n - 1; j >= 0; --j) {
    sx += sn[j];
    sy += cs[j];
    J(0, j) = -sx;
    J(1, j) = sy;
  }
  return J;
}

Mat jacobian_dot(const PlanarChain& chain, const Vec& q, const Vec& qd) {
  const int n = chain.dof();
  if (q.size() != n || qd.size() != n)
    throw std::invalid_argument("jacobian_dot: dimension mismatch");
  Mat Jd = Mat::Zero(2, n);
  double c = 0, cd = 0;
  Vec dcs(n), dsn(n);  // d/dt of l_i*cos(c_i), l_i*sin(c_i)
  for (int i = 0; i < n; ++i) {
    c += q[i];
    cd += qd[i];
    dcs[i] = -chain.link_lengths[i] * std::sin(c) * cd;
    dsn[i] = chain.link_lengths[i] * std::cos(c) * cd;
  }
  double sx = 0, sy = 0;
  for (int j = n - 1; j >= 0; --j) {
    sx += dsn[j];
    sy += dcs[j];
    Jd(0, j) = -sx;
    Jd(1, j) = sy;
  }
  return Jd;
}

Vec task_value(const TaskMap& map, const Vec& q) {
  if (map.kind == TaskKind::JointSpace) return q;
  if (!map.chain) throw std::invalid_argument("task_value: planar task requires a chain");
  return fk(*map.chain, q);
}

Mat task_jacobian(const TaskMap& map, const Vec& q) {
  if (map.kind == TaskKind::JointSpace) return Mat::Identity(q.size(), q.size());
  if (!map.chain) throw std::invalid_argument("task_jacobian: planar task requires a chain");
  return jacobian(*map.chain, q);
}

Mat task_jacobian_dot(const TaskMap& map, const Vec& q, const Vec& qd) {
  if (map.kind == TaskKind::JointSpace) return Mat::Zero(q.size(), q.size());
  if (!map.chain)
    throw std::invalid_argument("task_jacobian_dot: planar task requires a chain");
  return jacobian_dot(*map.chain, q, qd);
}

TaskState task_state(const TaskMap& map, const TaskRefs& refs, const Vec& q, const Vec& qd) {
  TaskState st;
  st.e = task_value(map, q) - refs.s_ref;
  st.e_dot = task_jacobian(map, q) * qd - refs.sdot_ref;
  return st;
}

int barrier_relative_degree(BarrierForm form) {
  switch (form) {
    case BarrierForm::JointUpper:
    case BarrierForm::JointLower:
    case BarrierForm::HalfPlane:
      return 2;
    case BarrierForm::JointVelUpper:
    case BarrierForm::JointVelLower:
      return 1;
  }
  throw std::invalid_argument("unsupported barrier form");
}

namespace {

void check_joint(const BarrierGeom& geom, const Vec& q) {
  if (geom.joint < 0 || geom.joint >= q.size())
    throw std::invalid_argument("barrier: joint index out of range");
}

const PlanarChain& need_chain(const std::optional<PlanarChain>& chain) {
  if (!chain) throw std::invalid_argument("barrier: half-plane form requires a chain");
  return *chain;
}

}  // namespace

BarrierState barrier_state(const BarrierGeom& geom, const std::optional<PlanarChain>& chain,
                           const Vec& q, const Vec& qd) {
  BarrierState bs;
  switch (geom.form) {
    case BarrierForm::JointUpper:
      check_joint(geom, q);
      bs.h = geom.limit - q[geom.joint];
      bs.h_dot = -qd[geom.joint];
      return bs;
    case BarrierForm::JointLower:
      check_joint(geom, q);
      bs.h = q[geom.joint] - geom.limit;
      bs.h_dot = qd[geom.joint];
      return bs;
    case BarrierForm::JointVelUpper:
      check_joint(geom, q);
      bs.h = geom.limit - qd[geom.joint];
      bs.h_dot = 0;  // relative degree 1: h_dot is the command itself
      return bs;
    case BarrierForm::JointVelLower:
      check_joint(geom, q);
      bs.h = qd[geom.joint] - geom.limit;
      bs.h_dot = 0;
      return bs;
    case BarrierForm::HalfPlane: {
      const auto& ch = need_chain(chain);
      bs.h = geom.normal.dot(fk(ch, q)) + geom.offset;
      bs.h_dot = (geom.normal.transpose() * jacobian(ch, q) * qd).value();
      return bs;
    }
  }
  throw std::invalid_argument("unsupported barrier form");
}

RowVec barrier_jacobian(const BarrierGeom& geom, const std::optional<PlanarChain>& chain,
                        const Vec& q) {
  RowVec j = RowVec::Zero(q.size());
  switch (geom.form) {
    case BarrierForm::JointUpper:
    case BarrierForm::JointVelUpper:
      check_joint(geom, q);
      j[geom.joint] = -1.0;
      return j;
    case BarrierForm::JointLower:
    case BarrierForm::JointVelLower:
      check_joint(geom, q);
      j[geom.joint] = 1.0;
      return j;
    case BarrierForm::HalfPlane:
      return geom.normal.transpose() * jacobian(need_chain(chain), q);
  }
  throw std::invalid_argument("unsupported barrier form");
}

double barrier_jdot_alpha(const BarrierGeom& geom, const std::optional<PlanarChain>& chain,
                          const Vec& q, const Vec& qd) {
  switch (geom.form) {
    case BarrierForm::JointUpper:
    case BarrierForm::JointLower:
    case BarrierForm::JointVelUpper:
    case BarrierForm::JointVelLower:
      return 0.0;
    case BarrierForm::HalfPlane:
      return (geom.normal.transpose() * jacobian_dot(need_chain(chain), q, qd) * qd).value();
  }
  throw std::invalid_argument("unsupported barrier form");
}

}  // namespace rqp
