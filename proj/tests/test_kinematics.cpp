#include <doctest.h>

#include <rqp/kinematics.hpp>

#include <cmath>
#include <random>

using namespace rqp;

namespace {

const double kPi = 3.14159265358979323846;

PlanarChain two_link() {
  PlanarChain c;
  c.link_lengths = Vec(2);
  c.link_lengths << 1.0, 1.0;
  return c;
}

Vec qv(double a, double b) {
  Vec q(2);
  q << a, b;
  return q;
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("forward kinematics of a 2-link chain") {
  const PlanarChain c = two_link();
  CHECK((fk(c, qv(0, 0)) - Vec2(2, 0)).norm() <= 1e-15);
  CHECK((fk(c, qv(kPi / 2, 0)) - Vec2(0, 2)).norm() <= 1e-12);
  CHECK((fk(c, qv(kPi / 2, -kPi / 2)) - Vec2(1, 1)).norm() <= 1e-12);
}

TEST_CASE("analytic jacobian at the straight configuration") {
  const Mat J = jacobian(two_link(), qv(0, 0));
  CHECK(J(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(J(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(J(1, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(J(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((J * Vec::Zero(2)).norm() == 0.0);
}

TEST_CASE("jacobian matches finite differences on random configurations") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int links = 2; links <= 3; ++links) {
    PlanarChain c;
    c.link_lengths = Vec::Constant(links, 0.9);
    for (int trial = 0; trial < 50; ++trial) {
      Vec q(links), delta(links);
      for (int i = 0; i < links; ++i) {
        q[i] = ang(rng);
        delta[i] = ang(rng);
      }
      delta.normalize();
      const double eps = 1e-7;
      const Vec2 fd = (fk(c, q + eps * delta) - fk(c, q)) / eps;
      CHECK((fd - jacobian(c, q) * delta).norm() <= 1e-6);
    }
  }
}

TEST_CASE("jacobian_dot is zero at rest and matches finite differences") {
  const PlanarChain c = two_link();
  CHECK(jacobian_dot(c, qv(0.7, -0.3), Vec::Zero(2)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ang(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec q = qv(ang(rng), ang(rng));
    const Vec qd = qv(ang(rng), ang(rng));
    const double eps = 1e-7;
    const Mat fd = (jacobian(c, q + eps * qd) - jacobian(c, q)) / eps;
    CHECK((fd - jacobian_dot(c, q, qd)).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("identity task map has J = I and Jdot = 0") {
  TaskMap map;
  map.kind = TaskKind::JointSpace;
  const Vec q = qv(0.4, -1.1);
  CHECK((task_jacobian(map, q) - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK(task_jacobian_dot(map, q, qv(1, 2)).norm() == 0.0);
  CHECK((task_value(map, q) - q).norm() == 0.0);
}

TEST_CASE("task state on both feedback paths") {
  TaskMap joint;
  joint.kind = TaskKind::JointSpace;
  TaskRefs refs;
  refs.s_ref = Vec::Constant(1, 1.0);
  refs.sdot_ref = Vec::Zero(1);
  refs.sddot_ref = Vec::Zero(1);
  const TaskState st = task_state(joint, refs, Vec::Constant(1, 0.5), Vec::Zero(1));
  CHECK(st.e[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(st.e_dot[0] == 0.0);

  // exactly on the reference
  const TaskState on = task_state(joint, refs, Vec::Constant(1, 1.0), Vec::Zero(1));
  CHECK(on.e.norm() == 0.0);
  CHECK(on.e_dot.norm() == 0.0);

  TaskMap planar;
  planar.kind = TaskKind::PlanarPosition;
  planar.chain = two_link();
  TaskRefs prefs;
  prefs.s_ref = Vec2(2, 0);
  prefs.sdot_ref = Vec::Zero(2);
  prefs.sddot_ref = Vec::Zero(2);
  const TaskState pst = task_state(planar, prefs, qv(0, 0), qv(1, 0));
  CHECK(pst.e.norm() <= 1e-15);
  CHECK(pst.e_dot[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pst.e_dot[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("barrier states for the supported forms") {
  BarrierGeom upper;
  upper.form = BarrierForm::JointUpper;
  upper.joint = 0;
  upper.limit = 3.0;
  const BarrierState bs =
      barrier_state(upper, std::nullopt, Vec::Constant(1, 2.5), Vec::Constant(1, 0.1));
  CHECK(bs.h == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bs.h_dot == doctest::Approx(-0.1).epsilon(1e-15));

  BarrierGeom plane;
  plane.form = BarrierForm::HalfPlane;
  plane.normal = Vec2(-1, 0);
  plane.offset = 1.5;
  const BarrierState hp =
      barrier_state(plane, two_link(), qv(kPi / 2, -kPi / 2), Vec::Zero(2));
  CHECK(hp.h == doctest::Approx(0.5).epsilon(1e-12));  // ee at (1,1)

  // zero tracking error: measured and desired coincide
  const BarrierState hp2 =
      barrier_state(plane, two_link(), qv(kPi / 2, -kPi / 2), Vec::Zero(2));
  CHECK(hp.h == hp2.h);

  BarrierGeom vel;
  vel.form = BarrierForm::JointVelUpper;
  vel.joint = 0;
  vel.limit = 2.0;
  const BarrierState vb =
      barrier_state(vel, std::nullopt, Vec::Constant(1, 0.0), Vec::Constant(1, 0.5));
  CHECK(vb.h == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(barrier_relative_degree(vel.form) == 1);
  CHECK(barrier_relative_degree(upper.form) == 2);

  CHECK_THROWS_AS(barrier_state(plane, std::nullopt, qv(0, 0), qv(0, 0)),
                  std::invalid_argument);
  BarrierGeom bad = upper;
  bad.joint = 5;
  CHECK_THROWS_AS(barrier_state(bad, std::nullopt, Vec::Constant(1, 0.0), Vec::Constant(1, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("output error decomposition is first-order accurate") {
  // || e(q) - e(q_d) - J(q_d) phi || should scale quadratically in ||phi||
  const PlanarChain c = two_link();
  const Vec qd_side = qv(0.9, -0.6);
  const Vec dir = qv(0.3, 0.8).normalized();
  auto remainder = [&](double scale) {
    const Vec q = qd_side + scale * dir;
    return (fk(c, q) - fk(c, qd_side) - jacobian(c, qd_side) * (scale * dir)).norm();
  };
  const double r1 = remainder(1e-3);
  const double r2 = remainder(2e-3);
  CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("chain validation") {
  PlanarChain bad;
  bad.link_lengths = Vec(2);
  bad.link_lengths << 1.0, -0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(fk(two_link(), Vec::Zero(3)), std::invalid_argument);
}

}  // TEST_SUITE
