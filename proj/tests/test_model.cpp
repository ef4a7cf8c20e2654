#include <doctest.h>

#include <rqp/model.hpp>

#include <cmath>
#include <limits>

using namespace rqp;

namespace {

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("double integrator matches the exact zero-order-hold update") {
  DesiredState s{v1(0), v1(0)};
  const DesiredState a = integrate_desired(s, v1(1.0), 0.1);
  CHECK(a.q[0] == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(a.qd[0] == doctest::Approx(0.1).epsilon(1e-15));

  const DesiredState b = integrate_desired({v1(1), v1(0)}, v1(0.0), 0.5);
  CHECK(b.q[0] == 1.0);
  CHECK(b.qd[0] == 0.0);

  const DesiredState c = integrate_desired({v1(0), v1(2)}, v1(-4.0), 1.0);
  CHECK(c.q[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.qd[0] == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("constant-input integration is step-size invariant") {
  const double u = 0.73, dt = 1e-3;
  const int n_steps = 1000;
  DesiredState fine{v1(0.2), v1(-0.4)};
  for (int i = 0; i < n_steps; ++i) fine = integrate_desired(fine, v1(u), dt);
  const DesiredState coarse = integrate_desired({v1(0.2), v1(-0.4)}, v1(u), n_steps * dt);
  CHECK(fine.q[0] == doctest::Approx(coarse.q[0]).epsilon(1e-12));
  CHECK(fine.qd[0] == doctest::Approx(coarse.qd[0]).epsilon(1e-12));
}

TEST_CASE("integrate_desired rejects bad input") {
  CHECK_THROWS_AS(integrate_desired({v1(0), v1(0)}, v1(1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_desired({v1(0), v1(0)}, v1(1.0), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_desired({v1(0), v1(0)}, v1(std::numeric_limits<double>::quiet_NaN()), 0.1),
      std::invalid_argument);
  Vec u2(2);
  u2 << 1, 1;
  CHECK_THROWS_AS(integrate_desired({v1(0), v1(0)}, u2, 0.1), std::invalid_argument);
}

TEST_CASE("tracking error is the raw state difference") {
  const RobotState x{v1(1.1), v1(0)};
  const DesiredState xd{v1(1.0), v1(0)};
  const TrackingError e = tracking_error(x, xd);
  CHECK(e.phi.size() == 2);
  CHECK(e.phi[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(e.phi[1] == 0.0);

  const TrackingError zero = tracking_error({v1(2), v1(3)}, {v1(2), v1(3)});
  CHECK(zero.phi.norm() == 0.0);

  Vec q(2), qd(2), z(2);
  q << 0, 0;
  qd << 1, -1;
  z << 0, 0;
  const TrackingError multi = tracking_error({q, qd}, {z, z});
  CHECK(multi.phi[0] == 0.0);
  CHECK(multi.phi[1] == 0.0);
  CHECK(multi.phi[2] == 1.0);
  CHECK(multi.phi[3] == -1.0);
}

TEST_CASE("tracking error is antisymmetric and checks dimensions") {
  const RobotState a{v1(0.3), v1(-0.2)};
  const DesiredState b{v1(-0.1), v1(0.5)};
  const TrackingError ab = tracking_error(a, b);
  const TrackingError ba = tracking_error({b.q, b.qd}, {a.q, a.qd});
  CHECK((ab.phi + ba.phi).norm() == 0.0);

  Vec q2(2);
  q2 << 1, 2;
  CHECK_THROWS_AS(tracking_error({q2, q2}, {v1(0), v1(0)}), std::invalid_argument);
}

}  // TEST_SUITE
