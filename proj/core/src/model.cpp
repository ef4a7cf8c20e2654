#include <rqp/model.hpp>

#include <stdexcept>

namespace rqp {

DesiredState integrate_desired(const DesiredState& state, const Vec& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_desired: dt must be > 0");
  if (u.size() != state.q.size() || state.q.size() != state.qd.size())
    throw std::invalid_argument("integrate_desired: dimension mismatch");
  if (!u.allFinite() || !state.q.allFinite() || !state.qd.allFinite())
    throw std::invalid_argument("integrate_desired: non-finite input");
  DesiredState next;
  next.q = state.q + state.qd * dt + 0.5 * dt * dt * u;
  next.qd = state.qd + u * dt;
  return next;
}

TrackingError tracking_error(const RobotState& actual, const DesiredState& desired) {
  const auto n = actual.q.size();
  if (actual.qd.size() != n || desired.q.size() != n || desired.qd.size() != n)
    throw std::invalid_argument("tracking_error: dimension mismatch");
  TrackingError err;
  err.phi.resize(2 * n);
  err.phi.head(n) = actual.q - desired.q;
  err.phi.tail(n) = actual.qd - desired.qd;
  return err;
}

}  // namespace rqp
