#include <rqp/scenario_io.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace rqp {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ParseError(ctx + ": unknown key '" + item.key() + "'");
  }
}

const json& need(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(ctx + ": missing key '" + key + "'");
  return *it;
}

double num(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number()) throw ParseError(ctx + ": '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double dflt, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number()) throw ParseError(ctx + ": '" + std::string(key) + "' must be a number");
  return it->get<double>();
}

int integer(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number_integer()) throw ParseError(ctx + ": '" + std::string(key) + "' must be an integer");
  return v.get<int>();
}

std::string str(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) throw ParseError(ctx + ": '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

Vec vec(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_array()) throw ParseError(ctx + ": '" + std::string(key) + "' must be an array");
  Vec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ParseError(ctx + ": '" + std::string(key) + "' must hold numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

json from_vec(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

const char* law_name(TaskLaw law) {
  return law == TaskLaw::OutputFeedback ? "output-feedback" : "heterogeneous";
}

TaskLaw parse_law(const std::string& s, const std::string& ctx) {
  if (s == "output-feedback") return TaskLaw::OutputFeedback;
  if (s == "heterogeneous") return TaskLaw::Heterogeneous;
  throw ParseError(ctx + ": unknown task law '" + s + "'");
}

const char* kind_name(TaskKind kind) {
  return kind == TaskKind::JointSpace ? "joint-space" : "planar-position";
}

TaskKind parse_kind(const std::string& s, const std::string& ctx) {
  if (s == "joint-space") return TaskKind::JointSpace;
  if (s == "planar-position") return TaskKind::PlanarPosition;
  throw ParseError(ctx + ": unknown task kind '" + s + "'");
}

const char* form_name(BarrierForm f) {
  switch (f) {
    case BarrierForm::JointUpper: return "joint-upper";
    case BarrierForm::JointLower: return "joint-lower";
    case BarrierForm::JointVelUpper: return "joint-vel-upper";
    case BarrierForm::JointVelLower: return "joint-vel-lower";
    case BarrierForm::HalfPlane: return "half-plane";
  }
  return "?";
}

BarrierForm parse_form(const std::string& s, const std::string& ctx) {
  if (s == "joint-upper") return BarrierForm::JointUpper;
  if (s == "joint-lower") return BarrierForm::JointLower;
  if (s == "joint-vel-upper") return BarrierForm::JointVelUpper;
  if (s == "joint-vel-lower") return BarrierForm::JointVelLower;
  if (s == "half-plane") return BarrierForm::HalfPlane;
  throw ParseError(ctx + ": unknown barrier form '" + s + "'");
}

const char* mode_name(BarrierMode m) {
  switch (m) {
    case BarrierMode::FeedforwardEcbf: return "feedforward-ecbf";
    case BarrierMode::FeedbackEcbf: return "feedback-ecbf";
    case BarrierMode::Recbf: return "recbf";
  }
  return "?";
}

BarrierMode parse_mode(const std::string& s, const std::string& ctx) {
  if (s == "feedforward-ecbf") return BarrierMode::FeedforwardEcbf;
  if (s == "feedback-ecbf") return BarrierMode::FeedbackEcbf;
  if (s == "recbf") return BarrierMode::Recbf;
  throw ParseError(ctx + ": unknown barrier mode '" + s + "'");
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["id"] = s.id;
  j["joints"] = json::array();
  for (const auto& p : s.joints) {
    j["joints"].push_back(
        {{"a1", p.a1}, {"a2", p.a2}, {"a3", p.a3}, {"a4", p.a4}, {"a5", p.a5}});
  }
  if (s.chain) j["chain"] = {{"link_lengths", from_vec(s.chain->link_lengths)}};
  j["q0"] = from_vec(s.q0);
  j["qd0"] = from_vec(s.qd0);
  j["tasks"] = json::array();
  for (const auto& t : s.tasks) {
    json refs = json::array();
    for (const auto& sp : t.refs) refs.push_back({{"t", sp.t}, {"value", from_vec(sp.value)}});
    j["tasks"].push_back({{"law", law_name(t.law)},
                          {"kind", kind_name(t.kind)},
                          {"ks", from_vec(t.gains.ks)},
                          {"kd", from_vec(t.gains.kd)},
                          {"ki", from_vec(t.gains.ki)},
                          {"weight", t.weight},
                          {"refs", refs}});
  }
  j["barriers"] = json::array();
  for (const auto& b : s.barriers) {
    json bj = {{"form", form_name(b.geom.form)},
               {"mode", mode_name(b.mode)},
               {"ks_h", b.gains.ks},
               {"kd_h", b.gains.kd},
               {"ki_h", b.gains.ki},
               {"activate_h", b.activate_h},
               {"always_active", b.always_active}};
    if (b.geom.form == BarrierForm::HalfPlane) {
      bj["normal"] = json::array({b.geom.normal[0], b.geom.normal[1]});
      bj["offset"] = b.geom.offset;
    } else {
      bj["joint"] = b.geom.joint;
      bj["limit"] = b.geom.limit;
    }
    j["barriers"].push_back(bj);
  }
  j["disturbances"] = json::array();
  for (const auto& d : s.disturbances) {
    j["disturbances"].push_back({{"t_on", d.t_on}, {"t_off", d.t_off}, {"tau", from_vec(d.tau)}});
  }
  if (s.ramp.enabled) {
    j["ramp"] = {{"t0", s.ramp.t0},           {"period", s.ramp.period},
                 {"ks0", s.ramp.ks0},         {"increment", s.ramp.increment},
                 {"kd_factor", s.ramp.kd_factor}, {"eps_i", s.ramp.eps_i}};
  }
  j["posture"] = {{"w0", s.posture.w0}};
  if (s.posture.kp.size() != 0) {
    j["posture"]["kp"] = from_vec(s.posture.kp);
    j["posture"]["kv"] = from_vec(s.posture.kv);
    j["posture"]["ref"] = from_vec(s.posture.q_ref);
  }
  j["metrics"] = {{"osc_window", s.metrics.osc_window},
                  {"noise_floor", s.metrics.noise_floor},
                  {"settle_band", s.metrics.settle_band},
                  {"ttb_threshold", s.metrics.ttb_threshold}};
  j["dt"] = s.dt;
  j["t_end"] = s.t_end;
  j["substeps"] = s.substeps;
  j["blow_up_cap"] = s.blow_up_cap;
  return j.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: malformed document: ") + e.what());
  }
  const std::string ctx = "scenario";
  check_keys(j,
             {"schema_version", "id", "joints", "chain", "q0", "qd0", "tasks", "barriers",
              "disturbances", "ramp", "posture", "metrics", "dt", "t_end", "substeps",
              "blow_up_cap"},
             ctx);
  Scenario s;
  s.schema_version = integer(j, "schema_version", ctx);
  if (s.schema_version != kScenarioSchemaVersion)
    throw ParseError("scenario: unsupported schema_version");
  s.id = str(j, "id", ctx);
  for (const auto& pj : need(j, "joints", ctx)) {
    check_keys(pj, {"a1", "a2", "a3", "a4", "a5"}, "joints[]");
    ServoParams p;
    p.a1 = num(pj, "a1", "joints[]");
    p.a2 = num(pj, "a2", "joints[]");
    p.a3 = num(pj, "a3", "joints[]");
    p.a4 = num(pj, "a4", "joints[]");
    p.a5 = num(pj, "a5", "joints[]");
    s.joints.push_back(p);
  }
  if (j.contains("chain")) {
    check_keys(j["chain"], {"link_lengths"}, "chain");
    PlanarChain ch;
    ch.link_lengths = vec(j["chain"], "link_lengths", "chain");
    s.chain = ch;
  }
  s.q0 = vec(j, "q0", ctx);
  s.qd0 = vec(j, "qd0", ctx);
  for (const auto& tj : need(j, "tasks", ctx)) {
    check_keys(tj, {"law", "kind", "ks", "kd", "ki", "weight", "refs"}, "tasks[]");
    TaskConfig t;
    t.law = parse_law(str(tj, "law", "tasks[]"), "tasks[]");
    t.kind = parse_kind(str(tj, "kind", "tasks[]"), "tasks[]");
    t.gains.ks = vec(tj, "ks", "tasks[]");
    t.gains.kd = vec(tj, "kd", "tasks[]");
    t.gains.ki = vec(tj, "ki", "tasks[]");
    t.weight = num(tj, "weight", "tasks[]");
    for (const auto& rj : need(tj, "refs", "tasks[]")) {
      check_keys(rj, {"t", "value"}, "tasks[].refs[]");
      t.refs.push_back(SetPoint{num(rj, "t", "tasks[].refs[]"), vec(rj, "value", "tasks[].refs[]")});
    }
    s.tasks.push_back(std::move(t));
  }
  for (const auto& bj : need(j, "barriers", ctx)) {
    check_keys(bj,
               {"form", "mode", "ks_h", "kd_h", "ki_h", "activate_h", "always_active", "joint",
                "limit", "normal", "offset"},
               "barriers[]");
    BarrierConfig b;
    b.geom.form = parse_form(str(bj, "form", "barriers[]"), "barriers[]");
    b.mode = parse_mode(str(bj, "mode", "barriers[]"), "barriers[]");
    b.gains.ks = num(bj, "ks_h", "barriers[]");
    b.gains.kd = num(bj, "kd_h", "barriers[]");
    b.gains.ki = num(bj, "ki_h", "barriers[]");
    b.activate_h = num(bj, "activate_h", "barriers[]");
    const json& aa = need(bj, "always_active", "barriers[]");
    if (!aa.is_boolean()) throw ParseError("barriers[]: 'always_active' must be a boolean");
    b.always_active = aa.get<bool>();
    if (b.geom.form == BarrierForm::HalfPlane) {
      const Vec nrm = vec(bj, "normal", "barriers[]");
      if (nrm.size() != 2) throw ParseError("barriers[]: 'normal' must have 2 entries");
      b.geom.normal = Vec2(nrm[0], nrm[1]);
      b.geom.offset = num(bj, "offset", "barriers[]");
    } else {
      b.geom.joint = integer(bj, "joint", "barriers[]");
      b.geom.limit = num(bj, "limit", "barriers[]");
    }
    s.barriers.push_back(b);
  }
  for (const auto& dj : need(j, "disturbances", ctx)) {
    check_keys(dj, {"t_on", "t_off", "tau"}, "disturbances[]");
    DisturbancePulse d;
    d.t_on = num(dj, "t_on", "disturbances[]");
    d.t_off = num(dj, "t_off", "disturbances[]");
    d.tau = vec(dj, "tau", "disturbances[]");
    s.disturbances.push_back(std::move(d));
  }
  if (j.contains("ramp")) {
    const json& rj = j["ramp"];
    check_keys(rj, {"t0", "period", "ks0", "increment", "kd_factor", "eps_i"}, "ramp");
    s.ramp.enabled = true;
    s.ramp.t0 = num(rj, "t0", "ramp");
    s.ramp.period = num(rj, "period", "ramp");
    s.ramp.ks0 = num(rj, "ks0", "ramp");
    s.ramp.increment = num(rj, "increment", "ramp");
    s.ramp.kd_factor = num(rj, "kd_factor", "ramp");
    s.ramp.eps_i = num(rj, "eps_i", "ramp");
  }
  const json& pj = need(j, "posture", ctx);
  check_keys(pj, {"w0", "kp", "kv", "ref"}, "posture");
  s.posture.w0 = num(pj, "w0", "posture");
  if (pj.contains("kp")) {
    s.posture.kp = vec(pj, "kp", "posture");
    s.posture.kv = vec(pj, "kv", "posture");
    s.posture.q_ref = vec(pj, "ref", "posture");
  }
  const json& mj = need(j, "metrics", ctx);
  check_keys(mj, {"osc_window", "noise_floor", "settle_band", "ttb_threshold"}, "metrics");
  s.metrics.osc_window = num(mj, "osc_window", "metrics");
  s.metrics.noise_floor = num(mj, "noise_floor", "metrics");
  s.metrics.settle_band = num(mj, "settle_band", "metrics");
  s.metrics.ttb_threshold = num_or(mj, "ttb_threshold", 0.02, "metrics");
  s.dt = num(j, "dt", ctx);
  s.t_end = num(j, "t_end", ctx);
  s.substeps = integer(j, "substeps", ctx);
  s.blow_up_cap = num(j, "blow_up_cap", ctx);
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string log_to_csv(const SimLog& log) {
  std::ostringstream out;
  const int n = log.steps() > 0 ? static_cast<int>(log.q[0].size()) : 0;
  const int nmu = log.steps() > 0 ? static_cast<int>(log.mu[0].size()) : 0;
  out << "t";
  auto cols = [&](const char* base, int count) {
    for (int i = 0; i < count; ++i) out << "," << base << i;
  };
  cols("q", n);
  cols("qd", n);
  cols("q_d", n);
  cols("qd_d", n);
  cols("u", n);
  cols("mu", nmu);
  for (size_t b = 0; b < log.barriers.size(); ++b) {
    out << ",h" << b << ",h_d" << b << ",hdot" << b << ",hdot_d" << b << ",bact" << b;
  }
  out << ",kkt,n_active\n";
  for (int i = 0; i < log.steps(); ++i) {
    out << fmt17(log.t[i]);
    auto row = [&](const Vec& v) {
      for (Eigen::Index c = 0; c < v.size(); ++c) out << "," << fmt17(v[c]);
    };
    row(log.q[i]);
    row(log.qd[i]);
    row(log.q_d[i]);
    row(log.qd_d[i]);
    row(log.u[i]);
    row(log.mu[i]);
    for (const auto& trace : log.barriers) {
      out << "," << fmt17(trace.h[i]) << "," << fmt17(trace.h_d[i]) << ","
          << fmt17(trace.h_dot[i]) << "," << fmt17(trace.h_dot_d[i]) << "," << trace.active[i];
    }
    out << "," << fmt17(log.kkt[i]) << "," << log.active_set[i].size() << "\n";
  }
  return out.str();
}

std::string metrics_to_json(const Metrics& m) {
  json j;
  j["settling_time"] = m.settling_time;
  j["steady_state_error"] = m.steady_state_error;
  j["overshoot_beyond_boundary"] = m.overshoot_beyond_boundary;
  j["oscillation_index"] = m.oscillation_index;
  j["instability_flag"] = m.instability_flag;
  j["time_to_boundary"] = m.time_to_boundary;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rqp
