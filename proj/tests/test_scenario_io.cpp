#include <doctest.h>

#include <rqp/builtins.hpp>
#include <rqp/scenario_io.hpp>

#include <json.hpp>

#include <algorithm>
#include <sstream>

using namespace rqp;

TEST_SUITE("scenario_io") {

TEST_CASE("every builtin round-trips through the text form") {
  for (const auto& s : builtin_scenarios()) {
    CAPTURE(s.id);
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    CHECK(serialize_scenario(back) == text);
    CHECK(back.id == s.id);
    CHECK(back.joints.size() == s.joints.size());
    CHECK(back.tasks.size() == s.tasks.size());
    CHECK(back.barriers.size() == s.barriers.size());
    CHECK(back.ramp.enabled == s.ramp.enabled);
  }
}

TEST_CASE("unknown keys are rejected with the key name") {
  const std::string text = serialize_scenario(builtin_scenario("fig4-left"));

  auto j = nlohmann::json::parse(text);
  j["extra"] = 1;
  CHECK_THROWS_WITH_AS(parse_scenario(j.dump()), "scenario: unknown key 'extra'", ParseError);

  auto j2 = nlohmann::json::parse(text);
  j2["tasks"][0]["typo"] = true;
  CHECK_THROWS_AS(parse_scenario(j2.dump()), ParseError);

  auto j3 = nlohmann::json::parse(text);
  j3["metrics"]["windw"] = 2.0;
  CHECK_THROWS_AS(parse_scenario(j3.dump()), ParseError);
}

TEST_CASE("malformed documents and schema mismatches fail to parse") {
  CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[1, 2, 3]"), ParseError);

  auto j = nlohmann::json::parse(serialize_scenario(builtin_scenario("fig4-left")));
  j["schema_version"] = kScenarioSchemaVersion + 1;
  CHECK_THROWS_WITH_AS(parse_scenario(j.dump()), "scenario: unsupported schema_version",
                       ParseError);

  // missing required key
  auto j2 = nlohmann::json::parse(serialize_scenario(builtin_scenario("fig4-left")));
  j2.erase("tasks");
  CHECK_THROWS_AS(parse_scenario(j2.dump()), ParseError);

  // wrong type
  auto j3 = nlohmann::json::parse(serialize_scenario(builtin_scenario("fig4-left")));
  j3["dt"] = "fast";
  CHECK_THROWS_AS(parse_scenario(j3.dump()), ParseError);

  // structurally valid but semantically invalid documents are rejected too
  auto j4 = nlohmann::json::parse(serialize_scenario(builtin_scenario("fig4-left")));
  j4["dt"] = -1.0;
  CHECK_THROWS_AS(parse_scenario(j4.dump()), std::invalid_argument);
}

TEST_CASE("file round-trip") {
  const Scenario s = builtin_scenario("planar-halfplane-recbf");
  const std::string path = "scenario_io_roundtrip.json";
  write_file(path, serialize_scenario(s));
  const Scenario back = load_scenario_file(path);
  CHECK(serialize_scenario(back) == serialize_scenario(s));
  CHECK_THROWS_AS(load_scenario_file("does-not-exist.json"), ParseError);
}

TEST_CASE("catalog contents") {
  const auto names = builtin_names();
  CHECK(names.size() == 16);
  for (const char* expected :
       {"fig4-left", "fig4-right", "fig7-ffwd", "fig7-fb", "fig8-eps-0.01", "fig8-eps-0.1",
        "fig8-eps-1", "fig8-eps-2", "fig10-a", "fig10-b", "fig12-eps-0.02", "fig12-eps-0.2",
        "fig12-eps-2", "fig12-eps-5", "planar-gain-ramp", "planar-halfplane-recbf"}) {
    CAPTURE(expected);
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);

  // the integral-gain family differs only in ki
  const Scenario a = builtin_scenario("fig8-eps-0.1");
  const Scenario b = builtin_scenario("fig8-eps-1");
  CHECK(a.tasks[0].gains.ks[0] == b.tasks[0].gains.ks[0]);
  CHECK(a.tasks[0].gains.kd[0] == b.tasks[0].gains.kd[0]);
  CHECK(a.tasks[0].gains.ki[0] == doctest::Approx(0.1 * b.tasks[0].gains.ki[0]).epsilon(1e-15));
}

TEST_CASE("csv layout and reproducibility") {
  Scenario s = builtin_scenario("fig7-ffwd");
  s.t_end = 0.5;
  const SimLog log = run_scenario(s);
  const std::string csv = log_to_csv(log);

  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "t,q0,qd0,q_d0,qd_d0,u0,mu0,h0,h_d0,hdot0,hdot_d0,bact0,kkt,n_active");
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == log.steps());

  // byte-identical across reruns
  CHECK(log_to_csv(run_scenario(s)) == csv);

  // full precision: the first data row starts with t = 0 and q = 0
  CHECK(csv.find("\n0,0,0,") != std::string::npos);
}

TEST_CASE("metrics serialization") {
  Metrics m;
  m.settling_time = 1.5;
  m.steady_state_error = 0.25;
  m.oscillation_index = 0.5;
  m.instability_flag = true;
  m.time_to_boundary = {0.5, -1.0};
  const std::string text = metrics_to_json(m);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["settling_time"] == 1.5);
  CHECK(j["steady_state_error"] == 0.25);
  CHECK(j["overshoot_beyond_boundary"] == 0.0);
  CHECK(j["oscillation_index"] == 0.5);
  CHECK(j["instability_flag"] == true);
  REQUIRE(j["time_to_boundary"].size() == 2);
  CHECK(j["time_to_boundary"][1] == -1.0);
}

}  // TEST_SUITE
