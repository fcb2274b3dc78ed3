#include "doctest.h"

#include "schwarziso/io.hpp"

#include <cstdlib>
#include <sstream>

using namespace schwarziso;

TEST_SUITE("io") {

TEST_CASE("17 significant digits survive a round trip") {
  for (double x : {0.1, 1.0 / 3.0, 2.6723451177837885, -1e-300, 6.02214076e23}) CHECK(std::strtod(fmt17(x).c_str(), nullptr) == x);
  CHECK(fmt17(std::nan("")) == "nan");
  CHECK(fmt17(-INFINITY) == "-inf");
}

TEST_CASE("run configuration") {
  const auto c = parse_run_config(R"({"params": {"M": 1, "m": 0.02, "A": 1, "A1": 1, "B": 0.2, "B1": 0.2},
    "energy_convention": "paper_notation", "tolerances": {"rtol": 1e-9, "atol": 1e-11, "max_steps": 1000},
    "sink_bound": "sharp", "seed": 7, "output_dir": "out"})");
  CHECK(c.params.m == 0.02);
  CHECK(c.convention == EnergyConvention::paper_notation);
  CHECK(c.rtol == 1e-9);
  CHECK(c.max_steps == 1000);
  CHECK(c.sink_bound == SinkBound::sharp);
  CHECK(c.seed == 7);
  CHECK(c.output_dir == "out");
  const auto io = integrator_options(c);
  CHECK(io.atol == 1e-11);
  // a bare parameter object
  CHECK(parse_run_config(R"({"M": 2, "m": 0.01, "A": 1, "A1": 1, "B": 0.2, "B1": 0.2})").params.M == 2);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_run_config(R"({"params": {"M": 1, "m": 0.01, "A": 1, "A1": 1, "B": 0.2, "B1": 0.2}, "colour": 1})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"params": {"M": -1, "m": 0.01, "A": 1, "A1": 1, "B": 0.2, "B1": 0.2}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_run_config(R"({"params": {"M": "one"}})"), InvalidInput);
  CHECK_THROWS_AS(parse_run_config("{not json"), InvalidInput);
  CHECK_THROWS_AS(load_run_config("/nonexistent/cfg.json"), InvalidInput);
}

TEST_CASE("fate batch input") {
  const auto jobs = parse_fate_jobs(R"([{"C": 1.5, "h": -1, "state0": {"r": 0.3, "v": -1, "theta": 0.1, "w": 0}}])");
  REQUIRE(jobs.size() == 1);
  CHECK(jobs[0].C == 1.5);
  CHECK(jobs[0].state0.theta == 0.1);
  CHECK_THROWS_AS(parse_fate_jobs(R"([{"C": 1.5, "h": -1}])"), InvalidInput);
}

TEST_CASE("trajectory and event output") {
  Trajectory t;
  t.chart = Chart::planar;
  State s(2);
  s << 1.0, -0.5;
  t.t = {0.0, 0.25};
  t.states = {s, s};
  t.events.push_back({0.25, 0, "r_below", true, s});
  std::ostringstream os;
  write_trajectory_csv(os, t);
  const std::string csv = os.str();
  CHECK(csv.rfind("# chart=planar", 0) == 0);
  CHECK(csv.find("t,r,v\n") != std::string::npos);
  CHECK(csv.find("0.25,1,-0.5") != std::string::npos);
  CHECK(events_json(t).find("\"r_below\"") != std::string::npos);
}

TEST_CASE("svg emitter") {
  const std::string svg = render_svg("t", "x", "y", {{"a", {0, 1, 2}, {0, 1, std::nan("")}}});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

}
