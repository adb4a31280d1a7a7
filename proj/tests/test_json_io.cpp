#include <cmath>
#include <limits>

#include <doctest.h>

#include "quatspec/battery.hpp"
#include "quatspec/errors.hpp"
#include "quatspec/json_io.hpp"
#include "quatspec/oracle.hpp"

using namespace quatspec;

TEST_CASE("matrix round trip")
{
  OracleGenerator gen(61);
  const QMatrix t = gen.matrix(3);
  const QMatrix back = parse_matrix(dump(matrix_to_json(t)));
  for (std::size_t r = 0; r < 3; r++)
  {
    for (std::size_t c = 0; c < 3; c++)
    {
      CHECK(approx_equal(back(r, c), t(r, c), 0.0));
    }
  }
}

TEST_CASE("parse a small document")
{
  const QMatrix t = parse_matrix(R"({"n": 2, "entries": [[[0,1,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,2,0]]]})");
  CHECK(approx_equal(t(0, 0), Quaternion::i(), 0.0));
  CHECK(approx_equal(t(1, 1), 2.0 * Quaternion::j(), 0.0));
}

TEST_CASE("malformed documents")
{
  CHECK_THROWS_AS(parse_matrix("{"), ParseError);
  CHECK_THROWS_AS(parse_matrix("[]"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"entries": [[[1,0,0,0]]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"n": 2, "entries": [[[1,0,0,0]]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"n": 2, "entries": [[[1,0,0,0],[1,0,0,0]],[[1,0,0,0]]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"n": 1, "entries": [[[1,0,0]]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"n": 1, "entries": [[[1,"a",0,0]]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"n": 0, "entries": []})"), SizeError);
  CHECK_THROWS_AS(parse_matrix(R"({"n": 65, "entries": []})"), SizeError);
  CHECK_THROWS_AS(load_matrix("/nonexistent/matrix.json"), ParseError);
}

TEST_CASE("spectrum document")
{
  const SpectrumReport rep = s_spectrum(QMatrix::diag({Quaternion(1.0, 0.0, 1.0)}));
  const Json doc = spectrum_to_json(rep);
  REQUIRE(doc["spheres"].size() == 1);
  CHECK(doc["spheres"][0]["u"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["spheres"][0]["v"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["spheres"][0]["mult"].get<int>() == 1);
  CHECK(doc["spheres"][0]["gap"].is_null());
  CHECK(doc.contains("cluster_tol"));
}

TEST_CASE("helpers")
{
  CHECK(number_or_null(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number_or_null(std::nan("")).is_null());
  CHECK(number_or_null(2.5).get<double>() == 2.5);
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(dump(Json::object()).back() == '\n');
}

TEST_CASE("battery report is deterministic and passes")
{
  BatteryConfig cfg;
  cfg.count = 6;
  cfg.seed = 3;
  const BatteryReport a = run_random_battery(cfg);
  const BatteryReport b = run_random_battery(cfg);
  CHECK(a.pass);
  CHECK(dump(battery_to_json(a)) == dump(battery_to_json(b)));
}

TEST_CASE("battery detects a corrupted projector")
{
  BatteryConfig cfg;
  cfg.count = 3;
  cfg.fault = "projector";
  const BatteryReport rep = run_random_battery(cfg);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.first_failure.has_value());
  CHECK(*rep.first_failure == "projector_idempotency");
}
