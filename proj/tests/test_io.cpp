#include <cmath>
#include <limits>

#include "doctest.h"

#include "heatlab/errors.hpp"
#include "heatlab/io.hpp"

using namespace heatlab;

TEST_CASE("nonlinearity round trip") {
  auto j = Json::parse(R"({"kind": "FBeta", "params": {"N": 2, "beta": 1}})");
  auto f = nonlinearity_from_json(j);
  CHECK(f.value(2.0) == doctest::Approx(Nonlinearity::f_beta(2, 1.0).value(2.0)));
  auto back = nonlinearity_from_json(to_json(f));
  CHECK(back.value(7.0) == doctest::Approx(f.value(7.0)));
}

TEST_CASE("missing fields name their path") {
  auto j = Json::parse(R"({"kind": "Power", "params": {}})");
  try {
    nonlinearity_from_json(j);
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(std::string(e.what()) == "missing field 'nonlinearity.params.p'");
  }
  CHECK_THROWS_AS(nonlinearity_from_json(Json::parse(R"({"kind": "Cubic"})")), SpecError);
}

TEST_CASE("monitor and profile parsing") {
  auto f = Nonlinearity::power(3.0);
  auto J = monitor_from_json(Json::parse(R"({"kind": "FNegPower", "params": {"r": 2}})"), f);
  CHECK(J.value(2.0) == doctest::Approx(64.0).epsilon(1e-9));
  CHECK_THROWS_AS(monitor_from_json(Json::parse(R"({"kind": "FNegPower", "params": {"r": 2}})"), std::nullopt),
                  SpecError);

  auto p = profile_from_json(Json::parse(R"({"kind": "PowerSingularity", "params": {"c": 2, "a": 0.5, "cutoff": 1}})"),
                             1);
  CHECK(p.value(0.25) == doctest::Approx(4.0));
  CHECK(p.value(4.0) == doctest::Approx(2.0));
}

TEST_CASE("grid specs") {
  auto g = grid_from_string("R=6,h=0.01");
  CHECK(g.R == 6.0);
  CHECK(g.h == 0.01);
  CHECK(g.r_min == GridSpec{}.r_min);
  auto h = grid_from_json(Json::parse(R"({"grading": 1.5})"));
  CHECK(h.grading == 1.5);
  CHECK(h.R == GridSpec{}.R);
  CHECK_THROWS_AS(grid_from_string("R=6,k=1"), SpecError);
}

TEST_CASE("non-finite numbers serialize as null") {
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number(std::nan("")).is_null());
  CHECK(number(1.5).get<double>() == 1.5);
}

TEST_CASE("manifest hash is stable and content-sensitive") {
  Json a = {{"command", "classify"}, {"spec", {{"N", 1}}}};
  Json b = {{"command", "classify"}, {"spec", {{"N", 2}}}};
  CHECK(manifest_hash(a) == manifest_hash(a));
  CHECK(manifest_hash(a) != manifest_hash(b));
  CHECK(manifest_hash(a).size() == 16);
  // FNV-1a 64 offset basis and a published test vector
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("classification outcome serializes its verdict") {
  auto j = to_json(classify_f_beta(2, 1.5, 0.0));
  CHECK(j["verdict"] == "DoublyCritical");
}
