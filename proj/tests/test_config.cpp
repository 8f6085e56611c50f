#include <doctest.h>

#include "nlpot/config.hpp"

using namespace nlpot;

TEST_CASE("config: unknown keys are rejected by name and path") {
  json j{{"n", 1}, {"s", 0.5}, {"p", 2.0}, {"blah", 3}};
  try {
    parse_params(j, "config.params");
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("blah") != std::string::npos);
    CHECK(msg.find("config.params") != std::string::npos);
  }
}

TEST_CASE("config: missing keys name the field") {
  json j{{"n", 1}, {"s", 0.5}};
  CHECK_THROWS_WITH_AS(parse_params(j, "config.params"),
                       doctest::Contains("missing key 'p'"), std::invalid_argument);
}

TEST_CASE("config: params range validation") {
  json j{{"n", 3}, {"s", 0.5}, {"p", 2.0}};
  CHECK_THROWS(parse_params(j, "x"));
  json j2{{"n", 1}, {"s", 1.5}, {"p", 2.0}};
  CHECK_THROWS(parse_params(j2, "x"));
}

TEST_CASE("config: region parsing round trip") {
  json j{{"type", "difference"},
         {"a", {{"type", "ball"}, {"center", {0.0}}, {"radius", 0.5}, {"closed", false}}},
         {"b", {{"type", "halfspace"}, {"normal", {1.0}}, {"offset", 0.0}}}};
  Region r = parse_region(j, 1, "region");
  CHECK(r.contains(point1(-0.3), 1));       // in ball, not in halfspace
  CHECK_FALSE(r.contains(point1(0.3), 1));  // removed by the halfspace
  CHECK_FALSE(r.contains(point1(-0.7), 1)); // outside the ball

  json bad{{"type", "ball"}, {"center", {0.0}}, {"radius", 0.5}, {"clsed", true}};
  CHECK_THROWS_WITH_AS(parse_region(bad, 1, "region"), doctest::Contains("clsed"),
                       std::invalid_argument);
}

TEST_CASE("config: kernel parsing") {
  json j{{"variant", "standard"}};
  KernelSpec k = parse_kernel(j, "kernel");
  CHECK(k.standard_equivalent());

  json j2{{"variant", "coefficient"},
          {"coefficient", {{"kind", "cosine_sum"}, {"amplitude", 0.5}, {"freq", 2.0}}}};
  KernelSpec k2 = parse_kernel(j2, "kernel");
  CHECK_FALSE(k2.standard_equivalent());
  CHECK(k2.coeff.min_value() == doctest::Approx(0.5));

  json j3{{"variant", "nonsense"}};
  CHECK_THROWS(parse_kernel(j3, "kernel"));
}

TEST_CASE("config: boundary data parsing") {
  json j{{"kind", "clamped_linear"}, {"value", 1.0}, {"direction", {-1.0}}, {"lo", 0.0},
         {"hi", 1.0}};
  BoundaryDataSpec g = parse_boundary_data(j, 1, "g");
  CHECK(g.eval(point1(0.0), 1) == doctest::Approx(1.0));
  CHECK(g.eval(point1(2.0), 1) == doctest::Approx(0.0));
  CHECK(g.eval(point1(-5.0), 1) == doctest::Approx(1.0));
}

TEST_CASE("config: grid parsing validates counts") {
  json j{{"box", {{-1.0}, {1.0}}}, {"cells", {16}}};
  auto g = parse_grid(j, 1, "grid");
  CHECK(g->size() == 16);
  json bad{{"box", {{-1.0}, {1.0}}}, {"cells", {16, 16}}};
  CHECK_THROWS(parse_grid(bad, 1, "grid"));
}

TEST_CASE("config: hash is deterministic and content sensitive") {
  json a{{"params", {{"n", 1}, {"s", 0.5}, {"p", 2.0}}}, {"seed", 42}};
  json b{{"seed", 42}, {"params", {{"p", 2.0}, {"s", 0.5}, {"n", 1}}}}; // same content
  json c{{"params", {{"n", 1}, {"s", 0.5}, {"p", 2.0}}}, {"seed", 43}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
}
