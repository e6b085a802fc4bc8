#include <doctest.h>

#include "pnf/serialize.hpp"

using namespace pnf;

TEST_CASE("number formatting") {
  CHECK(format_real(9.0) == "9");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(kInf) == "inf");
  CHECK(format_real(-kInf) == "-inf");
  CHECK(format_real(std::optional<double>{}) == "");
  CHECK(real(kInf) == "inf");
  CHECK(real(2.0 / 3.0).dump() == "0.666666666667");
  CHECK(real(std::optional<double>{}).is_null());
}

TEST_CASE("config round trip") {
  GameConfig c;
  c.n = 9;
  c.rho = 0.7;
  c.gamma = 0.25;
  c.benefit.scale = 2.0;
  c.exponent = ExponentConvention::appendix;
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.n == 9);
  CHECK(back.rho == 0.7);
  CHECK(back.gamma == 0.25);
  CHECK(back.benefit.scale == 2.0);
  CHECK(back.exponent == ExponentConvention::appendix);

  const auto doc = parse_json(R"({"n": 10, "rho": 0.8, "c": 0.1, "gamma": 0.5,
                                  "benefit": {"kind": "log1p", "scale": 1.0}})");
  CHECK(config_from_json(doc).n == 10);
  CHECK_THROWS_AS(config_from_json(parse_json(R"({"n": 10})")), ParseError);
  CHECK_THROWS_AS(config_from_json(parse_json(R"({"n": 2, "rho": 0.8, "c": 0.1, "gamma": 0.5})")),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json(parse_json(
                      R"({"n": 5, "rho": 0.8, "c": 0.1, "gamma": 0.5, "benefit": {"kind": "sqrt"}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_json("{nope"), ParseError);
}

TEST_CASE("profile round trip") {
  StrategyProfile p{{1.5, 2.0, 0.25}, make_topology(topology::Star{}, 3)};
  const auto back = profile_from_json(profile_to_json(p));
  CHECK(back.x == p.x);
  CHECK(back.g == p.g);
  CHECK_THROWS_AS(profile_from_json(parse_json(R"({"x": [1, 2], "g": [[0, 1], [1]]})")),
                  ProfileError);
  CHECK_THROWS_AS(profile_from_json(parse_json(R"({"x": [1, 2], "g": [[1, 0], [0, 0]]})")),
                  ProfileError);
  CHECK_THROWS_AS(profile_from_json(parse_json(R"({"x": [-1, 2], "g": [[0, 0], [0, 0]]})")),
                  ProfileError);
  CHECK_THROWS_AS(profile_from_json(parse_json(R"({"x": 3})")), ParseError);
}

TEST_CASE("report json") {
  GameConfig c;
  c.n = 4;
  c.gamma = 3.0;
  StrategyProfile p{{9.0, 9.0, 0.0, 9.0}, SubscriptionMatrix(4)};
  const auto j = report_to_json(verify_strict_nash(p, c));
  CHECK(j["verdict"] == "not_equilibrium");
  CHECK(j["witnesses"][0]["reason"] == "zero production");
  CHECK(j["classification"]["kind"] == "asymmetric");
  CHECK(j.dump() == report_to_json(verify_strict_nash(p, c)).dump());
}
