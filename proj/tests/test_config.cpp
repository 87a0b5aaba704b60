#include <gtest/gtest.h>

#include "kglab/config.hpp"

using namespace kglab;

namespace {

const std::string kDefaultConfig = std::string(KGLAB_SOURCE_DIR) + "/configs/default.json";

}  // namespace

TEST(Config, DefaultConfigLoads) {
  const auto c = load_config(kDefaultConfig);
  EXPECT_EQ(c.n, 2);
  EXPECT_EQ(c.variant, Variant::tilde);
  EXPECT_EQ(c.cutoffs, (std::vector<long long>{100, 200, 400, 800}));
  EXPECT_TRUE(c.psi.build().satisfies_cap());
}

TEST(Config, RoundTrip) {
  const auto c = load_config(kDefaultConfig);
  const Json j = config_json(c);
  const auto again = parse_config(Json::parse(j.dump()));
  EXPECT_EQ(config_json(again), j);
}

TEST(Config, RejectsPsiAtOneHalf) {
  Json j = Json::parse(R"({"psi": {"kind": "table", "values": ["1/2", "1/4"]}})");
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, RejectsNonCoprimePair) {
  Json j = Json::parse(R"({"dimension": {"n": 1, "m": 1}, "target": {"kind": "pair", "a": [2], "b": 4}})");
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, RejectsBadFields) {
  EXPECT_THROW(parse_config(Json::parse(R"({"format": "xml"})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"schedule": [[10, 20], [5, 30]]})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"variant": "fancy"})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"delta": ["1/2"]})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"psi": {"kind": "power", "c": "abc"}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"samples": "many"})")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, TargetKinds) {
  const auto s = parse_config(Json::parse(R"({"target": {"kind": "surrogate", "name": "e-2"}})"));
  EXPECT_EQ(s.target.build().scalar(), surrogate_e_minus_2());
  const auto p = parse_config(Json::parse(R"({"target": {"kind": "pair", "a": 1, "b": 3}})"));
  EXPECT_EQ(p.target.build().b, 3);
  const auto m = parse_config(Json::parse(R"({"target": {"kind": "moving", "table": {"1": "1/3", "2": "1/5"}}})"));
  EXPECT_EQ(m.target.build().kind, TargetScheme::Kind::moving);
}
