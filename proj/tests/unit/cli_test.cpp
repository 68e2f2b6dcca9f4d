#include <gtest/gtest.h>

#include "commands.hpp"

namespace thetalab::cli {
namespace {

TEST(ParseLadder, RangeAndList) {
  const auto r = parse_ladder("2^-3..2^-5");
  ASSERT_EQ(r.size(), 3U);
  EXPECT_DOUBLE_EQ(r[0], 0.125);
  EXPECT_DOUBLE_EQ(r[2], 0.03125);
  EXPECT_EQ(parse_ladder("0.1,0.05,0.01"), (std::vector<double>{0.1, 0.05, 0.01}));
}

TEST(ParseLadder, Rejects) {
  EXPECT_THROW(parse_ladder("0.1"), InputError);
  EXPECT_THROW(parse_ladder("0.1,0.2"), InputError);
  EXPECT_THROW(parse_ladder("0.1,x"), InputError);
  EXPECT_THROW(parse_ladder("2^-5..2^-3"), InputError);
  EXPECT_THROW(parse_ladder("0.1,-0.05"), InputError);
}

TEST(ToCsv, UnionHeaderAndQuoting) {
  const nlohmann::json rows = {{{"a", 1}, {"b", "x,y"}}, {{"a", 2}, {"c", true}}};
  EXPECT_EQ(to_csv(rows), "a,b,c\n1,\"x,y\",\n2,,true\n");
}

TEST(Commands, CharDecompose) {
  JobConfig cfg;
  cfg.command = "char";
  cfg.action = "decompose";
  cfg.text = "[10;10]";
  const auto r = run_char(cfg);
  EXPECT_EQ(r.body["parity"], "odd");
  EXPECT_EQ(r.body["members"], nlohmann::json::array({"o1"}));
  cfg.action = "explode";
  EXPECT_THROW(run_char(cfg), InputError);
}

TEST(Commands, OrbitAndEnvelope) {
  JobConfig cfg;
  cfg.command = "orbit";
  cfg.g = 3;
  const auto r = run_orbit(cfg);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.body["orbit_size"], 36);
  const auto j = envelope(cfg, r, "2026-01-01T00:00:00Z");
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["command"], "orbit");
  EXPECT_EQ(j["g"], 3);
  EXPECT_FALSE(j.contains("ladder"));
  EXPECT_FALSE(j.contains("rows"));
  cfg.seed_char = "[10;10]";
  EXPECT_THROW(run_orbit(cfg), InputError);
}

}  // namespace
}  // namespace thetalab::cli
