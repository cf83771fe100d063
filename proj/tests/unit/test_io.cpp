#include <gtest/gtest.h>

#include "boxlab/io.hpp"
#include "boxlab/magic.hpp"
#include "test_support.hpp"

using namespace boxlab;
using namespace boxlab::testing;
using io::json;

TEST(Io, SystemRoundTrip) {
  const FiniteSystem sys({q("1/2"), q("1/2"), q("0")}, {perm({1, 0, 2})}, {"a", "b", "c"});
  const json doc = io::to_json(sys);
  EXPECT_EQ(doc.at("weights"), json::parse(R"(["1/2","1/2","0"])"));
  const FiniteSystem back = FiniteSystem::from_raw(io::parse_system(doc));
  EXPECT_EQ(back.transform(0), sys.transform(0));
  EXPECT_TRUE(std::equal(back.weights().begin(), back.weights().end(), sys.weights().begin()));
  EXPECT_EQ(back.labels()[2], "c");
}

TEST(Io, AcceptsIntegerStringsAndNumbers) {
  const auto raw = io::parse_system(json::parse(R"({"points": 1, "weights": ["1"], "transforms": [[0]]})"));
  EXPECT_EQ(raw.weights.front(), q("1"));
  EXPECT_EQ(io::parse_rational_value(json(3)), q("3"));
}

TEST(Io, SchemaErrors) {
  EXPECT_THROW(io::parse_system(json::parse(R"({"weights": [], "transforms": []})")), io::ParseError);
  EXPECT_THROW(io::parse_system(json::parse(R"({"points": 1, "weights": [0.5], "transforms": [[0]]})")),
               io::ParseError);
  EXPECT_THROW(io::parse_system(json::parse(R"({"points": 1, "weights": ["1"], "transforms": [["0"]]})")),
               io::ParseError);
  EXPECT_THROW(io::parse_observable(json::parse(R"({"values": ["1/0"]})")), io::ParseError);
  EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), io::ParseError);
}

TEST(Io, ObservableWithBound) {
  const Observable f = io::parse_observable(json::parse(R"({"values": ["1/2", "-1"], "sup_bound": "1"})"));
  EXPECT_EQ(*f.sup_bound(), q("1"));
  EXPECT_EQ(io::to_json(f).at("values"), json::parse(R"(["1/2","-1"])"));
  EXPECT_THROW(io::parse_observable(json::parse(R"({"values": ["2"], "sup_bound": "1"})")), InvariantViolation);
}

TEST(Io, MeasureRoundTrip) {
  const auto o = iota_order(2);
  const auto m = build_box_measure(z4_shift1_shift2(), o);
  const json doc = io::to_json(m);
  EXPECT_EQ(doc.at("k"), 2);
  EXPECT_EQ(doc.at("entries").size(), 32u);
  EXPECT_EQ(doc.at("entries")[0].at("mass"), "1/32");
  EXPECT_EQ(io::parse_measure(doc), m);
}

TEST(Io, SeminormValueShape) {
  SeminormValue v{2, q("1/16"), {0, 1}};
  const json doc = io::to_json(v);
  EXPECT_EQ(doc.at("pow"), "1/16");
  EXPECT_EQ(doc.at("root_approx"), "0.5");
  EXPECT_EQ(doc.at("order"), json::parse("[1,2]"));
}

TEST(Io, StarSystemShape) {
  const auto o = iota_order(1);
  const FiniteSystem sys = FiniteSystem::cyclic(2, std::vector<std::int64_t>{1});
  const json doc = io::to_json(build_star_system(sys, o));
  EXPECT_EQ(doc.at("carrier").size(), 4u);
  EXPECT_EQ(doc.at("weights").size(), 4u);
  EXPECT_EQ(doc.at("star_transforms").size(), 1u);
  EXPECT_EQ(doc.at("diag_transforms").size(), 1u);
}
