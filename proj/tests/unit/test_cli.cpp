#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "boxlab/io.hpp"
#include "cli.hpp"

using boxlab::cli::run_cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("boxlab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  std::string z4() {
    return write("z4.json", R"({"points": 4, "weights": ["1/4","1/4","1/4","1/4"], "transforms": [[1,2,3,0],[2,3,0,1]]})");
  }

  fs::path dir_;
};

const std::string kData = BOXLAB_TEST_DATA_DIR;

}  // namespace

TEST_F(CliTest, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", z4()}).code, 0);
  const CliRun bad = run({"validate", kData + "/not_bijection.json"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("transform 2 not a bijection"), std::string::npos);
  EXPECT_EQ(run({"validate", write("broken.json", "{\"points\": 2,")}).code, 2);
  EXPECT_EQ(run({"validate", (dir_ / "missing.json").string()}).code, 2);
  const CliRun skew = run({"validate", write("skew.json", R"({"points": 2, "weights": ["1/3","2/3"], "transforms": [[1,0]]})")});
  EXPECT_EQ(skew.code, 1);
  EXPECT_NE(skew.out.find("measure preservation"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"box-measure", z4(), "--threads", "0"}).code, 2);
  EXPECT_EQ(run({"box-measure", z4(), "--order", "0"}).code, 1);
  EXPECT_EQ(run({"box-measure", z4(), "--order", "3"}).code, 1);
  EXPECT_EQ(run({"box-measure", z4(), "--order", "1,1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, BoxMeasureExamples) {
  const CliRun id = run({"box-measure", write("id.json", R"({"points": 2, "weights": ["1/3","2/3"], "transforms": [[0,1]]})")});
  ASSERT_EQ(id.code, 0);
  const json diag = json::parse(id.out);
  EXPECT_EQ(diag.at("entries").size(), 2u);
  EXPECT_EQ(diag.at("entries")[1].at("tuple"), json::parse("[1,1]"));
  EXPECT_EQ(diag.at("entries")[1].at("mass"), "2/3");

  const CliRun z3 = run({"box-measure", write("z3.json", R"({"points": 3, "weights": ["1/3","1/3","1/3"], "transforms": [[1,2,0]]})")});
  const json rot = json::parse(z3.out);
  ASSERT_EQ(rot.at("entries").size(), 9u);
  for (const auto& e : rot.at("entries")) EXPECT_EQ(e.at("mass"), "1/9");

  const json golden = boxlab::io::read_json_file(kData + "/z4_shift1_shift2_box.json");
  const json got = json::parse(run({"box-measure", z4(), "--order", "1,2"}).out);
  EXPECT_EQ(got.at("entries"), golden.at("entries"));
  EXPECT_EQ(got.at("k"), 2);
}

TEST_F(CliTest, BoxMeasureIsByteIdenticalAcrossThreads) {
  const std::string sys = write("z6.json", R"({"points": 6, "weights": ["1/6","1/6","1/6","1/6","1/6","1/6"],
      "transforms": [[1,2,3,4,5,0],[3,4,5,0,1,2],[2,3,4,5,0,1]]})");
  const CliRun one = run({"box-measure", sys, "--threads", "1"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(run({"box-measure", sys, "--threads", "2"}).out, one.out);
  EXPECT_EQ(run({"box-measure", sys, "--threads", "8"}).out, one.out);
}

TEST_F(CliTest, CapExceededExitsThree) {
  EXPECT_EQ(run({"box-measure", z4(), "--cap", "10"}).code, 3);
  ::setenv("BOXLAB_CAP", "10", 1);
  const int env_code = run({"box-measure", z4()}).code;
  const int flag_code = run({"box-measure", z4(), "--cap", "100"}).code;
  ::unsetenv("BOXLAB_CAP");
  EXPECT_EQ(env_code, 3);
  EXPECT_EQ(flag_code, 0);
}

TEST_F(CliTest, SeminormExamples) {
  const std::string ones = write("ones.json", R"({"values": ["1","1","1","1"]})");
  const json one = json::parse(run({"seminorm", z4(), ones}).out);
  EXPECT_EQ(one.at("pow"), "1");
  EXPECT_EQ(one.at("method"), "measure");

  const std::string z2 = write("z2.json", R"({"points": 2, "weights": ["1/2","1/2"], "transforms": [[1,0],[1,0]]})");
  const std::string alt = write("alt.json", R"({"values": ["1","-1"]})");
  const CliRun all = run({"seminorm", z2, alt, "--method", "all"});
  ASSERT_EQ(all.code, 0);
  const json doc = json::parse(all.out);
  EXPECT_TRUE(doc.at("agree").get<bool>());
  for (const char* m : {"measure", "oracle", "recursion"}) EXPECT_EQ(doc.at("methods").at(m).at("pow"), "1");

  const CliRun faulty = run({"seminorm", z2, alt, "--method", "all", "--inject-fault"});
  EXPECT_EQ(faulty.code, 4);
  EXPECT_FALSE(json::parse(faulty.out).at("agree").get<bool>());

  EXPECT_EQ(run({"seminorm", z4(), alt}).code, 1);
}

TEST_F(CliTest, GowersExamples) {
  const json one = json::parse(run({"gowers", write("o.json", R"({"values": ["1","1","1"]})"), "-N", "3", "-d", "2"}).out);
  EXPECT_EQ(one.at("gowers_pow"), "1");
  const std::string alt = write("alt.json", R"({"values": ["1","-1"]})");
  EXPECT_EQ(json::parse(run({"gowers", alt, "--modulus", "2", "--degree", "2"}).out).at("gowers_pow"), "1");
  const std::string r5 = write("r5.json", R"({"values": ["1/2","-1","2/3","0","-1/5"]})");
  const CliRun cross = run({"gowers", r5, "-N", "5", "-d", "2", "--cross-check"});
  ASSERT_EQ(cross.code, 0);
  const json doc = json::parse(cross.out);
  EXPECT_EQ(doc.at("box_pow"), doc.at("gowers_pow"));
  EXPECT_EQ(run({"gowers", r5, "-N", "5", "-d", "2", "--cross-check", "--inject-fault"}).code, 4);
}

TEST_F(CliTest, AverageExamples) {
  const std::string f = kData + "/z4_alternating.json";
  const json full = json::parse(run({"average", z4(), f, f, "--interval", "1:4"}).out);
  EXPECT_EQ(full.at("intervals")[0].at("values"), full.at("limit").at("values"));
  EXPECT_EQ(full.at("limit").at("values"), json::parse(R"(["0","0","0","0"])"));

  const std::string ones = write("ones.json", R"({"values": ["1","1","1","1"]})");
  const json lim = json::parse(run({"average", z4(), ones, ones, "--limit"}).out);
  EXPECT_EQ(lim.at("limit").at("values"), json::parse(R"(["1","1","1","1"])"));

  const CliRun csv = run({"average", z4(), f, ones, "--interval", "0:3", "--interval", "-2:8", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  std::istringstream lines(csv.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "start,length,l2_norm_sq,distance_sq,bound,within_bound,f0,f1,f2,f3");
  EXPECT_EQ(rows[1].rfind("limit,4,", 0), 0u);
  EXPECT_EQ(rows[3].rfind("-2,8,", 0), 0u);

  EXPECT_EQ(run({"average", z4(), f, f}).code, 2);
  EXPECT_EQ(run({"average", z4(), f, f, "--interval", "0-3"}).code, 2);
  EXPECT_EQ(run({"average", z4(), f}).code, 1);
}

TEST_F(CliTest, MagicCheck) {
  const CliRun r = run({"magic-check", write("z3.json", R"({"points": 3, "weights": ["1/3","1/3","1/3"], "transforms": [[1,2,0]]})"),
                     "--seed", "3", "--draws", "5"});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc.at("carrier_size"), 9);
  EXPECT_EQ(doc.at("wstar_cells"), 3);
  EXPECT_TRUE(doc.at("all_hold").get<bool>());
  EXPECT_EQ(doc.at("checks").size(), 5u);
}

TEST_F(CliTest, VerifyPassesAndIsDeterministic) {
  const CliRun one = run({"verify", z4(), "--seed", "5", "--draws", "30", "--threads", "1"});
  ASSERT_EQ(one.code, 0) << one.out << one.err;
  EXPECT_NE(one.out.find("all properties hold"), std::string::npos);
  EXPECT_EQ(one.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(run({"verify", z4(), "--seed", "5", "--draws", "30", "--threads", "2"}).out, one.out);
  EXPECT_EQ(run({"verify", z4(), "--seed", "5", "--draws", "30", "--threads", "8"}).out, one.out);
  EXPECT_EQ(run({"verify", kData + "/identity3.json", "--draws", "20"}).code, 0);
}

TEST_F(CliTest, VerifyReportsInjectedFaultWithCounterexample) {
  const CliRun r = run({"verify", z4(), "--seed", "1", "--draws", "10", "--inject-fault", "seminorm.csg"});
  EXPECT_EQ(r.code, 5);
  const auto pos = r.out.find("FAIL seminorm.csg draws=10 draw=0 counterexample=");
  ASSERT_NE(pos, std::string::npos);
  const auto start = r.out.find('{', pos);
  const json cx = json::parse(r.out.substr(start, r.out.find('\n', start) - start));
  EXPECT_EQ(cx.at("property"), "seminorm.csg");
  EXPECT_TRUE(cx.contains("fs"));

  const CliRun j = run({"verify", z4(), "--draws", "5", "--format", "json", "--inject-fault", "magic.span0"});
  EXPECT_EQ(j.code, 5);
  const json doc = json::parse(j.out);
  EXPECT_FALSE(doc.at("passed").get<bool>());
  EXPECT_EQ(run({"verify", z4(), "--inject-fault", "no.such.property"}).code, 1);
}
