#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "ideageo/session.hpp"
#include "json.hpp"
#include "oracles.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ideageo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ideageo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// One small synthetic session, embedded and analysed, shared by the tests below.
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new oracle::TempDir("cli");
    ASSERT_EQ(run({"synth", "--out", p("s.json"), "--participants", "15", "--days", "3",
                   "--design-tokens", "60", "--seed", "3"}).code, 0);
    ASSERT_EQ(run({"embed", p("s.json"), "--out", p("m.bin"), "--dim", "20", "--epochs", "5"}).code, 0);
    ASSERT_EQ(run({"analyze", p("s.json"), p("m.bin"), "--out-report", p("r.json")}).code, 0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string p(const std::string& name) { return (*dir_ / name).string(); }
  static json read_json(const std::string& name) { return json::parse(oracle::slurp(p(name))); }

  static oracle::TempDir* dir_;
};

oracle::TempDir* CliPipeline::dir_ = nullptr;

}  // namespace

TEST(Cli, HelpAndUnknownCommand) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"embed", "--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"embed"}).code, 2);
}

TEST(Cli, BadValuesAreUsageErrors) {
  oracle::TempDir dir("cli-usage");
  const auto out = (dir / "x").string();
  EXPECT_EQ(run({"embed", "missing.json", "--out", out, "--dim", "0"}).code, 2);
  EXPECT_EQ(run({"embed", "missing.json", "--out", out, "--mode", "skipgram"}).code, 2);
  EXPECT_EQ(run({"allocate", "r.json", "--out", out, "--condition", "mixed"}).code, 2);
  EXPECT_EQ(run({"terrain", "d.csv", "--out", out, "--grid", "10by10"}).code, 2);
  EXPECT_EQ(run({"terrain", "d.csv", "--out", out, "--bandwidth", "-1"}).code, 2);
  EXPECT_EQ(run({"synth", "--out", out, "--participants", "4"}).code, 2);
}

TEST(Cli, MissingInputIsDataError) {
  oracle::TempDir dir("cli-missing");
  const auto r = run({"embed", (dir / "none.json").string(), "--out", (dir / "m").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("none.json"), std::string::npos);
}

TEST(Cli, MalformedSessionIsDataError) {
  oracle::TempDir dir("cli-bad");
  ideageo::write_file(dir / "bad.json", "{\"schema_version\": 1, \"participants\": 5}");
  EXPECT_EQ(run({"embed", (dir / "bad.json").string(), "--out", (dir / "m").string()}).code, 3);
}

TEST_F(CliPipeline, SynthWritesSessionTruthAndManifest) {
  EXPECT_NO_THROW(ideageo::load_session(p("s.json")));
  const auto truth = read_json("s.truth.json");
  EXPECT_TRUE(truth.contains("utility"));
  const auto m = read_json("s.json.manifest.json");
  EXPECT_EQ(m.at("tool"), "ideageo");
  EXPECT_EQ(m.at("subcommand"), "synth");
  EXPECT_EQ(m.at("seed"), 3);
  for (const char* key : {"version", "parameters", "inputs", "outputs"}) EXPECT_TRUE(m.contains(key)) << key;
}

TEST_F(CliPipeline, EmbedManifestRecordsConfig) {
  const auto m = read_json("m.bin.manifest.json");
  EXPECT_EQ(m.at("subcommand"), "embed");
  EXPECT_EQ(m.at("parameters").at("dim"), 20);
  EXPECT_EQ(m.at("parameters").at("epochs"), 5);
  EXPECT_EQ(m.at("parameters").at("mode"), "pv-dm");
  EXPECT_EQ(m.at("inputs").at(0), p("s.json"));
  EXPECT_EQ(m.at("outputs").at(0), p("m.bin"));
  const auto model = ideageo::load_model(p("m.bin"));
  EXPECT_EQ(model.dim(), 20u);
}

TEST_F(CliPipeline, AnalyzeReportAndSidecars) {
  const auto r = read_json("r.json");
  for (const char* key : {"session", "groups", "comparisons", "projection", "best_design"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(r.at("groups").size(), 3u);
  const auto designs = oracle::slurp(p("r.designs.csv"));
  EXPECT_EQ(designs.rfind("design_id,participant_id,group,x,y,mean_score,scores", 0), 0u);
  EXPECT_FALSE(oracle::slurp(p("r.ideas.csv")).empty());
  EXPECT_EQ(read_json("r.json.manifest.json").at("subcommand"), "analyze");
}

TEST_F(CliPipeline, TerrainFromCsvAndFromReportAgree) {
  ASSERT_EQ(run({"terrain", p("r.designs.csv"), "--out", p("t1"), "--grid", "30x20", "--truth",
                 p("s.truth.json")}).code, 0);
  ASSERT_EQ(run({"terrain", p("r.json"), "--out", p("t2"), "--grid", "30x20"}).code, 0);
  EXPECT_EQ(oracle::slurp(p("t1.csv")), oracle::slurp(p("t2.csv")));
  EXPECT_EQ(oracle::slurp(p("t1.ppm")).rfind("P6\n120 80\n255\n", 0), 0u);
  const auto summary = read_json("t1.summary.json");
  EXPECT_TRUE(summary.contains("argmax"));
  EXPECT_TRUE(summary.contains("peaks"));
  EXPECT_TRUE(summary.at("planted_peak").contains("cell_distance"));
  EXPECT_FALSE(read_json("t2.summary.json").contains("planted_peak"));
  EXPECT_TRUE(std::filesystem::exists(p("t1.manifest.json")) ||
              std::filesystem::exists(p("t1.csv.manifest.json")));
}

TEST_F(CliPipeline, AllocateAllConditions) {
  for (const char* condition : {"clustered", "random", "dispersed"}) {
    const auto out = p(std::string("a-") + condition + ".json");
    ASSERT_EQ(run({"allocate", p("s.json"), "--out", out, "--condition", condition, "--model",
                   p("m.bin")}).code, 0);
    const auto a = json::parse(oracle::slurp(out));
    EXPECT_EQ(a.at("condition"), condition);
    ASSERT_EQ(a.at("groups").size(), 1u);
    EXPECT_EQ(a.at("groups").at(0).at("placement").size(), 15u);
  }
  const auto c = json::parse(oracle::slurp(p("a-clustered.json"))).at("groups").at(0).at("score").get<double>();
  const auto d = json::parse(oracle::slurp(p("a-dispersed.json"))).at("groups").at(0).at("score").get<double>();
  EXPECT_GT(c, d);
}

TEST_F(CliPipeline, AllocateSplitsIntoGroups) {
  const auto out = p("a-split.json");
  ASSERT_EQ(run({"allocate", p("s.json"), "--out", out, "--condition", "random", "--n", "5",
                 "--model", p("m.bin")}).code, 0);
  const auto a = json::parse(oracle::slurp(out));
  EXPECT_EQ(a.at("groups").size(), 3u);
  EXPECT_EQ(run({"allocate", p("s.json"), "--out", out, "--condition", "random", "--degree", "3",
                 "--model", p("m.bin")}).code, 2);
  EXPECT_EQ(run({"allocate", p("s.json"), "--out", out, "--condition", "random", "--n", "40",
                 "--model", p("m.bin")}).code, 2);
}

TEST_F(CliPipeline, RerunsAreByteIdentical) {
  const auto first = oracle::slurp(p("m.bin"));
  ASSERT_EQ(run({"embed", p("s.json"), "--out", p("m2.bin"), "--dim", "20", "--epochs", "5"}).code, 0);
  EXPECT_EQ(oracle::slurp(p("m2.bin")), first);
  ASSERT_EQ(run({"analyze", p("s.json"), p("m.bin"), "--out-report", p("r2.json")}).code, 0);
  EXPECT_EQ(oracle::slurp(p("r2.designs.csv")), oracle::slurp(p("r.designs.csv")));
}
