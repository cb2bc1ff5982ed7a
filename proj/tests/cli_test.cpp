#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "emaviz/datastore/log_store.hpp"
#include "support/temp_dir.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = EMAVIZ_TEST_DATA;

/// Runs the CLI with stdout/stderr discarded; returns its exit status.
int cli(const std::string& args) {
  const std::string cmd = std::string(EMAVIZ_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, GoldenSeed7FullRenderIsByteIdentical) {
  emaviz::testing::TempDir dir;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("run" + std::to_string(run) + ".svg");
    ASSERT_EQ(cli("render --in " + q(kData / "seed7_full.json") + " --week 2024-01-08 --out " + q(out)), 0);
    EXPECT_EQ(slurp(out), slurp(kData / "seed7_full.svg")) << "run " << run;
  }
}

TEST(Cli, FixtureRegeneratesFromSeed) {
  emaviz::testing::TempDir dir;
  ASSERT_EQ(cli("fixture --seed 7 --profile full --week 2024-01-08 --out " + q(dir / "f.json")), 0);
  EXPECT_EQ(slurp(dir / "f.json"), slurp(kData / "seed7_full.json"));
}

TEST(Cli, RenderExitCodes) {
  emaviz::testing::TempDir dir;
  std::ofstream(dir / "bad.json") << "{\"responses\": [";
  EXPECT_EQ(cli("render --in " + q(dir / "bad.json") + " --week 2024-01-08 --out " + q(dir / "x.svg")), 1);
  EXPECT_FALSE(fs::exists(dir / "x.svg"));
  EXPECT_EQ(cli("render --in " + q(kData / "seed7_full.json") + " --week 2024-01-08 --out " +
                q(dir / "missing" / "x.svg")),
            2);
  EXPECT_EQ(cli("render --in " + q(dir / "absent.json") + " --week 2024-01-08 --out " + q(dir / "x.svg")), 2);
  EXPECT_EQ(cli("render --in " + q(kData / "seed7_full.json") + " --week 2024-13-01 --out " + q(dir / "x.svg")),
            1);
  EXPECT_EQ(cli("render --in " + q(kData / "seed7_full.json")), 1);  // missing required flags
}

TEST(Cli, SynthThenValidate) {
  emaviz::testing::TempDir dir;
  ASSERT_EQ(cli("synth --n 44 --seed 7 --out " + q(dir / "cohort")), 0);
  int participants = 0;
  for (const auto& e : fs::directory_iterator(dir / "cohort")) {
    if (!e.is_directory()) continue;
    ++participants;
    EXPECT_TRUE(fs::exists(e.path() / "responses.json"));
    EXPECT_TRUE(fs::exists(e.path() / "participant.json"));
  }
  EXPECT_EQ(participants, 44);
  EXPECT_EQ(cli("validate --in " + q(dir / "cohort")), 0);

  std::ofstream(dir / "cohort" / "P001" / "responses.json")
      << R"([{"participant":"P001","date":"2024-01-08","window":"morning",)"
         R"("submitted_at":"2024-01-08T08:00:00+00:00","answers":{"emotion_happy":{"magnitude":11}}}])";
  EXPECT_EQ(cli("validate --in " + q(dir / "cohort")), 1);
}

TEST(Cli, ExportEmptyStoreIsHeaderOnly) {
  emaviz::testing::TempDir dir;
  { emaviz::datastore::LogStore store(dir / "store.log"); }
  ASSERT_EQ(cli("export --data " + q(dir / "store.log") + " --format csv --out " + q(dir / "e.csv")), 0);
  EXPECT_EQ(slurp(dir / "e.csv"), "participant,date,window,qid,revision,value,submitted_at\r\n");
  ASSERT_EQ(cli("export --data " + q(dir / "store.log") + " --format json --out " + q(dir / "e.json")), 0);
  EXPECT_NE(slurp(dir / "e.json").find("\"rows\": []"), std::string::npos);
  EXPECT_EQ(cli("export --data " + q(dir / "nope.log") + " --format csv"), 2);
  EXPECT_EQ(cli("export --data " + q(dir / "store.log") + " --format xml"), 1);
}

TEST(Cli, ImportExportRoundTrip) {
  emaviz::testing::TempDir dir;
  ASSERT_EQ(cli("import --data " + q(dir / "a.log") + " --in " + q(kData / "seed7_full.json")), 0);
  ASSERT_EQ(cli("export --data " + q(dir / "a.log") + " --out " + q(dir / "a.csv")), 0);
  ASSERT_EQ(cli("import --data " + q(dir / "b.log") + " --in " + q(dir / "a.csv")), 0);
  ASSERT_EQ(cli("export --data " + q(dir / "b.log") + " --out " + q(dir / "b.csv")), 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_GT(slurp(dir / "a.csv").size(), 1000u);

  // A bad import writes nothing, not even an empty store.
  std::ofstream(dir / "bad.json") << "[{}]";
  EXPECT_EQ(cli("import --data " + q(dir / "c.log") + " --in " + q(dir / "bad.json")), 1);
  EXPECT_FALSE(fs::exists(dir / "c.log"));
}

TEST(Cli, ServeRejectsBadConfig) {
  emaviz::testing::TempDir dir;
  std::ofstream(dir / "config.json") << R"({"participants": [{"code": "x"}]})";
  EXPECT_EQ(cli("serve --config " + q(dir / "config.json")), 1);
  EXPECT_EQ(cli("serve --config " + q(dir / "absent.json")), 1);
}
