#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tensorrank/ingest.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TENSORRANK_CLI + "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kData = std::string("--data \"") + TENSORRANK_TEST_DATA + "/synthetic_panel.csv\"";
const std::string kConfig = std::string("--config \"") + TENSORRANK_TEST_DATA + "/synthetic.yaml\"";

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("tensorrank_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, PredictWritesTensorToStdout) {
  auto r = cli("predict " + kData + " " + kConfig);
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  auto t = tensorrank::parse_timeseries_csv(in);
  EXPECT_EQ(t.n(), 5u);
  EXPECT_EQ(t.m(), 3u);
  EXPECT_EQ(t.length(), 6u);
  EXPECT_EQ(t.times().front(), 2013);
}

TEST(Cli, PredictWritesDiagnosticsNextToOutput) {
  auto dir = scratch("predict");
  auto r = cli("predict " + kData + " " + kConfig + " --out \"" + (dir / "p.csv").string() + "\"");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "p.csv"));
  const auto diag = slurp(dir / "p.csv.diagnostics.jsonl");
  EXPECT_NE(diag.find("\"errors\""), std::string::npos);
  std::size_t lines = 0;
  for (char c : diag) lines += c == '\n';
  EXPECT_EQ(lines, 5u * 3u * 6u);
}

TEST(Cli, TooShortSeriesExitsTwo) {
  auto dir = scratch("short");
  {
    std::ofstream out(dir / "short.csv");
    out << "alternative,criterion,time,value\nshorty,c,1,1\nshorty,c,2,2\nshorty,c,3,3\n";
    std::ofstream cfg(dir / "cfg.yaml");
    cfg << "horizon: 2\nwindow: 2\n";
  }
  auto r = cli("predict --data \"" + (dir / "short.csv").string() + "\" --config \"" +
               (dir / "cfg.yaml").string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("predict"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("shorty"), std::string::npos) << r.out;
}

TEST(Cli, MalformedInputExitsTwoNamingModule) {
  auto dir = scratch("bad");
  {
    std::ofstream out(dir / "dup.csv");
    out << "alternative,criterion,time,value\na,c,1,1\na,c,1,2\n";
  }
  auto r = cli("rank --data \"" + (dir / "dup.csv").string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("ingest"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("dup.csv:3:"), std::string::npos) << r.out;
}

TEST(Cli, RankSourcesAndMethods) {
  for (std::string args : {"--method promethee-tensor --source predicted",
                           "--method promethee-matrix --source current",
                           "--method promethee-tensor --source past-window",
                           "--method topsis-tensor --source actual",
                           "--method promethee-matrix --source predicted"}) {
    auto r = cli("rank " + kData + " " + kConfig + " " + args + " --format csv");
    ASSERT_EQ(r.code, 0) << args << "\n" << r.out;
    EXPECT_NE(r.out.find("rank,index,alternative,score"), std::string::npos) << args;
  }
}

TEST(Cli, RankEmitsIntermediates) {
  auto r = cli("rank " + kData + " " + kConfig + " --emit-intermediates");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("## series"), std::string::npos);
  EXPECT_NE(r.out.find("## features"), std::string::npos);
  EXPECT_NE(r.out.find("## preference"), std::string::npos);
  EXPECT_NE(r.out.find("## ranking all"), std::string::npos);

  auto dir = scratch("intermediates");
  r = cli("rank " + kData + " " + kConfig + " --intermediates-dir \"" + dir.string() +
          "\" --plot \"" + (dir / "scores.svg").string() + "\" --out \"" +
          (dir / "rank.txt").string() + "\"");
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"series.csv", "features.csv", "preference.csv", "diagnostics.jsonl",
                        "ranking_all.csv", "scores.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_NE(slurp(dir / "scores.svg").find("<svg"), std::string::npos);
}

TEST(Cli, IdenticalInvocationsAreByteIdentical) {
  const std::string args = "rank " + kData + " " + kConfig + " --emit-intermediates --format json-lines";
  auto a = cli(args);
  auto b = cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UnknownOptionValue) {
  auto r = cli("rank " + kData + " --source tomorrow");
  EXPECT_EQ(r.code, 2);
  r = cli("rank " + kData + " --config /nonexistent/cfg.yaml");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, ReproduceWithoutDatasetExitsNonzero) {
  auto dir = scratch("repro");
  auto r = cli("reproduce --data \"" + (dir / "absent.csv").string() + "\" --out-dir \"" +
               dir.string() + "\"");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("dataset not found"), std::string::npos) << r.out;
}

TEST(Cli, ReproduceOnSyntheticPanelWritesReport) {
  // Other ids than the fixture: every strategy still runs, the comparison
  // against the published tables is skipped.
  auto dir = scratch("repro_synth");
  auto r = cli("reproduce " + kData + " " + kConfig + " --out-dir \"" + dir.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto report = slurp(dir / "report.md");
  EXPECT_NE(report.find("comparison skipped"), std::string::npos);
  EXPECT_NE(report.find("| f_hat |"), std::string::npos);
  EXPECT_NE(report.find("| g_hat_2013 |"), std::string::npos);
  for (const char* f : {"forecast_rls.csv", "features_past_window.csv", "rankings.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
}

TEST(Cli, ConvertWide) {
  auto dir = scratch("wide");
  {
    std::ofstream out(dir / "wide.csv");
    out << "alternative,criterion,2000,2001,2002\nx,c,1,2,3\ny,c,4,5,6\n";
  }
  auto r = cli("convert-wide --input \"" + (dir / "wide.csv").string() + "\"");
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  auto t = tensorrank::parse_timeseries_csv(in);
  EXPECT_EQ(t.at(1, 0, 2), 6.0);
}
