#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "skinspec/cube_io.hpp"
#include "skinspec/manifest.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace skinspec;
using skinspec::test::read_file;
using skinspec::test::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "skinspec");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) rows.push_back(line);
  return rows;
}

// One small cohort shared by the read-only tests.
class CliCohort : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    const auto r = cli({"synth", "--scenario", "confounded", "--seed", "7", "--counts", "8,8,8", "--out",
                        (dir_->path() / "cohort").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string cohort() { return (dir_->path() / "cohort").string(); }
  static fs::path scratch(const std::string& name) { return dir_->path() / name; }

  static TempDir* dir_;
};
TempDir* CliCohort::dir_ = nullptr;

TEST(Cli, HelpExitsZero) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, cli::kSuccess);
  EXPECT_NE(r.out.find("synth"), std::string::npos);
  EXPECT_EQ(cli({"eval", "--help"}).code, cli::kSuccess);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, cli::kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(cli({"synth", "--scenario", "null"}).code, cli::kUsage);
  EXPECT_EQ(cli({"eval", "--cohort", "x", "--out", "y", "--site", "elbow"}).code, cli::kUsage);
  EXPECT_EQ(cli({"eval", "--cohort", "x", "--out", "y", "--bogus"}).code, cli::kUsage);
}

TEST(Cli, DataErrorsExitThree) {
  TempDir tmp;
  EXPECT_EQ(cli({"synth", "--scenario", "chaotic", "--out", (tmp.path() / "a").string()}).code, cli::kDataValidation);
  EXPECT_EQ(cli({"eval", "--cohort", (tmp.path() / "absent").string(), "--out", (tmp.path() / "b").string()}).code,
            cli::kDataValidation);
  EXPECT_FALSE(fs::exists(tmp.path() / "a"));
  EXPECT_FALSE(fs::exists(tmp.path() / "b"));
}

TEST(Cli, SynthIsByteIdenticalForTheSameSeed) {
  TempDir tmp;
  for (const char* name : {"a", "b"}) {
    ASSERT_EQ(cli({"synth", "--scenario", "separable", "--seed", "7", "--counts", "4,4,4", "--cubes", "2", "--out",
                   (tmp.path() / name).string()})
                  .code,
              0);
  }
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(tmp.path() / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = fs::relative(e.path(), tmp.path() / "a");
    EXPECT_EQ(read_file(e.path()), read_file(tmp.path() / "b" / rel)) << rel;
  }
  EXPECT_GT(files, 12u);
}

TEST_F(CliCohort, ManifestHasOneRowPerSpectrumAndLoads) {
  const auto manifest = read_file(fs::path(cohort()) / "manifest.csv");
  const auto loaded = load_cohort(fs::path(cohort()) / "manifest.csv", cohort());
  EXPECT_EQ(lines(manifest), 1 + loaded.spectrum_count());
  EXPECT_EQ(loaded.size(), 24u);
  EXPECT_TRUE(fs::exists(fs::path(cohort()) / "ground_truth.csv"));
  EXPECT_TRUE(fs::exists(fs::path(cohort()) / "config.json"));
}

TEST(Cli, ExtractMatchesLibraryMedian) {
  TempDir tmp;
  ASSERT_EQ(cli({"synth", "--scenario", "null", "--seed", "3", "--counts", "2,2,2", "--cubes", "3", "--out",
                 (tmp.path() / "s").string()})
                .code,
            0);
  const auto r = cli({"extract", "--cubes", (tmp.path() / "s" / "cubes").string(), "--masks",
                      (tmp.path() / "s" / "masks").string(), "--meta", (tmp.path() / "s" / "cube_meta.csv").string(),
                      "--out", (tmp.path() / "e").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int i = 0; i < 3; ++i) {
    const std::string stem = "img0000" + std::to_string(i);
    const auto cube = load_cube(tmp.path() / "s" / "cubes" / (stem + ".hdr"));
    const auto mask = load_mask(tmp.path() / "s" / "masks" / (stem + ".mask"));
    const auto expect = median_spectrum(cube, mask, {}).values;
    std::istringstream in(read_file(tmp.path() / "e" / "spectra" / (stem + ".txt")));
    std::vector<double> got;
    for (double v; in >> v;) got.push_back(v);
    EXPECT_EQ(got, expect) << stem;
  }
  EXPECT_EQ(csv_rows(read_file(tmp.path() / "e" / "manifest.csv")).size(), 4u);
  EXPECT_EQ(lines(read_file(tmp.path() / "e" / "wavelengths.txt")), 100u);
}

TEST(Cli, ExtractNamesTheMissingMask) {
  TempDir tmp;
  ASSERT_EQ(cli({"synth", "--scenario", "null", "--seed", "3", "--counts", "2,2,2", "--cubes", "2", "--out",
                 (tmp.path() / "s").string()})
                .code,
            0);
  fs::remove(tmp.path() / "s" / "masks" / "img00001.mask");
  const auto r = cli({"extract", "--cubes", (tmp.path() / "s" / "cubes").string(), "--masks",
                      (tmp.path() / "s" / "masks").string(), "--out", (tmp.path() / "e").string()});
  EXPECT_EQ(r.code, cli::kDataValidation);
  EXPECT_NE(r.err.find("img00001.mask"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(tmp.path() / "e"));
}

TEST_F(CliCohort, EvalSingleSplitIsRepeatable) {
  std::string first;
  for (const char* name : {"ev1", "ev2"}) {
    const auto r = cli({"eval", "--cohort", cohort(), "--splits", "1", "--seed", "5", "--test-counts", "2,2,2",
                        "--out", scratch(name).string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto report = read_file(scratch(name) / "report.json");
    if (first.empty()) first = report;
    EXPECT_EQ(report, first);
  }
  const auto j = nlohmann::json::parse(first);
  EXPECT_EQ(j["evaluated_splits"], 1);
  EXPECT_EQ(j["summary"]["accuracy"]["count"], 1);
}

TEST_F(CliCohort, EvalListsThighExclusions) {
  TempDir tmp;
  const auto patch = tmp.path() / "patch.json";
  skinspec::test::write_file(patch, R"({"missing_thigh_probability": {"healthy": 0.5, "pancreatic": 0.0, "sepsis": 0.0}})");
  ASSERT_EQ(cli({"synth", "--scenario", "separable", "--seed", "2", "--counts", "8,8,8", "--config", patch.string(),
                 "--out", (tmp.path() / "c").string()})
                .code,
            0);
  const auto r = cli({"eval", "--cohort", (tmp.path() / "c").string(), "--splits", "20", "--test-counts", "3,2,2",
                      "--site", "thigh", "--out", (tmp.path() / "ev").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(tmp.path() / "ev" / "report.json"));
  ASSERT_FALSE(j["excluded_patients"].empty());
  for (const auto& e : j["excluded_patients"]) EXPECT_EQ(e["subject_id"].get<std::string>().front(), 'H');
}

TEST(Cli, SingularFitExitsFourWithoutOutput) {
  // Far fewer training spectra than bands, so the unshrunk scatter is singular.
  TempDir tmp;
  ASSERT_EQ(cli({"synth", "--scenario", "null", "--seed", "4", "--counts", "3,3,3", "--out",
                 (tmp.path() / "c").string()})
                .code,
            0);
  const auto r = cli({"eval", "--cohort", (tmp.path() / "c").string(), "--splits", "2", "--gamma", "0",
                      "--test-counts", "1,1,1", "--out", (tmp.path() / "singular").string()});
  EXPECT_EQ(r.code, cli::kNumerical) << r.err;
  EXPECT_FALSE(fs::exists(tmp.path() / "singular"));
}

TEST_F(CliCohort, AllSplitsSkippedExitsFour) {
  // 8 test subjects out of 8 leaves no training data for every split.
  const auto r = cli({"eval", "--cohort", cohort(), "--splits", "3", "--test-counts", "8,8,8", "--out",
                      scratch("allskip").string()});
  EXPECT_EQ(r.code, cli::kNumerical);
  EXPECT_FALSE(fs::exists(scratch("allskip")));
}

TEST(Cli, SoftwareVersionSeparatesConfoundedCohort) {
  TempDir tmp;
  ASSERT_EQ(cli({"synth", "--scenario", "confounded", "--seed", "1", "--out", (tmp.path() / "c").string()}).code, 0);
  const auto r = cli({"confound", "--cohort", (tmp.path() / "c").string(), "--separate", "software_version", "--cut",
                      "2.0", "--out", (tmp.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(tmp.path() / "o" / "separation.json"));
  EXPECT_GE(j["mean_accuracy"].get<double>(), 0.9);
}

TEST_F(CliCohort, SmdRowsFlipWithGroupOrder) {
  ASSERT_EQ(cli({"confound", "--cohort", cohort(), "--variables", "age", "--groups", "healthy,sepsis", "--out",
                 scratch("fwd").string()})
                .code,
            0);
  ASSERT_EQ(cli({"confound", "--cohort", cohort(), "--variables", "age", "--groups", "sepsis,healthy", "--out",
                 scratch("rev").string()})
                .code,
            0);
  const auto fwd = csv_rows(read_file(scratch("fwd") / "smd.csv"));
  const auto rev = csv_rows(read_file(scratch("rev") / "smd.csv"));
  ASSERT_EQ(fwd.size(), 2u);
  ASSERT_EQ(rev.size(), 2u);
  auto smd = [](const std::string& row) {
    std::vector<std::string> f;
    std::stringstream ss(row);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    return std::stod(f.at(3));
  };
  EXPECT_NEAR(smd(fwd[1]), -smd(rev[1]), 1e-12);
  EXPECT_NE(fwd[1].find("healthy,sepsis"), std::string::npos);
  EXPECT_NE(rev[1].find("sepsis,healthy"), std::string::npos);
}

TEST_F(CliCohort, VariableAbsentForOneGroupGivesEmptyRow) {
  const auto r = cli({"confound", "--cohort", cohort(), "--variables", "Hb", "--out", scratch("hb").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(read_file(scratch("hb") / "descriptives.csv"));
  bool found = false;
  for (const auto& row : rows)
    if (row.rfind("Hb,numeric,healthy,0,", 0) == 0) found = true;
  EXPECT_TRUE(found) << read_file(scratch("hb") / "descriptives.csv");
}

TEST_F(CliCohort, UnknownSeparationVariableIsRejected) {
  const auto r = cli({"confound", "--cohort", cohort(), "--separate", "shoe_size", "--cut", "40", "--out",
                      scratch("shoe").string()});
  EXPECT_EQ(r.code, cli::kDataValidation);
  EXPECT_NE(r.err.find("shoe_size"), std::string::npos);
}

TEST_F(CliCohort, ProjectWritesOneRowPerSpectrum) {
  const auto r = cli({"project", "--cohort", cohort(), "--out", scratch("proj").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(read_file(scratch("proj") / "projection.csv"));
  const auto loaded = load_cohort(fs::path(cohort()) / "manifest.csv", cohort());
  EXPECT_EQ(rows.size(), 1 + loaded.spectrum_count());
  EXPECT_NE(rows[0].find("component_2"), std::string::npos);
}

TEST_F(CliCohort, WorkersEnvironmentDoesNotChangeResults) {
  ::setenv(cli::kWorkersEnv, "3", 1);
  const auto a = cli({"eval", "--cohort", cohort(), "--splits", "6", "--test-counts", "2,2,2", "--out",
                      scratch("w3").string()});
  ::unsetenv(cli::kWorkersEnv);
  const auto b = cli({"eval", "--cohort", cohort(), "--splits", "6", "--test-counts", "2,2,2", "--workers", "1",
                      "--out", scratch("w1").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(read_file(scratch("w3") / "report.json"), read_file(scratch("w1") / "report.json"));
}

}  // namespace
