#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "conekit/io.hpp"
#include "conekit/tensor_core.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using conekit::io::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = conekit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(CONEKIT_TEST_DATA) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("conekit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_F(CliTest, CheckPptBell) {
  const Result r = cli({"check", "ppt", data("bell_projector.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NEAR(r.report().at("min_eig").get<double>(), -0.5, 1e-9);
  EXPECT_EQ(r.report().at("certificate").at("label"), "partial_transpose");
}

TEST_F(CliTest, CheckPsdIdentity) {
  EXPECT_EQ(cli({"check", "psd", data("identity_2x2.json")}).code, 0);
}

TEST_F(CliTest, CheckSepRankOneRule) {
  const Result r = cli({"check", "sep", data("rank1_sr2_3x3.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.report().at("certificate").at("kind"), "schmidt_rank");
  EXPECT_EQ(r.report().at("certificate").at("value").get<double>(), 2.0);
}

TEST_F(CliTest, CheckSepBoundEntangledIsIndeterminate) {
  EXPECT_EQ(cli({"check", "sep", data("tiles_3x3.json")}).code, 2);
}

TEST_F(CliTest, TilesFileMatchesOracle) {
  const auto f = conekit::io::read_matrix_file(data("tiles_3x3.json"));
  EXPECT_LT((f.as_matrix().entries() - oracle::tiles_state()).norm(), 1e-15);
}

TEST_F(CliTest, CheckBlockposEchoesSeed) {
  const Result r = cli({"check", "blockpos", data("swap_2x2.json"), "--seed", "17"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.report().at("seed").get<std::uint64_t>(), 17u);
}

TEST_F(CliTest, SeedFromEnvironment) {
  ::setenv("CONEKIT_SEED", "23", 1);
  const Result r = cli({"check", "blockpos", data("swap_2x2.json")});
  ::unsetenv("CONEKIT_SEED");
  EXPECT_EQ(r.report().at("seed").get<std::uint64_t>(), 23u);
}

TEST_F(CliTest, BadSeedEnvironmentIsUsageError) {
  ::setenv("CONEKIT_SEED", "abc", 1);
  const Result r = cli({"check", "blockpos", data("swap_2x2.json")});
  ::unsetenv("CONEKIT_SEED");
  EXPECT_EQ(r.code, conekit::cli::kExitUsage);
}

TEST_F(CliTest, CheckWritesReportFile) {
  const Result r = cli({"check", "ppt", data("bell_projector.json"), "--out", path("r.json")});
  EXPECT_EQ(conekit::io::read_text(path("r.json")), r.out);
}

TEST_F(CliTest, RankCommands) {
  EXPECT_EQ(cli({"rank", "osr", data("identity_2x2.json")}).out, "1\n");
  EXPECT_EQ(cli({"rank", "sr", data("product_vec.json")}).out, "1\n");
  EXPECT_EQ(cli({"rank", "osr", data("swap_2x2.json")}).out, "4\n");
  EXPECT_EQ(cli({"rank", "sr", data("bell.json")}).out, "2\n");
  EXPECT_EQ(cli({"rank", "sr", data("swap_2x2.json")}).code, 12);
}

TEST_F(CliTest, MalformedFile) {
  conekit::io::write_atomic(path("bad.json"), "{\"m\": 2, \"n\": 2, \"re\": [[1]]");
  const Result r = cli({"check", "psd", path("bad.json")});
  EXPECT_EQ(r.code, 11);
  EXPECT_FALSE(r.err.empty());
  conekit::io::write_atomic(path("nan.json"), R"({"m": 1, "n": 1, "re": [["x"]], "im": [[0]]})");
  EXPECT_EQ(cli({"check", "psd", path("nan.json")}).code, 11);
}

TEST_F(CliTest, DimensionMismatch) {
  conekit::io::write_atomic(path("short.json"), R"({"m": 2, "n": 2, "re": [[1]], "im": [[0]]})");
  EXPECT_EQ(cli({"check", "psd", path("short.json")}).code, 12);
  EXPECT_EQ(cli({"check", "psd", data("identity_2x2.json"), "--m", "3"}).code, 12);
}

TEST_F(CliTest, MissingFileIsIoError) {
  EXPECT_EQ(cli({"check", "psd", path("absent.json")}).code, 14);
}

TEST_F(CliTest, NonHermitianIsPreconditionError) {
  conekit::io::write_atomic(
      path("nh.json"),
      R"({"m": 1, "n": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]})");
  EXPECT_EQ(cli({"check", "psd", path("nh.json")}).code, 13);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, 15);
  EXPECT_EQ(cli({"check", "nope", data("bell.json")}).code, 15);
  EXPECT_EQ(cli({"check", "psd", data("identity_2x2.json"), "--tol", "2"}).code, 15);
  EXPECT_EQ(cli({"verify", "srank", "--trials", "0"}).code, 15);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, ConstructCollapse) {
  const Result r = cli({"construct", "collapse", "--target", data("bell.json"), "--out", dir_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.report().at("normalization_residual").at("value").get<double>(), 1e-10);
  EXPECT_LE(r.report().at("output_residual").at("value").get<double>(), 1e-10);
  const json fam = json::parse(conekit::io::read_text(path("collapse_family.json")));
  EXPECT_EQ(fam.at("format"), "conekit.kraus_family");
  EXPECT_EQ(fam.at("mode"), "exact");
  EXPECT_EQ(conekit::io::read_text(path("collapse_report.json")), r.out);
}

TEST_F(CliTest, ConstructEmbed) {
  const Result r = cli({"construct", "embed_k", "--v", data("bell.json"), "--k", "2", "--out", dir_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report().at("osr"), 2);
  const auto f = conekit::io::family_from_json(
      json::parse(conekit::io::read_text(path("embed_k_family.json"))));
  EXPECT_EQ(f.ops.size(), 1u);
  EXPECT_EQ(f.mode, conekit::Normalization::Contractive);
  EXPECT_EQ(cli({"construct", "embed_k", "--v", data("bell.json"), "--k", "1", "--out", dir_}).code,
            13);
}

TEST_F(CliTest, ConstructLift) {
  const Result r = cli({"construct", "lift", "--u", data("e0.json"), "--v", data("f0.json"), "--w",
                        data("bell.json"), "--out", dir_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.report().at("mapping_residual").at("value").get<double>(), 1e-12);
  const auto u = conekit::io::read_matrix_file(path("lift_unitary.json")).as_matrix();
  const conekit::Vector e0 = conekit::Vector::Unit(2, 0);
  const conekit::Vector image = u.entries() * oracle::kron(e0, e0);
  const auto bell = conekit::io::read_matrix_file(data("bell.json")).as_vector();
  EXPECT_LE((image - bell.entries()).norm(), 1e-12);
}

TEST_F(CliTest, ConstructWitnessBreak) {
  const Result r = cli({"construct", "witness_break", "--w", data("swap_2x2.json"), "--out", dir_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report().at("expectation").get<double>(), -1.0, 1e-10);
  EXPECT_EQ(cli({"construct", "witness_break", "--w", data("identity_2x2.json"), "--out", dir_}).code,
            13);
}

TEST_F(CliTest, VerifyWritesReportAndCsv) {
  const Result r = cli({"verify", "srank", "--m", "2", "--n", "2", "--trials", "50", "--seed", "7",
                        "--out", path("srank.json"), "--csv", path("runs.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report().at("seed"), 7);
  const json rep = json::parse(conekit::io::read_text(path("srank.json")));
  EXPECT_EQ(rep.at("passes"), 50);
  cli({"verify", "srank", "--trials", "10", "--seed", "8", "--out", path("srank.json"), "--csv",
       path("runs.csv")});
  const std::string csv = conekit::io::read_text(path("runs.csv"));
  EXPECT_EQ(csv.rfind("suite_id,dims,trials,passes,max_residual,seed\nsrank,2x2,50,50,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(CliTest, VerifyFailureExitsNonZero) {
  const Result r = cli({"verify", "ppt-stability", "--trials", "10", "--inputs",
                        data("bell_projector.json"), "--out", path("fail.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.report().at("verdict"), "fail");
}

TEST_F(CliTest, VerifyBoundEntangledInputs) {
  const Result r = cli({"verify", "ppt-stability", "--m", "3", "--n", "3", "--trials", "60",
                        "--inputs", data("tiles_3x3.json"), "--out", path("be.json")});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, VerifyProbe) {
  const Result r = cli({"verify", "probe-intermediate", "--k", "2", "--m", "3", "--n", "3",
                        "--trials", "80", "--out", path("probe.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report().at("verdict"), "exploratory");
  EXPECT_TRUE(r.report().at("details").contains("ppt_outputs"));
}

TEST_F(CliTest, VerifyIsReproducible) {
  cli({"verify", "ppt-collapse", "--trials", "20", "--seed", "3", "--out", path("a.json")});
  cli({"verify", "ppt-collapse", "--trials", "20", "--seed", "3", "--out", path("b.json")});
  json a = json::parse(conekit::io::read_text(path("a.json")));
  json b = json::parse(conekit::io::read_text(path("b.json")));
  a.erase("wall_time");
  b.erase("wall_time");
  EXPECT_EQ(conekit::io::canonical_dump(a), conekit::io::canonical_dump(b));
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = CONEKIT_BINARY;
  const std::string quiet = " > /dev/null 2>&1";
  EXPECT_EQ(shell(bin + " check ppt " + data("bell_projector.json") + quiet), 1);
  EXPECT_EQ(shell(bin + " check psd " + data("identity_2x2.json") + quiet), 0);
  EXPECT_EQ(shell(bin + " check psd " + path("none.json") + quiet), 14);
  EXPECT_EQ(shell(bin + " --help" + quiet), 0);
  EXPECT_EQ(shell("cd " + dir_.string() + " && " + bin +
                  " verify srank --m 2 --n 2 --trials 1000 --seed 7" + quiet),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "srank-report.json"));
}
