#include "oracles.hpp"

#include "sphsync/harness.hpp"
#include "sphsync/matrix_io.hpp"
#include "sphsync/serialize.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace sphsync;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(SPHSYNC_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sphsync_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_matrix(const std::string& name, const RealMatrix& m) const {
    write_cost(fs::path(path(name)), SymmetricCost::from_real(m));
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenNoiselessGaussianIsAllOnesPattern) {
  ASSERT_EQ(run("gen --family gaussian --n 6 --sigma 0 -o " + path("g.txt")).code, 0);
  EXPECT_EQ(read_cost(fs::path(path("g.txt"))).real(), oracle::complete_graph(6));
}

TEST_F(CliTest, GenIsDeterministic) {
  ASSERT_EQ(run("--seed 5 gen --family gaussian --n 20 --sigma 1 -o " + path("a.txt")).code, 0);
  ASSERT_EQ(run("--seed 5 gen --family gaussian --n 20 --sigma 1 -o " + path("b.txt")).code, 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
}

TEST_F(CliTest, GenFromSpecFile) {
  std::ofstream(path("spec.json")) << R"({"family": "circulant", "n": 5, "k": 2})";
  ASSERT_EQ(run("gen --spec " + path("spec.json") + " -o " + path("c.txt")).code, 0);
  EXPECT_EQ(read_cost(fs::path(path("c.txt"))).real(), oracle::complete_graph(5));
}

TEST_F(CliTest, CertifyCompleteGraph) {
  const std::string m = write_matrix("k50.txt", oracle::complete_graph(50));
  const CliRun r = run("certify " + m + " --r 2");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["condition_number"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j["verdict"], "benign_for_r");
}

TEST_F(CliTest, CertifySubcriticalCirculantIsInconclusive) {
  const std::string m = write_matrix("c.txt", oracle::circulant_adjacency(40, 10));
  EXPECT_EQ(run("certify " + m + " --r 2").code, 2);
}

TEST_F(CliTest, CertifyDegreePreconditionerReportsBoth) {
  RealMatrix a = oracle::circulant_adjacency(12, 1);
  for (Index j = 2; j < 11; ++j) a(0, j) = a(j, 0) = 3.0;  // weighted hub
  const std::string m = write_matrix("star.txt", a);
  const CliRun r = run("certify " + m + " --r 2 --preconditioner degree");
  ASSERT_NE(r.code, 1);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["preconditioner"], "degree");
  ASSERT_TRUE(j.contains("identity"));
  EXPECT_NE(j["condition_number"].get<double>(), j["identity"]["condition_number"].get<double>());
}

TEST_F(CliTest, CertifyKuramotoAndCsv) {
  const std::string m = write_matrix("k8.txt", oracle::complete_graph(8));
  EXPECT_EQ(run("certify " + m + " --kuramoto").code, 0);
  const CliRun csv = run("--format csv certify " + m + " --r 2");
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("lambda_1,lambda_2,lambda_n,condition_number", 0), 0u);
}

TEST_F(CliTest, SolveCertifiedInstanceRecovers) {
  const std::string m = write_matrix("k30.txt", oracle::complete_graph(30));
  const CliRun r = run("--seed 3 solve " + m + " --r 2 --z ones");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(Json::parse(r.out)["recovered"].get<bool>());
}

TEST_F(CliTest, SolveFromTwistedStateStaysUnrecovered) {
  const std::string m = write_matrix("c.txt", oracle::circulant_adjacency(40, 10));
  const CliRun r = run("solve " + m + " --r 2 --z ones --init twisted:1");
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(Json::parse(r.out)["recovered"].get<bool>());
}

TEST_F(CliTest, SolveIsSeedReproducible) {
  const std::string m = write_matrix("c.txt", oracle::circulant_adjacency(30, 9));
  const CliRun a = run("--seed 11 solve " + m + " --r 3 --print-configuration");
  const CliRun b = run("--seed 11 solve " + m + " --r 3 --print-configuration");
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST_F(CliTest, KuramotoRuns) {
  const std::string k = write_matrix("k10.txt", oracle::complete_graph(10));
  const CliRun sync = run("--seed 2 kuramoto " + k);
  ASSERT_EQ(sync.code, 0);
  EXPECT_TRUE(Json::parse(sync.out)["synchronized"].get<bool>());

  const std::string c = write_matrix("c.txt", oracle::circulant_adjacency(40, 10));
  const CliRun tw = run("kuramoto " + c + " --init twisted:1");
  EXPECT_EQ(Json::parse(tw.out)["classification"], "stable_nonsync");

  ASSERT_EQ(run("--seed 2 kuramoto " + k + " --trajectory " + path("traj.csv") + " --stride 10").code, 0);
  std::ifstream traj(path("traj.csv"));
  std::string header;
  std::getline(traj, header);
  EXPECT_EQ(header.rfind("t,theta_1,", 0), 0u);
  std::string row;
  EXPECT_TRUE(static_cast<bool>(std::getline(traj, row)));
}

TEST_F(CliTest, CirculantTable) {
  const CliRun r = run("--format csv circulant --n 40 --k 10");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("m,h_a,h_l,h_ltilde\n0,20.0,", 0), 0u);
  const CliRun j = run("circulant --n 40 --k 10");
  EXPECT_TRUE(Json::parse(j.out)["stability"]["predicts_spurious"].get<bool>());
}

TEST_F(CliTest, PhaseIsByteReproducible) {
  const std::string args =
      "--seed 7 phase --family gaussian --n 40 --margins 0.5,2.0 --trials 3 --no-timing --quiet";
  const CliRun a = run(args);
  const CliRun b = run(args + " --jobs 2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("row_type,cell,trial,seed,family,n,margin_factor", 0), 0u);
}

TEST_F(CliTest, ErrorsExitWithOne) {
  EXPECT_EQ(run("certify " + path("missing.txt")).code, 1);
  EXPECT_EQ(run("gen --family gaussian --n 5 --sigma -1").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("--tol -1 circulant --n 10 --k 2").code, 1);
}

TEST(Grids, ShippedGridsParse) {
  for (const auto& entry : fs::directory_iterator(SPHSYNC_GRID_DIR)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    const Json j = Json::parse(in);
    EXPECT_NO_THROW(expand_cells(parse_phase_grid(j))) << entry.path();
  }
}
