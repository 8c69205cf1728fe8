#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

const std::string samples = MUTINFO_SAMPLES_DIR;

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / ("mutinfo_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string(MUTINFO_CLI) + " " + args + " 2>" + err_path.string();
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err_path);
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

json first_line(const std::string& out) { return json::parse(out.substr(0, out.find('\n'))); }

}  // namespace

TEST(Cli, EntropyOfMaximallyMixedQubitIsOneBit) {
  const auto r = run("entropy --state " + samples + "/mixed2.json --base 2");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = first_line(r.out);
  EXPECT_EQ(j["value"].get<double>(), 1.0);
  EXPECT_EQ(j["command"], "entropy");
}

TEST(Cli, MutualThroughIdentityEqualsEntropy) {
  const auto e = run("entropy --state " + samples + "/state_qubit.json");
  const auto m = run("mutual --state " + samples + "/state_qubit.json --channel " + samples + "/identity2.json");
  ASSERT_EQ(e.status, 0) << e.err;
  ASSERT_EQ(m.status, 0) << m.err;
  EXPECT_NEAR(first_line(m.out)["value"].get<double>(), first_line(e.out)["value"].get<double>(), 1e-8);
}

TEST(Cli, PseudoMutualIsAtLeastMutual) {
  const auto args = "--state " + samples + "/state_qubit.json --channel " + samples + "/depolarizing2.json";
  const auto m = run("mutual " + args);
  const auto p = run("mutual --pseudo " + args);
  ASSERT_EQ(p.status, 0) << p.err;
  EXPECT_GE(first_line(p.out)["value"].get<double>(), first_line(m.out)["value"].get<double>() - 1e-12);
}

TEST(Cli, GenrateOnIdenticalRecordsIsZero) {
  const auto r = run("genrate --fasta " + samples + "/pair_identical.fa");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(first_line(r.out)["rho"].get<double>(), 0.0);
}

TEST(Cli, GenrateReportsAlignmentAndHonoursScoringFlags) {
  const auto r = run("genrate --fasta " + samples + "/worked_pair.fa");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(first_line(r.out)["aligned_a"], "ACG*ACT");
  const auto g = run("genrate --fasta " + samples + "/worked_pair.fa --mismatch -10");
  EXPECT_NE(first_line(g.out)["aligned_a"], "ACG*ACT");
}

TEST(Cli, MatrixAndTreeWriteSideOutputs) {
  const auto csv = scratch() / "m.csv";
  const auto nwk = scratch() / "t.nwk";
  const auto m = run("matrix --fasta " + samples + "/group.fa --out " + csv.string());
  ASSERT_EQ(m.status, 0) << m.err;
  EXPECT_EQ(slurp(csv).rfind("label,", 0), 0u);
  for (const char* method : {"upgma", "nj"}) {
    const auto t = run("tree --fasta " + samples + "/group.fa --method " + method + " --out " + nwk.string());
    ASSERT_EQ(t.status, 0) << t.err;
    const auto text = slurp(nwk);
    EXPECT_EQ(text.front(), '(');
    EXPECT_NE(text.find(");"), std::string::npos);
    for (const char* label : {"human", "chimp", "mouse", "chicken", "frog"})
      EXPECT_NE(text.find(label), std::string::npos);
  }
}

TEST(Cli, CodeIndexIdentityIsZero) {
  for (const char* fa : {"group.fa", "amino.fa"}) {
    const auto r = run("code-index --code " + samples + "/code_identity.json --fasta " + samples + "/" + fa);
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(first_line(r.out)["d_c"].get<double>(), 0.0) << fa;
  }
  const auto c = run("code-index --code " + samples + "/code_conv.json --fasta " + samples + "/group.fa");
  ASSERT_EQ(c.status, 0) << c.err;
  EXPECT_GE(first_line(c.out)["d_c"].get<double>(), 0.0);
  EXPECT_EQ(first_line(c.out)["code"], "selforth013");
}

TEST(Cli, CapacityJobs) {
  const auto q = run("capacity --job " + samples + "/capacity_identity2.json");
  ASSERT_EQ(q.status, 0) << q.err;
  EXPECT_NEAR(first_line(q.out)["value"].get<double>(), std::log(2.0), 1e-4);
  const auto c = run("capacity --job " + samples + "/capacity_cqc.json");
  ASSERT_EQ(c.status, 0) << c.err;
  const auto j = first_line(c.out);
  EXPECT_LE(j["fixed_coding"]["value"].get<double>(), j["coding_free"]["value"].get<double>() + 1e-12);
  EXPECT_LE(j["coding_free"]["value"].get<double>(), j["coding_decoding_free"]["value"].get<double>() + 1e-12);
}

TEST(Cli, EntangleStandardCompound) {
  const auto r = run("entangle --state " + samples + "/mixed2.json --base 2");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = first_line(r.out);
  EXPECT_NEAR(j["mutual"]["value"].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(j["disentanglement_degree"].get<double>(), -1.0, 1e-9);
  EXPECT_EQ(j["class"], "q");
}

TEST(Cli, PrettyOutputIsNotJson) {
  const auto r = run("entropy --state " + samples + "/mixed2.json --pretty");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.front(), '{');
  EXPECT_NE(r.out.find("value"), std::string::npos);
}

TEST(Cli, ParseErrorsExitTwo) {
  const auto missing = run("entropy --state /nonexistent/state.json");
  EXPECT_EQ(missing.status, 2);
  EXPECT_EQ(json::parse(missing.err)["error"], "ParseError");

  const auto bad_fasta = write_file("bad.fa", ">a\nACGT\nAC#T\n");
  const auto f = run("genrate --fasta " + bad_fasta);
  EXPECT_EQ(f.status, 2);
  const auto err = json::parse(f.err);
  EXPECT_EQ(err["error"], "ParseError");
  EXPECT_NE(err["detail"].get<std::string>().find(":3:3"), std::string::npos);

  const auto bad_json = write_file("bad.json", "{\"re\": [[1, 0]");
  EXPECT_EQ(run("entropy --state " + bad_json).status, 2);
}

TEST(Cli, ComputationErrorsExitThreeWithOriginalCode) {
  const auto constant = write_file("constant.fa", ">a\nAAAA\n>b\nCCCC\n");
  const auto r = run("genrate --fasta " + constant);
  EXPECT_EQ(r.status, 3);
  EXPECT_EQ(json::parse(r.err)["error"], "DegenerateEntropy");

  const auto not_state = write_file("trace2.json", R"({"re": [[1, 0], [0, 1]]})");
  const auto s = run("entropy --state " + not_state);
  EXPECT_EQ(s.status, 3);
  EXPECT_EQ(json::parse(s.err)["error"], "NotUnitTrace");

  const auto mismatch = run("mutual --state " + samples + "/mixed2.json --channel " +
                            write_file("id3.json", R"({"kind": "identity", "dim": 3})"));
  EXPECT_EQ(mismatch.status, 3);
  EXPECT_EQ(json::parse(mismatch.err)["error"], "DimensionMismatch");
}

TEST(Cli, SameSeedSameBytes) {
  const std::string args = "mutual --pseudo --state " + samples + "/state_qubit.json --channel " + samples +
                           "/depolarizing2.json --seed 7 --samples 8";
  EXPECT_EQ(run(args).out, run(args).out);
}
