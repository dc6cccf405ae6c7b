#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  std::string cmd = "\"" + g_binary + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    ADD_FAILURE() << "popen failed for: " << cmd;
    return {};
  }
  RunResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
    result.output.append(buf, got);
  }
  int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  std::filesystem::path path = std::filesystem::temp_directory_path() / ("tpt_cli_" + name);
  std::ofstream out(path);
  out << content;
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(CliTest, HelpAndUsageErrors) {
  RunResult help = run_cli("--help");
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.output.find("classify"), std::string::npos);
  EXPECT_NE(help.output.find("simulate"), std::string::npos);

  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("frobnicate").code, 2);
  EXPECT_EQ(run_cli("roots --m 3").code, 2);

  RunResult both = run_cli("classify --m 3 --a 0.5 --file nowhere.txt");
  EXPECT_EQ(both.code, 2);
  EXPECT_NE(both.output.find("give either"), std::string::npos);

  RunResult half = run_cli("classify --m 3");
  EXPECT_EQ(half.code, 2);
  EXPECT_NE(half.output.find("--m and --a go together"), std::string::npos);

  RunResult missing = run_cli("validate --file /nonexistent/input.txt");
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.output.find("cannot open"), std::string::npos);

  RunResult domain = run_cli("classify --m 2 --a 0.5");
  EXPECT_EQ(domain.code, 2);
  EXPECT_NE(domain.output.find("error:"), std::string::npos);
}

TEST(CliTest, ValidateDistinguishesValidFromInvalid) {
  auto valid_path = temp_file("valid.sym2", "SYM2 m=4 a=0.3\n");
  RunResult ok = run_cli("validate --file \"" + valid_path.string() + "\"");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.output.find("valid: order 4 dim 2"), std::string::npos);

  auto invalid_path = temp_file(
      "invalid.tpt1",
      "TPT1\norder 3\ndim 2\nentries\n0.5 0.5 0.5 0.5\n0.4 0.5 0.5 0.5\nend\n");
  RunResult bad = run_cli("validate --file \"" + invalid_path.string() + "\"");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.output.find("invalid"), std::string::npos);
  EXPECT_NE(bad.output.find("column"), std::string::npos);

  RunResult bad_json = run_cli("validate --json --file \"" + invalid_path.string() + "\"");
  EXPECT_EQ(bad_json.code, 1);
  EXPECT_NE(bad_json.output.find("\"valid\": false"), std::string::npos);
}

TEST(CliTest, ClassifyReportsTheExtremalDiscrepancies) {
  RunResult res = run_cli("classify --m 3 --a 1");
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.output.find("case AGreater_gt1"), std::string::npos);
  EXPECT_NE(res.output.find("stationary vectors (2)"), std::string::npos);
  EXPECT_NE(res.output.find("reducible, witness {2}"), std::string::npos);
  EXPECT_NE(res.output.find("discrepancies (2)"), std::string::npos);

  RunResult quiet = run_cli("classify --m 4 --a 0.6");
  EXPECT_EQ(quiet.code, 0);
  EXPECT_NE(quiet.output.find("claimed set agrees with the enumeration"), std::string::npos);
  EXPECT_NE(quiet.output.find("irreducible"), std::string::npos);
}

TEST(CliTest, ClassifyJsonIsIdenticalAcrossEquivalentInputs) {
  RunResult params = run_cli("classify --json --m 3 --a 0.25");
  EXPECT_EQ(params.code, 0);
  EXPECT_NE(params.output.find("\"mode\": \"family\""), std::string::npos);

  auto sym_path = temp_file("member.sym2", "SYM2 m=3 a=0.25\n");
  RunResult from_sym = run_cli("classify --json --file \"" + sym_path.string() + "\"");
  EXPECT_EQ(from_sym.code, 0);
  EXPECT_EQ(from_sym.output, params.output);

  // A dense tensor that happens to be a family member takes the same path.
  auto tensor_path = temp_file("member.tpt1",
                               "TPT1\norder 3\ndim 2\nentries\n"
                               "0.25 0.75 0.75 0.25\n0.75 0.25 0.25 0.75\nend\n");
  RunResult from_tensor = run_cli("classify --json --file \"" + tensor_path.string() + "\"");
  EXPECT_EQ(from_tensor.code, 0);
  EXPECT_EQ(from_tensor.output, params.output);
}

TEST(CliTest, ClassifyFallsBackToGeneralTensorReporting) {
  auto path = temp_file("general.tpt1",
                        "TPT1\norder 3\ndim 2\nentries\n"
                        "0 0 1 0\n1 1 0 1\nend\n");
  RunResult res = run_cli("classify --file \"" + path.string() + "\"");
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.output.find("general tensor"), std::string::npos);
  EXPECT_NE(res.output.find("uniqueness is not decided"), std::string::npos);
  // State 1 is never entered once the history sits inside {2}: p(1|2,2) = 0.
  EXPECT_NE(res.output.find("reducible, witness {1}"), std::string::npos);

  RunResult json = run_cli("classify --json --file \"" + path.string() + "\"");
  EXPECT_EQ(json.code, 0);
  EXPECT_NE(json.output.find("\"mode\": \"general\""), std::string::npos);
  EXPECT_NE(json.output.find("\"irreducible\": false"), std::string::npos);
}

TEST(CliTest, RootsListsDefectZeros) {
  RunResult res = run_cli("roots --m 3 --a 1");
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.output.find("2 root(s)"), std::string::npos);
  EXPECT_NE(res.output.find("[endpoint]"), std::string::npos);

  RunResult json = run_cli("roots --json --m 3 --a 1");
  EXPECT_EQ(json.code, 0);
  EXPECT_NE(json.output.find("\"kind\": \"endpoint\""), std::string::npos);
  EXPECT_NE(json.output.find("\"x\": 1"), std::string::npos);

  // The balanced member's defect is 0.5 - x: exactly one root, sitting on a
  // grid point, so it comes back through the dip detector.
  RunResult interior = run_cli("roots --m 5 --a 0.5");
  EXPECT_EQ(interior.code, 0);
  EXPECT_NE(interior.output.find("1 root(s)"), std::string::npos);
  EXPECT_NE(interior.output.find("[tangential]"), std::string::npos) << interior.output;
}

TEST(CliTest, SolveIteratesFromTheGivenStart) {
  RunResult res = run_cli("solve --m 4 --a 0.3 --x0 0.9,0.1 --json");
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.output.find("\"converged\": true"), std::string::npos);
  EXPECT_NE(res.output.find("\"residual_history\""), std::string::npos);

  auto path = temp_file("flat.tpt1",
                        "TPT1\norder 3\ndim 2\nentries\n"
                        "0.3 0.3 0.3 0.3\n0.7 0.7 0.7 0.7\nend\n");
  RunResult flat = run_cli("solve --file \"" + path.string() + "\"");
  EXPECT_EQ(flat.code, 0);
  EXPECT_NE(flat.output.find("converged after 2 iteration(s)"), std::string::npos);
  EXPECT_NE(flat.output.find("0.29999999999999999"), std::string::npos);

  RunResult bad_x0 = run_cli("solve --m 4 --a 0.3 --x0 0.9,0.3");
  EXPECT_EQ(bad_x0.code, 2);
  EXPECT_NE(bad_x0.output.find("error:"), std::string::npos);
}

TEST(CliTest, SimulateCountsTheForcedCycle) {
  RunResult res = run_cli("simulate --m 3 --a 1 --steps 9 --seed 42 --window 2,2 --burn-in 0");
  EXPECT_EQ(res.code, 0);
  EXPECT_NE(res.output.find("state counts: 1:3 2:6"), std::string::npos);

  RunResult json =
      run_cli("simulate --m 3 --a 1 --steps 9 --seed 42 --window 2,2 --burn-in 0 --json");
  EXPECT_EQ(json.code, 0);
  EXPECT_NE(json.output.find("\"total\": 9"), std::string::npos);
  EXPECT_NE(json.output.find("\"trace_file\": null"), std::string::npos);
}

TEST(CliTest, SimulateWritesAReproducibleTrace) {
  std::filesystem::path trace_path =
      std::filesystem::temp_directory_path() / "tpt_cli_trace.txt";
  std::filesystem::remove(trace_path);
  RunResult res = run_cli("simulate --m 3 --a 1 --steps 3 --seed 42 --window 2,2 --trace-out \"" +
                          trace_path.string() + "\"");
  EXPECT_EQ(res.code, 0);
  EXPECT_EQ(read_file(trace_path), "# seed=42 m=3 a=1\n2\n2\n1\n2\n2\n");

  // The trace format pins the family parameters, so a dense non-member
  // cannot be exported.
  auto tensor_path = temp_file("notrace.tpt1",
                               "TPT1\norder 3\ndim 2\nentries\n"
                               "0 0 1 0\n1 1 0 1\nend\n");
  RunResult denied = run_cli("simulate --file \"" + tensor_path.string() +
                             "\" --steps 10 --trace-out \"" + trace_path.string() + "\"");
  EXPECT_EQ(denied.code, 2);
  EXPECT_NE(denied.output.find("symmetric family inputs only"), std::string::npos);
}

TEST(CliTest, SimulateRoutesFamilyShapedTensorsThroughTheFamilySampler) {
  auto tensor_path = temp_file("routed.tpt1",
                               "TPT1\norder 3\ndim 2\nentries\n"
                               "0.25 0.75 0.75 0.25\n0.75 0.25 0.25 0.75\nend\n");
  RunResult from_tensor = run_cli("simulate --file \"" + tensor_path.string() +
                                  "\" --steps 1000 --seed 5 --json");
  RunResult from_params = run_cli("simulate --m 3 --a 0.25 --steps 1000 --seed 5 --json");
  EXPECT_EQ(from_tensor.code, 0);
  EXPECT_EQ(from_tensor.output, from_params.output);
}

TEST(CliTest, ReportIsByteStableAcrossRuns) {
  std::string args = "report --m 4 --a 0.7 --steps 2000 --seed 11 --json";
  RunResult first = run_cli(args);
  RunResult second = run_cli(args);
  EXPECT_EQ(first.code, 0);
  EXPECT_EQ(first.output, second.output);
  EXPECT_NE(first.output.find("\"fixed_vs_lifted\""), std::string::npos);
  EXPECT_NE(first.output.find("\"ergodic\": true"), std::string::npos);

  RunResult text = run_cli("report --m 3 --a 1 --steps 100 --seed 2");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.output.find("deviations (max norm)"), std::string::npos);
  EXPECT_NE(text.output.find("ergodicity unknown"), std::string::npos);
}

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_test <path-to-tpt-binary>\n");
    return 1;
  }
  g_binary = argv[1];
  return RUN_ALL_TESTS();
}
