#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergodic_lab/cli.hpp"

using namespace elab;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("elab_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Cli, DocumentedExamples) {
  const auto iw = run({"iwconst", "--C", "1", "--N", "65536"});
  EXPECT_EQ(iw.code, 0) << iw.err;
  EXPECT_NE(iw.out.find("8.0000000000000000e+00"), std::string::npos) << iw.out;

  const auto farey = run({"farey", "--level", "2"});
  EXPECT_EQ(farey.code, 0) << farey.err;
  EXPECT_EQ(count_lines(farey.out), 7U) << farey.out;

  const auto unknown = run({"unknown-sub"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("unknown-sub"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto bad_flag = run({"farey", "--level", "2", "--bogus", "1"});
  EXPECT_EQ(bad_flag.code, 1);
  EXPECT_NE(bad_flag.err.find("bogus"), std::string::npos) << bad_flag.err;
  EXPECT_EQ(run({"iwconst", "--C", "1", "--N", "50"}).code, 1);
  EXPECT_EQ(run({"iwconst", "--C", "1"}).code, 1);
  EXPECT_EQ(run({"farey", "--level", "2", "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"unorm", "--weight", "unit", "--N", "64", "--degree", "4"}).code, 1);
  EXPECT_EQ(run({"farey", "--level", "2", "--threads", "0"}).code, 1);
}

TEST(Cli, OversizedQuadratureRejected) {
  EXPECT_EQ(run({"symbol", "--family", "n", "--N", "1e6", "--zeta", "1e3"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("arcscan"), std::string::npos);
}

TEST(Cli, EverySubcommandRuns) {
  const std::vector<std::vector<std::string>> cases{
      {"weights", "--weight", "cramer:5", "--N", "1000", "--modulus", "3", "--residue", "1", "--moment", "2"},
      {"unorm", "--weight", "cramer:4", "--minus", "cramer:64", "--N", "256"},
      {"expsum", "--family", "n,n^2", "--N", "1000", "--xi", "0.1,0.2", "--points", "4"},
      {"symbol", "--family", "n", "--N", "1000", "--zeta", "0.001"},
      {"arcscan", "--family", "n,n^2", "--N", "1e4", "--theta", "1/3,1/3", "--grid", "2"},
      {"gauss", "--family", "n,n^2", "--a", "1,1", "--q", "3"},
      {"average", "--family", "n,n^2", "--N", "16", "--truncated", "0", "--signals", "delta:0;ones:-5:5"},
      {"dual", "--family", "n,n^2", "--N", "16", "--truncated", "0", "--signals", "random:0:9;ones:-5:5", "--j", "2"},
      {"variation", "--sequence", "0,1,0,1"},
      {"rmcheck", "--K", "2"},
      {"padic-eig", "--p", "5"},
      {"padic-eig", "--p-max", "50"},
      {"padic-count", "--p", "3", "--j", "2", "--mc-trials", "4"},
      {"rotation", "--alpha", "sqrt(2)", "--family", "n,n^2", "--funcs", "1:1;0:1", "--N", "1000"},
      {"converge", "--alpha", "sqrt(2)", "--family", "n", "--funcs", "1:1", "--first", "64", "--count", "3"},
      {"farey", "--level", "3"},
      {"project", "--Q", "64", "--level", "1", "--k", "-3", "--signal", "random"},
      {"iwconst", "--C", "2", "--N", "2^16"},
  };
  for (const auto& args : cases) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << args[0] << ": " << r.err;
    EXPECT_GE(count_lines(r.out), 2U) << args[0];
  }
}

TEST(Cli, JsonFormat) {
  const auto r = run({"farey", "--level", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["subcommand"], "farey");
  EXPECT_EQ(j["rows"].size(), 2U);
}

TEST(Cli, CsvReplayRoundTrip) {
  const auto path = temp_path("replay.csv"), again = temp_path("replay2.csv");
  ASSERT_EQ(run({"expsum", "--family", "n,n^2", "--N", "500", "--xi", "0.25,0.125", "--points", "8", "--output", path}).code, 0);
  ASSERT_EQ(run({"expsum", "--from-csv", path, "--output", again}).code, 0);
  EXPECT_EQ(slurp(path), slurp(again));

  for (const auto& args : std::vector<std::vector<std::string>>{
           {"average", "--family", "n,n^2", "--N", "12", "--signals", "random:0:5;ones:-3:3", "--seed", "3"},
           {"padic-eig", "--p", "7", "--j", "2"},
           {"converge", "--alpha", "sqrt(2)", "--family", "n", "--funcs", "1:1", "--first", "64", "--count", "3"}}) {
    auto emit = args, replay = std::vector<std::string>{args[0], "--from-csv", path, "--output", again};
    emit.insert(emit.end(), {"--output", path});
    ASSERT_EQ(run(emit).code, 0) << args[0];
    ASSERT_EQ(run(replay).code, 0) << args[0];
    EXPECT_EQ(slurp(path), slurp(again)) << args[0];
  }
  // an emitted signal is accepted as an input signal
  const auto sig = temp_path("signal.csv");
  ASSERT_EQ(run({"average", "--family", "n", "--N", "8", "--signals", "random:0:5", "--output", sig}).code, 0);
  EXPECT_EQ(run({"average", "--family", "n", "--N", "8", "--signals", sig}).code, 0);
  std::remove(sig.c_str());
  std::remove(path.c_str());
  std::remove(again.c_str());
}

TEST(Cli, ConfigFileFillsUnsetFlags) {
  const auto cfg = temp_path("cfg.txt");
  {
    std::ofstream f(cfg);
    f << "# defaults\nC = 2\nN=65536\n";
  }
  const auto a = run({"iwconst", "--config", cfg});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("1.6000000000000000e+01"), std::string::npos);
  const auto b = run({"iwconst", "--config", cfg, "--C", "1"});
  EXPECT_NE(b.out.find("8.0000000000000000e+00"), std::string::npos);
  {
    std::ofstream f(cfg);
    f << "level=2\n";
  }
  EXPECT_EQ(run({"iwconst", "--config", cfg}).code, 1);
  std::remove(cfg.c_str());
}

TEST(Cli, SeedFixesRandomHarnesses) {
  const auto a = run({"rmcheck", "--K", "3", "--seed", "9"}), b = run({"rmcheck", "--K", "3", "--seed", "9"});
  const auto c = run({"rmcheck", "--K", "3", "--seed", "10"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  const auto m1 = run({"padic-count", "--p", "3", "--j", "3", "--mc-trials", "10", "--seed", "4"});
  const auto m2 = run({"padic-count", "--p", "3", "--j", "3", "--mc-trials", "10", "--seed", "4"});
  EXPECT_EQ(m1.out, m2.out);
}

TEST(Cli, OutputIndependentOfThreads) {
  const std::vector<std::string> base{"unorm", "--weight", "mangoldt", "--minus", "lambdaN", "--N", "1024"};
  auto one = base, many = base;
  one.insert(one.end(), {"--threads", "1"});
  many.insert(many.end(), {"--threads", "8"});
  const auto a = run(one), b = run(many);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SvgWritten) {
  const auto svg = temp_path("plot.svg");
  ASSERT_EQ(run({"expsum", "--family", "n", "--N", "100", "--xi", "0", "--points", "16", "--svg", svg}).code, 0);
  const auto s = slurp(svg);
  EXPECT_EQ(s.rfind("<svg", 0), 0U);
  EXPECT_NE(s.find("polyline"), std::string::npos);
  std::remove(svg.c_str());
}

TEST(Cli, ValueParsers) {
  EXPECT_EQ(cli::parse_real("2^20"), 1048576.0);
  EXPECT_DOUBLE_EQ(cli::parse_real("1/3"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cli::parse_real("sqrt(2)"), std::sqrt(2.0));
  EXPECT_EQ(cli::parse_real("1e6"), 1e6);
  EXPECT_TRUE(std::isinf(cli::parse_real("inf")));
  EXPECT_THROW(cli::parse_real("abc"), invalid_input);
  const auto [num, den] = cli::parse_rationals("1/3,1/2");
  EXPECT_EQ(den, 6);
  EXPECT_EQ(num, (std::vector<std::int64_t>{2, 3}));
}
