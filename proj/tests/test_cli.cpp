#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jscc/cli/commands.hpp"
#include "jscc/cli/config.hpp"

using namespace jscc;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string tmp_path(const std::string& name) { return ::testing::TempDir() + "jscc_cli_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& tag = "run") {
  const std::string err_path = tmp_path(tag + ".err");
  const std::string cmd = std::string(JSCC_CLI_PATH) + " " + args + " 2>" + err_path;
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  const std::string path = tmp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string config(const std::string& name) { return std::string(JSCC_CONFIG_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

double value_of(const std::string& csv, const std::string& key) {
  for (const auto& l : lines(csv))
    if (l.rfind(key + ",", 0) == 0) return std::stod(l.substr(key.size() + 1));
  return std::nan("");
}

}  // namespace

TEST(Cli, MeasuresOnExample) {
  const auto r = run("measures --config " + config("example_w01_02.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).front(), "key,value");
  EXPECT_NEAR(value_of(r.out, "optimal_rate"), 0.807316796914, 1e-9);
  EXPECT_NEAR(value_of(r.out, "entropy_rate_source"), 0.383522790107, 1e-9);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::string args = "bounds --config " + config("example_w01_02.json");
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).front(), "n,k,kind,status,log_bound,exponent,s,rho");
}

TEST(Cli, OutFlagWritesFile) {
  const std::string out = tmp_path("measures.csv");
  const auto r = run("measures --config " + config("example_w01_02.json") + " --out " + out);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(out), run("measures --config " + config("example_w01_02.json")).out);
}

TEST(Cli, AsymptoticsHeaderAndStatus) {
  const auto r = run("asymptotics --config " + config("example_w01_02.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls.front(), "R,assumption,direct,converse_eval,converse_sup,theta_star,critical_rate,status");
  EXPECT_NE(r.out.find("rate_below_entropy"), std::string::npos);  // R = 0.6
  EXPECT_NE(r.out.find(",ok"), std::string::npos);
}

TEST(Cli, UniformSourceHasZeroDispersion) {
  const auto path = write_config("uniform.json", R"j({"source": "W(0.5,0.5)", "channel": "W(0.1,0.2)"})j");
  const auto r = run("measures --config " + path);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(value_of(r.out, "entropy_rate_source"), std::log(2.0), 1e-10);
  EXPECT_NEAR(value_of(r.out, "dispersion_source"), 0.0, 1e-8);
}

TEST(Cli, UnknownFieldIsConfigError) {
  const auto path = write_config("unknown.json", R"j({"source": "W(0.1,0.2)", "channel": "W(0.1,0.2)", "nn": 3})j");
  const auto r = run("measures --config " + path, "unknown");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nn"), std::string::npos) << r.err;
}

TEST(Cli, NonStochasticColumnIsConfigError) {
  const auto path = write_config(
      "column.json", R"j({"source": {"matrix": [[0.5, 0.2], [0.4, 0.8]]}, "channel": "W(0.1,0.2)"})j");
  const auto r = run("measures --config " + path, "column");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("source"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("column"), std::string::npos) << r.err;
}

TEST(Cli, ReversedKRangeIsConfigError) {
  const auto path = write_config(
      "krange.json", R"j({"source": "W(0.1,0.2)", "channel": "W(0.1,0.2)", "n": 100, "k_min": 80, "k_max": 60})j");
  EXPECT_EQ(run("bounds --config " + path, "krange").code, 1);
}

TEST(Cli, MissingFileAndBadFigure) {
  EXPECT_EQ(run("measures --config /nonexistent/x.json", "missing").code, 1);
  EXPECT_EQ(run("reproduce 3", "fig3").code, 1);
  EXPECT_EQ(run("", "nosub").code, 1);
}

TEST(Cli, VacuousOnlyOutputExitsThree) {
  // k / n above C / H: every direct bound is vacuous, every converse out of range
  const auto path = write_config(
      "vacuous.json",
      R"j({"source": "W(0.1,0.2)", "channel": "W(0.1,0.2)", "n": 1000, "k": 950, "kinds": ["direct_a2", "converse_a2"]})j");
  const auto r = run("bounds --config " + path, "vacuous");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(lines(r.out).size(), 3u);
}

TEST(Cli, OracleDefaultPasses) {
  const auto r = run("oracle", "oracle");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).front(), "chain,family,theta,theta_prime,n,lower,middle,upper,margin");
  EXPECT_GT(lines(r.out).size(), 10u);
}

TEST(Cli, StdinConfig) {
  const auto r = run("measures --config - < " + config("side_information.json"), "stdin");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(value_of(r.out, "assumption1"), 1.0);
}

TEST(Config, ParsesPresetAndMatrix) {
  const auto c = cli::parse_config_text(
      R"j({"source": "W(0.1, 0.2)", "channel": {"matrix": [[0.9, 0.2], [0.1, 0.8]], "initial": [0.5, 0.5]},
          "n": 10, "k_min": 2, "k_max": 4, "kinds": ["direct_a1"], "thetas": [0.5]})j");
  EXPECT_EQ(c.source.preset, "W(0.1, 0.2)");
  ASSERT_EQ(c.channel.matrix.size(), 2u);
  ASSERT_TRUE(c.channel.initial.has_value());
  EXPECT_EQ(*c.n, 10);
  EXPECT_EQ(c.kinds.front(), BoundKind::direct_a1);
  const auto ch = cli::build_channel(c.channel);
  EXPECT_EQ(ch.x_size(), 2u);
  EXPECT_EQ(ch.z_size(), 1u);
}

TEST(Config, Rejections) {
  const std::string base = R"j("source": "W(0.1,0.2)", "channel": "W(0.1,0.2)")j";
  for (const std::string extra : {R"j("n": -3)j", R"j("n": 2.5)j", R"j("r": 0)j", R"j("kinds": ["a9"])j",
                                  R"j("thetas": [1.0])j", R"j("log_base": "2")j"})
    EXPECT_THROW(cli::parse_config_text("{" + base + ", " + extra + "}"), ConfigError) << extra;
  EXPECT_THROW(cli::parse_config_text("{"), ConfigError);
  EXPECT_THROW(cli::parse_config_text(R"j({"source": "V(1,2)", "channel": "W(0.1,0.2)"})j"), ConfigError);
  EXPECT_THROW(cli::parse_config_text(R"j({"channel": "W(0.1,0.2)"})j"), ConfigError);
}

TEST(Csv, FormatsAndQuotes) {
  std::ostringstream os;
  {
    CsvWriter w(os, {"a", "b"});
    w.row() << 0.1 << "x,y";
    w.row() << std::numeric_limits<double>::infinity() << 1.0 / 3.0;
    EXPECT_EQ(w.rows_written(), 2u);
    EXPECT_THROW(w.row() << 1.0, DomainError);
  }
  EXPECT_EQ(os.str(), "a,b\n0.1,\"x,y\"\ninf,0.333333333333\n");
}
