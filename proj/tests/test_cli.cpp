#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cyclobox");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cyclobox::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cyclobox_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, MomentsPairwise) {
  const auto r = run({"moments", "--p", "3", "--N", "1", "--pairwise"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "A=5/18\nL=107/648\nM=19/216\n");
  const auto j = run({"moments", "--p", "3", "--alpha", "1,1", "--format", "json"});
  EXPECT_EQ(j.code, 0);
  EXPECT_NE(j.out.find("\"value\":\"1/6\""), std::string::npos);
  EXPECT_NE(j.out.find("\"value\":\"1/72\""), std::string::npos);
}

TEST(Cli, VerifyOracle) {
  const auto r = run({"verify", "--oracle", "--p", "7", "--N", "2"});
  EXPECT_EQ(r.code, 0);
  std::size_t equal = 0;
  for (auto pos = r.out.find("EXACT-EQUAL"); pos != std::string::npos; pos = r.out.find("EXACT-EQUAL", pos + 1)) {
    ++equal;
  }
  EXPECT_EQ(equal, 5u);
  EXPECT_EQ(run({"verify", "--oracle", "--p", "19"}).code, 2);
  EXPECT_EQ(run({"verify", "--p", "5"}).code, 1);
}

TEST(Cli, Poles) {
  const auto r = run({"poles", "--q", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("NP 1,1,-1,-1\n"), std::string::npos);
  EXPECT_NE(r.out.find("EP 1,-1,-1,1\n"), std::string::npos);
  EXPECT_NE(r.out.find("EP_complex 2.236067977"), std::string::npos);
  const auto j = cyclobox::Json::parse(run({"poles", "--q", "5", "--format", "json"}).out);
  EXPECT_NEAR(j["EP_complex"][0].get<double>(), std::sqrt(5.0), 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"moments", "--p", "3", "--bogus"}).code, 1);
  EXPECT_EQ(run({"moments", "--p", "9"}).code, 1);
  EXPECT_EQ(run({"moments"}).code, 1);
  EXPECT_EQ(run({"sample", "--p", "5", "--theorem", "t9"}).code, 1);
  EXPECT_EQ(run({"sample", "--p", "5", "--eps", "abc"}).code, 1);
  EXPECT_EQ(run({"moments", "--p", "5", "--alpha", "1,2"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SampleVerdictsAndExitCodes) {
  const auto ok = run({"sample", "--p", "1009", "--theorem", "t5", "--samples", "500", "--seed", "3"});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("verdict=pass"), std::string::npos);
  // A tiny eps puts eta above 1/2, so the bound is vacuous rather than failed.
  const auto vac = run({"sample", "--p", "1009", "--theorem", "t5", "--samples", "500", "--eps", "1/1000"});
  EXPECT_EQ(vac.code, 0);
  EXPECT_NE(vac.out.find("verdict=vacuous"), std::string::npos);
  // At p=211 the |cos| <= 0.1 share is about 0.85, below the 0.95 target.
  const auto bad = run({"angles", "--p", "211", "--samples", "300"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("verdict=fail"), std::string::npos);
  EXPECT_EQ(run({"sample", "--p", "7", "--theorem", "t4", "--exhaustive", "--eps", "1/2"}).code, 0);
  EXPECT_EQ(run({"sample", "--p", "19", "--exhaustive"}).code, 2);
}

TEST(Cli, OtherSubcommands) {
  EXPECT_EQ(run({"angles", "--p", "1009", "--samples", "300"}).code, 0);
  EXPECT_EQ(run({"angles", "--p", "211", "--alpha", "origin", "--samples", "10"}).code, 1);
  EXPECT_EQ(run({"polytopes", "--p", "211", "--K", "3", "--samples", "200"}).code, 0);
  EXPECT_EQ(run({"pyramids", "--p", "211", "--samples", "200", "--eps", "1/5"}).code, 0);
  const auto v = run({"visibility", "--p", "31", "--N", "500", "--K", "2", "--samples", "100", "--format", "csv"});
  EXPECT_NE(v.out.find("visibility,31,500,2,100"), std::string::npos) << v.out;
}

TEST(Cli, DeterministicOutputs) {
  const std::vector<std::string> args = {"sample", "--p", "101", "--theorem", "isosceles", "--samples", "400",
                                         "--seed", "5", "--format", "json"};
  const auto a = run(args);
  auto b_args = args;
  b_args.insert(b_args.end(), {"--workers", "3"});
  EXPECT_EQ(a.out, run(b_args).out);
  const std::vector<std::string> render = {"render", "--scene", "random_polytopes", "--p", "7", "--N", "2",
                                           "--K", "3", "--count", "26", "--seed", "4"};
  EXPECT_EQ(run(render).out, run(render).out);
}

TEST(Cli, OutFileAndRenderBudget) {
  const auto path = scratch("scene.svg");
  std::filesystem::remove(path);
  const auto r = run({"render", "--scene", "poles_circle", "--q", "13", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(path).rfind("<?xml", 0), 0u);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".partial"));
  EXPECT_EQ(run({"render", "--q", "11", "--N", "2", "--budget", "1000"}).code, 2);
  const auto s = run({"render", "--q", "11", "--N", "2", "--budget", "1000", "--allow-sampling"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("sampled"), std::string::npos);
}

TEST(Cli, ConfigAndEnvironmentSeed) {
  const auto cfg = scratch("run.conf");
  {
    std::ofstream f(cfg);
    f << "# batch defaults\np = 3\nformat = json\npairwise = true\nseed = 11\n";
  }
  const auto r = run({"moments", "--config", cfg.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"value\":\"5/18\""), std::string::npos);
  const auto overridden = run({"moments", "--config", cfg.string(), "--format", "text"});
  EXPECT_EQ(overridden.out, "A=5/18\nL=107/648\nM=19/216\n");

  const std::vector<std::string> args = {"sample", "--p", "31", "--samples", "50", "--format", "json"};
  ::setenv("CYCLOBOX_SEED", "1234", 1);
  const auto env = run(args);
  ::unsetenv("CYCLOBOX_SEED");
  EXPECT_NE(env.out.find("\"seed\":1234"), std::string::npos);
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "1234"});
  EXPECT_EQ(env.out, run(explicit_args).out);

  {
    std::ofstream f(cfg);
    f << "p 3\n";
  }
  EXPECT_EQ(run({"moments", "--config", cfg.string()}).code, 1);
}
