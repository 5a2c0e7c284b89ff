#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "accr/cli.hpp"
#include "accr/errors.hpp"
#include "accr/report.hpp"

using namespace accr;
using nlohmann::json;

namespace {

struct CliRun {
  int exit = -1;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "accr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.exit = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json run_json(std::vector<std::string> args, int expected_exit = exit_code::ok) {
  const CliRun r = run(std::move(args));
  EXPECT_EQ(r.exit, expected_exit) << r.err;
  return json::parse(r.out);
}

const json& check_named(const json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Cli, ValidateConeSucceeds) {
  const json j = run_json({"validate", "builtin:cone-flat-fiber", "--samples", "16"});
  EXPECT_EQ(j["manifold"], "builtin:cone-flat-fiber");
  ASSERT_TRUE(j.contains("config"));
  ASSERT_TRUE(j.contains("checks"));
  ASSERT_TRUE(j.contains("wall_ms"));
  EXPECT_EQ(j["config"]["samples"], 16);
  for (const auto& c : j["checks"]) {
    EXPECT_EQ(c["verdict"], "pass") << c["name"];
    EXPECT_TRUE(c.contains("anchor"));
    EXPECT_TRUE(c.contains("residual"));
    EXPECT_EQ(c["samples"].size(), 16u);
  }
}

TEST(Cli, ValidatePerturbedStructureExitsOne) {
  json m = json::parse(R"({"n": 1, "coordinates": ["t", "u", "v"],
    "domain": {"t": [0.5, 5.0], "u": [-1.0, 1.0], "v": [-1.0, 1.0]}, "constants": [],
    "g": [["1", "0", "0"], ["0", "t^2", "0"], ["0", "0", "-t^2"]],
    "phi": [["0", "0", "0"], ["0", "0", "-1.01"], ["0", "1", "0"]],
    "xi": ["1", "0", "0"], "eta": ["1", "0", "0"]})");
  const auto path = std::filesystem::temp_directory_path() / "accr_perturbed.json";
  std::ofstream(path) << m.dump();
  const json j = run_json({"validate", path.string(), "--samples", "4"}, exit_code::check_failed);
  EXPECT_EQ(check_named(j, "structure.phi_squared")["verdict"], "fail");
  EXPECT_EQ(j["manifold"].get<std::string>().rfind("fnv1a:", 0), 0u);
  std::filesystem::remove(path);
}

TEST(Cli, UsageAndLoadErrorsExitTwo) {
  EXPECT_EQ(run({"validate", "/nonexistent/manifold.json"}).exit, exit_code::usage);
  EXPECT_EQ(run({"validate", "builtin:nope"}).exit, exit_code::usage);
  EXPECT_EQ(run({"frobnicate", "builtin:cone-flat-fiber"}).exit, exit_code::usage);
  EXPECT_EQ(run({"validate", "builtin:cone-flat-fiber", "--samples", "0"}).exit, exit_code::usage);
  EXPECT_EQ(run({"validate", "builtin:cone-flat-fiber", "--point", "t=9,u=0,v=0"}).exit, exit_code::usage);
  EXPECT_EQ(run({"soliton", "builtin:cone-flat-fiber"}).exit, exit_code::usage);
  EXPECT_EQ(run({"soliton", "builtin:cone-flat-fiber", "--potential-k", "t", "--potential-field", "1,0,0"}).exit,
            exit_code::usage);
  const CliRun r = run({"validate", "/nonexistent/manifold.json"});
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, ReportsAreByteIdenticalApartFromWallTime) {
  const std::vector<std::string> args{"verify-paper", "builtin:cone-flat-fiber", "--samples", "8", "--seed", "7"};
  json a = run_json(args), b = run_json(args);
  a.erase("wall_ms");
  b.erase("wall_ms");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, SeedChangesSamples) {
  json a = run_json({"validate", "builtin:cone-flat-fiber", "--samples", "4", "--seed", "1"});
  json b = run_json({"validate", "builtin:cone-flat-fiber", "--samples", "4", "--seed", "2"});
  EXPECT_NE(a["config"]["sample_points"], b["config"]["sample_points"]);
}

TEST(Cli, PinnedSinglePoint) {
  const json j = run_json({"curvature", "builtin:cone-flat-fiber", "--samples", "1", "--point", "t=2,u=0,v=0"});
  ASSERT_EQ(j["config"]["sample_points"].size(), 1u);
  EXPECT_EQ(j["config"]["sample_points"][0], json::array({2.0, 0.0, 0.0}));
  EXPECT_NEAR(check_named(j, "curvature.g.scalar")["samples"][0].get<double>(), -0.5, 1e-14);
}

TEST(Cli, VerifySuitePassesOnCone) {
  const json j = run_json({"verify-paper", "--samples", "16"});
  EXPECT_EQ(j["manifold"], "builtin:cone-flat-fiber");
  int failures = 0;
  for (const auto& c : j["checks"]) failures += c["verdict"] == "fail";
  EXPECT_EQ(failures, 0);
  EXPECT_GT(j["checks"].size(), 50u);
}

TEST(Cli, VerifySuiteLambdaWithConstants) {
  const json j = run_json(
      {"verify-paper", "--const", "c=2", "--samples", "1", "--point", "t=1,u=0,v=0"});
  const auto& lambda = check_named(j, "soliton.g.lambda");
  EXPECT_EQ(lambda["verdict"], "pass");
  EXPECT_NEAR(lambda["samples"][0].get<double>(), -4.0, 1e-12);
}

TEST(Cli, ClassifyAlwaysExitsZero) {
  const json j = run_json({"classify", "builtin:flat-cosymplectic", "--samples", "4"});
  EXPECT_EQ(j["result"]["F0"]["verdict"], "holds");
  EXPECT_EQ(j["result"]["F5"]["verdict"], "degenerate");
  EXPECT_EQ(j["result"]["sasaki_like"]["verdict"], "fails");
}

TEST(Cli, SolitonVerdicts) {
  json j = run_json({"soliton", "builtin:cone-flat-fiber", "--potential-k", "t", "--samples", "1", "--point",
                     "t=2,u=0,v=0", "--expect-soliton"});
  EXPECT_EQ(j["result"]["verdict"], "soliton");
  EXPECT_NEAR(j["result"]["lambda"][0].get<double>(), -1.5, 1e-12);

  j = run_json({"soliton", "builtin:cone-flat-fiber", "--potential-k", "t^2", "--samples", "4"});
  EXPECT_EQ(j["result"]["verdict"], "not-soliton");
  EXPECT_EQ(run({"soliton", "builtin:cone-flat-fiber", "--potential-k", "t^2", "--samples", "4", "--expect-soliton"})
                .exit,
            exit_code::check_failed);

  j = run_json({"soliton", "builtin:cone-flat-fiber", "--potential-field", "1,1,0", "--samples", "4"},
               exit_code::check_failed);
  EXPECT_EQ(j["result"]["verdict"], "precondition-failed");
}

TEST(Cli, TableFormatAndOutputFile) {
  const CliRun t = run({"validate", "builtin:cone-flat-fiber", "--samples", "4", "--format", "table"});
  EXPECT_EQ(t.exit, exit_code::ok);
  EXPECT_NE(t.out.find("phi_squared"), std::string::npos);
  EXPECT_THROW(json::parse(t.out), json::parse_error);

  const auto path = std::filesystem::temp_directory_path() / "accr_report.json";
  const CliRun f = run({"validate", "builtin:cone-flat-fiber", "--samples", "4", "-o", path.string()});
  EXPECT_EQ(f.exit, exit_code::ok);
  EXPECT_TRUE(f.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_EQ(j["manifold"], "builtin:cone-flat-fiber");
  std::filesystem::remove(path);
}

TEST(Cli, RunCommandRejectsMissingInput) {
  RunConfig c;
  c.command = "validate";
  EXPECT_THROW(run_command(c), Error);
}

TEST(Cli, ReportCommandCombinesSections) {
  const json j = run_json({"report", "builtin:cone-flat-fiber", "--samples", "4"});
  bool has_validation = false, has_curvature = false;
  for (const auto& c : j["checks"]) {
    const std::string name = c["name"];
    has_validation |= name == "phi_squared" || name.find("phi_squared") != std::string::npos;
    has_curvature |= name.find("gtilde") != std::string::npos;
  }
  EXPECT_TRUE(has_validation);
  EXPECT_TRUE(has_curvature);
}

TEST(Report, JsonKeyOrderAndHash) {
  Report r;
  r.manifold = "m";
  r.config = nlohmann::ordered_json::object();
  r.checks.push_back({"a", "x = y", Verdict::Pass, 0.0, {0.0}, ""});
  r.wall_ms = 1.5;
  const auto j = r.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"manifold", "config", "checks", "wall_ms"}));
  EXPECT_FALSE(r.to_json(false).contains("wall_ms"));
  EXPECT_FALSE(r.any_failure());
  r.checks.push_back({"b", "", Verdict::Fail, 1.0, {1.0}, ""});
  EXPECT_TRUE(r.any_failure());
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_STREQ(verdict_name(Verdict::NotApplicable), "n/a");
}
