#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cli_commands.hpp"
#include "irislab/iris_sim.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "irislab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = irislab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  return v;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, irislab::cli::kInvalidParams);
  EXPECT_EQ(run({"--help"}).code, irislab::cli::kSuccess);
  EXPECT_EQ(run({"cycle", "--lambda", "-1"}).code, irislab::cli::kInvalidParams);
  EXPECT_EQ(run({"cycle", "--lambda", "2", "--a", "0.3"}).code, irislab::cli::kNoCycle);
  EXPECT_EQ(run({"prc", "--a", "0.25"}).code, irislab::cli::kNoCycle);
  EXPECT_EQ(run({"smooth-cycle", "--mu", "0.6"}).code, irislab::cli::kNoCycle);
  EXPECT_EQ(run({"prc", "--direction", "z"}).code, irislab::cli::kInvalidParams);
  EXPECT_EQ(run({"cycle", "--bogus"}).code, irislab::cli::kInvalidParams);
  const Result r = run({"cycle", "--a", "0.3"});
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, CycleSummary) {
  const Result r = run({"cycle", "--lambda", "2", "--a", "0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GT(ls.size(), 3u);
  EXPECT_EQ(ls[0].rfind("# ", 0), 0u);
  EXPECT_EQ(ls[1], "quantity,value");
  bool found = false;
  for (const auto& l : ls) {
    const auto f = split(l);
    if (f.size() == 2 && f[0] == "u_dag") {
      EXPECT_NEAR(std::stod(f[1]), 0.2763932, 1e-7);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  const Result j = run({"cycle", "--format", "json"});
  ASSERT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_NEAR(doc.at("u_dag").get<double>(), 0.2763932, 1e-7);
}

TEST(Cli, BifurcationColumnAtLambdaTwo) {
  const Result r = run({"bifurcation", "--lambda", "2", "--grid", "51"});
  ASSERT_EQ(r.code, 0) << r.err;
  int grid_rows = 0;
  for (const auto& l : lines(r.out)) {
    const auto f = split(l);
    if (f.size() != 4 || f[0] != "grid") continue;
    ++grid_rows;
    const double a = std::stod(f[2]);
    if (a == 0.0) {
      EXPECT_EQ(f[3], "heteroclinic_boundary");
    } else if (a < 0.25 - 1e-9) {
      EXPECT_EQ(f[3], "stable_and_unstable_cycle") << a;
    } else if (a > 0.25 + 1e-9) {
      EXPECT_EQ(f[3], "no_cycle_spiral") << a;
    }
  }
  EXPECT_EQ(grid_rows, 51);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args = {"prc", "--mode", "both", "--samples", "16"};
  const Result a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, PrcBothModesAgree) {
  const Result r = run({"prc", "--direction", "y", "--mode", "both", "--samples", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  int rows = 0;
  for (const auto& l : lines(r.out)) {
    if (l.empty() || l[0] == '#' || l[0] == 't') continue;
    const auto f = split(l);
    ASSERT_EQ(f.size(), 3u);
    const double za = std::stod(f[1]), zn = std::stod(f[2]);
    EXPECT_NEAR(zn, za, 1e-3 * std::max(1.0, std::abs(za)));
    ++rows;
  }
  EXPECT_EQ(rows, 32);
}

TEST(Cli, TrajectoryEntriesConverge) {
  const Result r = run({"trajectory", "--u0", "0.5", "--entries", "--t-end", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  double last = 0.0;
  for (const auto& l : lines(r.out)) {
    if (l.empty() || l[0] == '#' || l[0] == 'n') continue;
    last = std::stod(split(l).at(1));
  }
  EXPECT_NEAR(last, 0.2763932, 1e-4);
  const Result g = run({"trajectory", "--x0", "-1", "--y0", "-1", "--t-end", "2"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("t,x,y,square"), std::string::npos);
}

TEST(Cli, IsochronFormats) {
  const Result csv = run({"isochrons", "--grid", "12", "--threads", "1"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(lines(csv.out).size(), 2u + 144u);

  const auto path = std::filesystem::temp_directory_path() / "irislab_cli_iso.bin";
  const Result bin = run({"isochrons", "--grid", "12", "--threads", "1", "--format", "binary",
                          "--out", path.string()});
  ASSERT_EQ(bin.code, 0) << bin.err;
  EXPECT_TRUE(bin.out.empty());
  std::ifstream is(path, std::ios::binary);
  const irislab::IsochronField f = irislab::read_field_binary(is);
  EXPECT_EQ(f.nx, 12u);
  EXPECT_EQ(f.lambda, 2.0);
  is.close();
  std::filesystem::remove(path);

  const Result js = run({"isochrons", "--grid", "6", "--format", "json"});
  ASSERT_EQ(js.code, 0) << js.err;
  const auto doc = nlohmann::json::parse(js.out);
  EXPECT_EQ(doc.at("nx").get<int>(), 6);
}

TEST(Cli, ReturnMapWithoutCycle) {
  const Result r = run({"cycle", "--a", "0.3", "--return-map", "--samples", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("u,h,rho"), std::string::npos);
}

TEST(Cli, SmoothCommands) {
  const Result c = run({"smooth-cycle", "--mu", "0.3", "--format", "json"});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto doc = nlohmann::json::parse(c.out);
  EXPECT_GT(doc.at("period").get<double>(), 0.0);
  EXPECT_EQ(doc.at("section_anchor").size(), 2u);

  const Result t = run({"smooth-trajectory", "--mu", "0.45", "--t-end", "5", "--dt", "0.5"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(lines(t.out).size(), 2u + 11u);

  const Result raw = run({"smooth-trajectory", "--mu", "0", "--y1", "3.5", "--y2", "3.1416",
                          "--t-end", "10", "--dt", "1"});
  ASSERT_EQ(raw.code, 0) << raw.err;

  const Result p = run({"smooth-prc", "--mu", "0.3", "--samples", "4", "--threads", "1"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.out.find("theta,z"), std::string::npos);
}
