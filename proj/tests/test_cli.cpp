// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{

struct CliRun
{
  int code = -1;
  std::string err;
};

fs::path scratch(const std::string &name)
{
  const fs::path d = fs::temp_directory_path() / ("wginv_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run(const std::string &args, const fs::path &dir)
{
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(WGINV_CLI_PATH) + " " + args + " 2> " + err.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p)
{
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line))
  {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

std::string error_name(const CliRun &r)
{
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_TRUE(j.contains("message"));
  return j.at("error").get<std::string>();
}

}  // namespace

TEST(Cli, Modes)
{
  const fs::path d = scratch("modes");
  const CliRun r = run("modes --bc dirichlet --k 4.712 --modes 4 --out " + d.string(), d);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(d / "modes.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], "n");
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_EQ(rows[1][3], "1");
  EXPECT_EQ(rows[2][3], "0");
}

TEST(Cli, ScatterOnEmptyStrip)
{
  const fs::path d = scratch("scatter");
  const CliRun r = run("scatter --k 2.0 --mesh-h 0.05 --format json --out " + d.string(), d);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(d / "scatter.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], "Re_Rp");
  const std::complex<double> R(std::stod(rows[1][1]), std::stod(rows[1][2]));
  const std::complex<double> T(std::stod(rows[1][5]), std::stod(rows[1][6]));
  EXPECT_LT(std::abs(R), 1e-5);
  EXPECT_LT(std::abs(T - 1.0), 1e-4);
  const auto j = nlohmann::json::parse(slurp(d / "scatter.json"));
  EXPECT_TRUE(j.contains("R"));
}

TEST(Cli, OutputIsDeterministic)
{
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const fs::path geo = fs::path(WGINV_SOURCE_DIR) / "configs" / "geometries" / "symmetric_slab.json";
  const std::string args = "sweep --geometry " + geo.string() + " --k0 0.5 --k1 1.5 --steps 4 --mesh-h 0.1 --out ";
  ASSERT_EQ(run(args + a.string(), a).code, 0);
  ASSERT_EQ(run(args + b.string(), b).code, 0);
  EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
  EXPECT_EQ(read_csv(a / "sweep.csv").size(), 6u);
}

TEST(Cli, ValidationErrorsExitTwo)
{
  const fs::path d = scratch("invalid");
  CliRun r = run("scatter --k 3.141592653589793 --out " + d.string(), d);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_name(r), "CutoffWavenumber");
  r = run("scatter --k 2.0 --geometry /nonexistent.json --out " + d.string(), d);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_name(r), "IoFailure");
  r = run("scatter --k 2.0 --no-such-flag --out " + d.string(), d);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_name(r), "InvalidArgument");
  r = run("design-zero-r --bc neumann --k 4.712 --eps 0.1 --out " + d.string(), d);
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(error_name(r), "UnsupportedRegime");
}

TEST(Cli, DivergedDesignExitsThree)
{
  const fs::path d = scratch("diverged");
  const CliRun r = run("design-zero-r --bc dirichlet --k 4.712 --eps 0.2 --max-iter 1 --mesh-h 0.1 --out " + d.string(), d);
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(error_name(r), "Diverged");
}

TEST(Cli, ConfigFileWithOverride)
{
  const fs::path d = scratch("config");
  {
    std::ofstream cfg(d / "run.json");
    cfg << R"({"command": "scatter", "k": 1.0, "mesh-h": 0.1, "out": "results"})";
  }
  CliRun r = run("--config " + (d / "run.json").string(), d);
  ASSERT_EQ(r.code, 0) << r.err;
  // Relative paths in the config resolve against its directory.
  EXPECT_EQ(std::stod(read_csv(d / "results" / "scatter.csv")[1][0]), 1.0);
  r = run("--config " + (d / "run.json").string() + " --k 2.5", d);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::stod(read_csv(d / "results" / "scatter.csv")[1][0]), 2.5);
}

TEST(Cli, Fano1d)
{
  const fs::path d = scratch("fano");
  const CliRun r = run("fano1d --eps 0.05 --k0 0.1 --k1 3.0 --steps 50 --out " + d.string(), d);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_csv(d / "fano1d.csv").size(), 52u);
  EXPECT_GT(read_csv(d / "mobius.csv").size(), 2u);
}

TEST(Cli, SpectrumSmall)
{
  const fs::path d = scratch("spectrum");
  const fs::path geo = fs::path(WGINV_SOURCE_DIR) / "configs" / "geometries" / "symmetric_slab.json";
  const CliRun r = run("spectrum --conjugated --geometry " + geo.string() +
                        " --L-trunc 6 --mesh-h 0.1 --count 12 --k-min 2.3 --k-max 2.9 --dk 0.3 --out " + d.string(),
                    d);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(d / "spectrum.csv");
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"Re_k", "Im_k", "class", "rho"}));
  int trapped = 0;
  for (const auto &row : rows) trapped += row.size() == 4 && row[2] == "trapped";
  EXPECT_EQ(trapped, 2);
}
