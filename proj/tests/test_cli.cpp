#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/bench.hpp"
#include "cli/cli.hpp"
#include "cli/config.hpp"
#include "cli/report_io.hpp"
#include "json.hpp"

using namespace polybound;
using namespace polybound::cli;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const CliResult r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return nlohmann::json::parse(r.out);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("polybound_test_" + name)).string();
}

/// Drops the wall_ms column from bench CSV text.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    cells.erase(cells.begin() + 9);
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
    out += '\n';
  }
  return out;
}

}  // namespace

TEST(Cli, BoundWorkedExample) {
  const nlohmann::json j = run_json({"bound", "-f", "x1^2 - x1", "-n", "1", "-d", "2", "--partition", "one-block"});
  EXPECT_NEAR(j["report"]["bound"].get<double>(), -0.25, 1e-6);
  EXPECT_EQ(j["report"]["status"], "Finite");
  const CliResult human = run({"bound", "-f", "x1^2 - x1", "-n", "1", "-d", "2", "--partition", "one-block"});
  EXPECT_EQ(human.code, 0);
  EXPECT_NE(human.out.find("bound: -0.25"), std::string::npos);
}

TEST(Cli, BoundConstant) {
  const nlohmann::json j = run_json({"bound", "-f", "5", "-n", "2", "-d", "4", "--partition", "singletons"});
  EXPECT_EQ(j["report"]["bound"].get<double>(), 5.0);
}

TEST(Cli, BoundDiagonal) {
  const nlohmann::json j =
      run_json({"bound", "-f", "-2*x1^2 + 3*x2^2", "-d", "2", "-N", "1,1", "--partition", "singletons"});
  EXPECT_NEAR(j["report"]["bound"].get<double>(), -2.0, 1e-8);
  EXPECT_EQ(j["partition"], nlohmann::json::parse("[[1],[2]]"));
}

TEST(Cli, BoundExplicitBlocksAndHypercube) {
  const nlohmann::json j = run_json({"bound", "-f", "x1*x2 - x3", "-d", "4", "--partition", "1,3;2"});
  EXPECT_EQ(j["partition"], nlohmann::json::parse("[[1,3],[2]]"));
  const nlohmann::json h = run_json({"bound", "-f", "-x1^4 - x2^4 + 1", "--hypercube"});
  EXPECT_EQ(h["report"]["bound"].get<double>(), -1.0);
  EXPECT_EQ(h["report"]["shortcut_applied"], true);
}

TEST(Cli, GpExamples) {
  const CliResult a = run({"gp", "-f", "x1^40+x2^40+x3^40-x1*x2*x3", "-d", "40"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("f_gp: -0.68587500"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("wall time"), std::string::npos);
  const CliResult b = run({"gp", "-f", "x1^3", "-d", "4"});
  EXPECT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("f_gp: -inf (empty feasible set"), std::string::npos) << b.out;
  const CliResult c = run({"gp", "-f", "7"});
  EXPECT_NE(c.out.find("f_gp: 7\n"), std::string::npos) << c.out;
}

TEST(Cli, TrivialExamples) {
  EXPECT_NE(run({"trivial", "-f", "x1^2 - x1", "-N", "1"}).out.find("f_tr: -1\n"), std::string::npos);
  EXPECT_NE(run({"trivial", "-f", "x1^2 + 5", "-N", "10"}).out.find("f_tr: 5\n"), std::string::npos);
  EXPECT_NE(run({"trivial", "-f", "-2*x1*x2", "-N", "3,2"}).out.find("f_tr: -12\n"), std::string::npos);
}

TEST(Cli, VerifyExamples) {
  const nlohmann::json a = run_json({"verify", "-f", "x1^2 - x1", "--steps", "2000"});
  EXPECT_EQ(a["sound"], true);
  EXPECT_LT(a["gap"].get<double>(), 1e-3);
  EXPECT_NEAR(a["scan"]["value"].get<double>(), -0.25, 1e-4);

  const nlohmann::json b = run_json({"verify", "-f", "1 - 3*x1^4 + 2*x2^4 - x3^4", "--partition", "1,2;3"});
  EXPECT_EQ(b["sound"], true);
  EXPECT_NEAR(b["gap"].get<double>(), 0.0, 1e-6);

  const nlohmann::json c = run_json({"verify", "-f", "2.5", "-n", "2", "--partition", "singletons"});
  EXPECT_EQ(c["gap"].get<double>(), 0.0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"bound", "-f", "x1^"}).code, kExitConfig);
  EXPECT_EQ(run({"bound", "-f", "x1", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(run({"bound", "-f", "x1^3", "-d", "2"}).code, kExitConfig);
  EXPECT_EQ(run({"bound", "-f", "x1", "-d", "3"}).code, kExitConfig);
  EXPECT_EQ(run({"bound", "-f", "x1", "--partition", "1;1"}).code, kExitConfig);
  EXPECT_EQ(run({"bound", "-f", "x1", "--format", "xml"}).code, kExitConfig);
  EXPECT_EQ(run({"bound", "-f", "x1", "--partition", "none"}).code, kExitConfig);
  EXPECT_EQ(run({}).code, kExitConfig);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  // One Newton step per centering cannot reach the requested gap.
  EXPECT_EQ(run({"bound", "-f", "x1^4 - 3*x1*x2 + x2^4", "--max-iter", "1"}).code, kExitSolver);
}

TEST(Cli, ConfigFileAndOverride) {
  const std::string path = temp_path("config.json");
  {
    std::ofstream out(path);
    out << R"({"polynomial": "x1^2 - x1", "d": 2, "partition": [[1]], "radii": [2.0],
              "solver": {"opt_tol": 1e-10}, "format": "json"})";
  }
  const CliResult a = run({"bound", "--config", path});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto ja = nlohmann::json::parse(a.out);
  EXPECT_EQ(ja["radii"], nlohmann::json::parse("[2.0]"));
  const CliResult b = run({"bound", "--config", path, "-N", "1"});
  const auto jb = nlohmann::json::parse(b.out);
  EXPECT_NEAR(jb["report"]["bound"].get<double>(), -0.25, 1e-6);

  {
    std::ofstream out(path);
    out << R"({"polynomial": "x1", "colour": "red"})";
  }
  EXPECT_EQ(run({"bound", "--config", path}).code, kExitConfig);
  std::remove(path.c_str());
  EXPECT_EQ(run({"bound", "--config", path}).code, kExitConfig);
}

TEST(Cli, PolynomialFromFile) {
  const std::string path = temp_path("poly.txt");
  {
    std::ofstream out(path);
    out << "x1^2 -\n x1\n";
  }
  const nlohmann::json j = run_json({"bound", "--file", path});
  EXPECT_NEAR(j["report"]["bound"].get<double>(), -0.25, 1e-6);
  std::remove(path.c_str());
}

TEST(Cli, CsvReport) {
  const CliResult r = run({"bound", "-f", "x1^2 - x1", "--format", "csv"});
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "command,n,d,m,bound,status,kind,iterations,wall_ms");
  EXPECT_NE(r.out.find("bound,1,2,1,-0.25"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  std::vector<BoundReport> reports;
  reports.push_back(ellipsoid_lower_bound(parse_polynomial("x1^2 - x1 + x2^4 - x1*x2", 2),
                                          ConstraintSystem::singletons(2, 4)));
  reports.push_back(gp_lower_bound(parse_polynomial("x1^3", 1), 4));
  reports.push_back(hypercube_lower_bound(parse_polynomial("-x1^2 + x1", 1), 2, std::vector<double>{1.0}));
  BoundReport odd;
  odd.bound = 1e-300;
  odd.status = BoundStatus::SolverFailure;
  odd.solver_status = GpStatus::MaxIterations;
  odd.c = {0.1, 3.0};
  odd.certificate_note = "quote \" and, comma";
  reports.push_back(odd);
  for (const BoundReport& r : reports) {
    const nlohmann::json j = r;
    const BoundReport back = nlohmann::json::parse(j.dump()).get<BoundReport>();
    EXPECT_EQ(back, r) << j.dump();
  }
}

TEST(Report, NonFiniteValues) {
  EXPECT_EQ(real_from_json(real_to_json(-INFINITY)), -INFINITY);
  EXPECT_TRUE(std::isnan(real_from_json(real_to_json(NAN))));
  EXPECT_EQ(format_value(-INFINITY), "-inf");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
}

TEST(Config, PartitionParsing) {
  EXPECT_EQ(parse_partition("singletons", 2), (std::vector<std::vector<std::size_t>>{{0}, {1}}));
  EXPECT_EQ(parse_partition("one-block", 2), (std::vector<std::vector<std::size_t>>{{0, 1}}));
  EXPECT_TRUE(parse_partition("none", 2).empty());
  EXPECT_EQ(parse_partition("2; 1,3", 3), (std::vector<std::vector<std::size_t>>{{1}, {0, 2}}));
  EXPECT_THROW(parse_partition("1,4", 3), ConfigError);
  EXPECT_THROW(parse_partition("1,,2", 3), ConfigError);
  EXPECT_EQ(infer_num_variables("x12 + x3^4"), 12u);
  EXPECT_EQ(infer_num_variables("5"), 0u);
}

TEST(Bench, RowsAndZeroRepetitions) {
  const CliResult r = run({"bench", "--n", "3", "--d", "4", "--t", "5", "--reps", "3", "--budget", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kBenchCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",Finite,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 3);

  const CliResult empty = run({"bench", "--reps", "0"});
  EXPECT_EQ(empty.out, std::string(kBenchCsvHeader) + "\n");
}

TEST(Bench, DeterministicAcrossRunsAndThreads) {
  BenchSpec spec;
  spec.ns = {2, 3};
  spec.ds = {4};
  spec.ts = {4, 8};
  spec.repetitions = 3;
  spec.seed = 42;
  spec.budget = 100;
  std::ostringstream a, b;
  write_bench_csv(a, run_bench(spec, 1));
  write_bench_csv(b, run_bench(spec, 3));
  EXPECT_EQ(without_wall_time(a.str()), without_wall_time(b.str()));
}

TEST(Bench, OutputFileAndErrors) {
  const std::string path = temp_path("bench.csv");
  const CliResult r = run({"bench", "--n", "2", "--d", "2", "--t", "3", "--reps", "2", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mean_ms"), std::string::npos);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kBenchCsvHeader);
  std::remove(path.c_str());
  EXPECT_EQ(run({"bench", "--reps", "1", "--out", "/nonexistent-dir/x.csv"}).code, kExitConfig);
  EXPECT_EQ(run({"bench", "--d", "3"}).code, kExitConfig);
}

TEST(Bench, WorkerCountHonoursEnvironment) {
  ::setenv("POLYBOUND_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1u);
  ::unsetenv("POLYBOUND_THREADS");
  EXPECT_GE(worker_count(), 1u);
}
