#include "mgcr/experiment.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mgcr;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string run(const ExperimentConfig& cfg)
{
  std::ostringstream os;
  switch (cfg.mode) {
  case Mode::Table: run_table(cfg, os); break;
  case Mode::Rate: run_rate(cfg, os); break;
  case Mode::Solve: run_solve(cfg, os); break;
  case Mode::Spectrum: run_spectrum(cfg, os); break;
  }
  return os.str();
}

int cli(const std::string& args)
{
  const std::string cmd = std::string(MGCR_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("configuration validation")
{
  ExperimentConfig cfg = ExperimentConfig::defaults_for(2);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.tol == 1e-7);
  CHECK(cfg.pre_sweeps == 1);
  const ExperimentConfig c3 = ExperimentConfig::defaults_for(3);
  CHECK(c3.tol == 1e-12);
  CHECK(c3.post_sweeps == 5);

  auto bad = [&](auto mutate) {
    ExperimentConfig c = cfg;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  bad([](ExperimentConfig& c) { c.dim = 4; });
  bad([](ExperimentConfig& c) { c.max_level = -1; });
  bad([](ExperimentConfig& c) { c.epsilons = {1.0, 0.0}; });
  bad([](ExperimentConfig& c) { c.epsilons.clear(); });
  bad([](ExperimentConfig& c) { c.tol = 1.0; });
  bad([](ExperimentConfig& c) { c.tol = 0.0; });
  bad([](ExperimentConfig& c) { c.maxit = 0; });
  bad([](ExperimentConfig& c) { c.m = -1; });
  bad([](ExperimentConfig& c) {
    c.mode = Mode::Spectrum;
    c.epsilons = {1.0, 0.1};
  });
}

TEST_CASE("table rows carry provenance and are reproducible")
{
  ExperimentConfig cfg = ExperimentConfig::defaults_for(2);
  cfg.max_level = 1;
  cfg.epsilons = {1.0, 1e-3};
  const std::string a = run(cfg), b = run(cfg);
  CHECK(a == b);
  const auto rows = parse_csv(a);
  REQUIRE(rows.size() == 5);
  CHECK(a.substr(0, a.find('\n')) == kTableHeader);
  const std::vector<std::string> header = rows[0];
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == header.size());
    CHECK(rows[r][0] == "2");
    CHECK(rows[r][5] == "1");
    CHECK(rows[r][6] == "1");
    CHECK(rows[r].back().empty());
    CHECK(std::stod(rows[r][9]) <= std::stod(rows[r][8]));
    CHECK(std::stod(rows[r][13]) <= 1.0 + 1e-10);
  }
  // Epsilon-major order, levels ascending.
  CHECK(std::stod(rows[1][3]) == 1.0);
  CHECK(rows[1][1] == "0");
  CHECK(rows[2][1] == "1");
  CHECK(std::stod(rows[3][3]) == 1e-3);
  CHECK(rows[1][4] == "40");
  CHECK(std::stod(rows[1][2]) == 0.5);
}

TEST_CASE("single cell with an explicit m")
{
  ExperimentConfig cfg = ExperimentConfig::defaults_for(2);
  cfg.m = 1;
  const TableRow row = table_cell(cfg, 1e-5, 0);
  CHECK(row.error.empty());
  CHECK(row.m == 1);
  CHECK(row.kappa == doctest::Approx(row.lambda_max / row.lambda_min));
  CHECK(row.kappa_eff == doctest::Approx(row.lambda_max / row.lambda_2));
  CHECK(row.iters > 0);
  CHECK(row.kappa_pcg > 1.0);
  CHECK(floating_subdomain_count(domain_for(2, 1e-5)) == 2);
}

TEST_CASE("rate and solve rows")
{
  ExperimentConfig cfg = ExperimentConfig::defaults_for(3);
  cfg.mode = Mode::Rate;
  cfg.pre_sweeps = cfg.post_sweeps = 2;
  const auto rate = parse_csv(run(cfg));
  REQUIRE(rate.size() == 2);
  CHECK(run(cfg).substr(0, std::string(kRateHeader).size()) == kRateHeader);
  const double rho = std::stod(rate[1][7]);
  CHECK(rho > 0.0);
  CHECK(rho < 1.0);

  cfg.mode = Mode::Solve;
  cfg.pre_sweeps = cfg.post_sweeps = 5;
  const auto solve = parse_csv(run(cfg));
  REQUIRE(solve.size() == 2);
  CHECK(solve[1][10] == "1");
  CHECK(std::stod(solve[1][8]) < 1e-12);

  cfg.rhs = LoadKind::Linear;
  const SolveRow linear = solve_cell(cfg, 1.0, 0);
  CHECK(linear.report.converged);
}

TEST_CASE("spectrum output")
{
  ExperimentConfig cfg = ExperimentConfig::defaults_for(2);
  cfg.mode = Mode::Spectrum;
  cfg.max_level = 1;
  cfg.epsilons = {1e-5};

  cfg.exact_preconditioner = true;
  auto rows = parse_csv(run(cfg));
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == std::vector<std::string>{"index", "lambda"});
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(std::stod(rows[r][1]) == doctest::Approx(1.0).epsilon(1e-10));

  cfg.exact_preconditioner = false;
  cfg.spectrum = SpectrumChoice::Dense;
  const auto dense = parse_csv(run(cfg));
  cfg.spectrum = SpectrumChoice::Iterative;
  cfg.n_small = 4;
  const auto iter = parse_csv(run(cfg));
  REQUIRE(iter.size() == 6);
  for (std::size_t r = 1; r < 5; ++r) {
    CHECK(iter[r][0] == dense[r][0]);
    CHECK(std::stod(iter[r][1]) == doctest::Approx(std::stod(dense[r][1])).epsilon(1e-6));
  }
  CHECK(iter[5][0] == dense.back()[0]);
  CHECK(std::stod(iter[5][1]) == doctest::Approx(std::stod(dense.back()[1])).epsilon(1e-6));
}

TEST_CASE("command line driver")
{
  const auto dir = std::filesystem::temp_directory_path() / "mgcr_cli_test";
  std::filesystem::create_directories(dir);
  const auto out1 = dir / "a.csv", out2 = dir / "b.csv";
  CHECK(cli("table --dim 2 --levels 1 --eps 1,1e-2 --out " + out1.string()) == 0);
  CHECK(cli("table --dim 2 --levels 1 --eps 1,1e-2 --out " + out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(parse_csv(slurp(out1)).size() == 5);

  CHECK(cli("spectrum --dim 2 --levels 0 --eps 1e-3 --out " + out1.string()) == 0);
  CHECK(slurp(out1).rfind("index,lambda\n", 0) == 0);
  CHECK(cli("rate --dim 3 --levels 0 --pre 2 --post 2 --out " + out1.string()) == 0);
  CHECK(cli("solve --dim 2 --levels 1 --eps 1e-3 --rhs linear --out " + out1.string()) == 0);

  CHECK(cli("--help") == 0);
  CHECK(cli("table --eps 0") == 2);
  CHECK(cli("table --eps abc") == 2);
  CHECK(cli("table --dim 5") == 2);
  CHECK(cli("table --levels -1") == 2);
  CHECK(cli("table --tol 2") == 2);
  CHECK(cli("spectrum --eps 1,2") == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("table --out /nonexistent/dir/x.csv") == 2);
  // Solver failure within a cell: too few PCG iterations.
  CHECK(cli("solve --dim 2 --levels 1 --eps 1e-5 --maxit 1 --out " + out1.string()) == 1);
  std::filesystem::remove_all(dir);
}
