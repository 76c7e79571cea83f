#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anharmonic/cli.hpp"

using anharmonic::cli::run;
using anharmonic::cli::RunResult;

namespace {

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("anharm_cli_" + name);
}

}  // namespace

TEST_CASE("energy with optimized basis") {
  const RunResult r = run({"energy", "--lambda", "1", "--digits", "8", "--omega0", "auto"});
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "0.80377065"));
}

TEST_CASE("negative coupling is rejected") {
  const RunResult r = run({"energy", "--lambda", "-1"});
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "negative coupling"));
}

TEST_CASE("levels csv row") {
  const RunResult r = run({"levels", "--lambda", "1", "--count", "7", "--digits", "8", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"N", "E0", "E1", "E2", "E3", "E4", "E5", "E6"});
  const std::vector<std::string> expected{"2.73789227", "5.17929169", "7.94240398", "10.96358309", "14.20313910",
                                          "17.63404912"};
  CHECK(std::vector<std::string>(rows[1].begin() + 2, rows[1].end()) == expected);
  CHECK(rows[1][1] == "0.80377065");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"energy", "--lambda", "1", "--bogus"}).exit_code == 2);
  CHECK(run({"energy"}).exit_code == 2);
  CHECK(run({"nonsense"}).exit_code == 2);
  CHECK(run({"energy", "--lambda", "1", "--format", "xml"}).exit_code == 2);
  CHECK(run({"converge", "--lambda", "1", "--orders", "9..3"}).exit_code == 2);
  const RunResult help = run({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(contains(help.out + help.err, "energy"));
}

TEST_CASE("non-convergence exits with 1 and shows the last rows") {
  const RunResult r = run({"energy", "--lambda", "20000", "--omega0", "1", "--n-max", "20"});
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "N=20"));
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"converge", "--lambda", "50", "--orders", "5..40:5", "--format", "csv"};
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("csv and json carry the same digits") {
  for (const std::vector<std::string> base :
       {std::vector<std::string>{"levels", "--lambda", "1000", "--count", "3"},
        std::vector<std::string>{"energy", "--lambda", "0.25", "--digits", "20", "--omega0", "3.7"},
        std::vector<std::string>{"converge", "--lambda", "1", "--orders", "1..7:3", "--omega0", "4.5"}}) {
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    const RunResult csv = run(csv_args);
    const RunResult json = run(json_args);
    REQUIRE(csv.exit_code == 0);
    REQUIRE(json.exit_code == 0);
    const auto rows = parse_csv(csv.out);
    for (std::size_t i = 1; i < rows.size(); ++i)
      for (std::size_t j = 1; j < rows[i].size(); ++j) CHECK(contains(json.out, rows[i][j]));
  }
  // more digits than a double holds go out as strings
  const RunResult wide = run({"energy", "--lambda", "0.25", "--digits", "20", "--omega0", "3.7", "--format", "json"});
  CHECK(contains(wide.out, "\"0.62092702982574866086\""));
}

TEST_CASE("converge subcommand") {
  const RunResult r = run({"converge", "--lambda", "0.7", "--orders", "5..15:10", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"N", "E0"});
  CHECK(rows[1] == std::vector<std::string>{"5", "0.74425930"});
  CHECK(rows[2] == std::vector<std::string>{"15", "0.74390350"});

  const RunResult excited = run({"converge", "--lambda", "1", "--orders", "1..3", "--level", "1", "--format", "csv"});
  CHECK(parse_csv(excited.out).size() == 4);
}

TEST_CASE("omega0 subcommands") {
  const RunResult predict = run({"omega0", "predict", "--lambda", "1", "--format", "csv"});
  CHECK(predict.exit_code == 0);
  CHECK(contains(predict.out, "3.47542"));

  const RunResult optimize = run({"omega0", "optimize", "--lambda", "100", "--order", "6", "--format", "csv"});
  REQUIRE(optimize.exit_code == 0);
  const auto rows = parse_csv(optimize.out);
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1].back()) <= 3.13140);

  const auto input = temp_path("fit.csv");
  {
    std::ofstream f(input);
    f << "lambda,omega0\n1,4.5\n2,4.5\n5,4.5\n10,7.5\n20,9.0\n25,9.0\n50,12.0\n"
         "100,16.0\n500,17.0\n1000,18.5\n2000,24.5\n5000,33.0\n10000,60.5\n20000,84.0\n";
  }
  const RunResult fit = run({"omega0", "fit", "--input", input.string(), "--format", "csv"});
  CHECK(fit.exit_code == 0);
  const auto fit_rows = parse_csv(fit.out);
  REQUIRE(fit_rows.size() == 2);
  CHECK(fit_rows[0] == std::vector<std::string>{"a", "b", "c", "alpha", "sse"});
  CHECK(std::stod(fit_rows[1][4]) <= 1.1 * 70.83737888453456);

  {
    std::ofstream f(input);
    f << "lambda,omega0\n1,4.5\n2,4.5\n";
  }
  CHECK(run({"omega0", "fit", "--input", input.string()}).exit_code == 2);
  std::filesystem::remove(input);
  CHECK(run({"omega0", "fit", "--input", input.string()}).exit_code == 2);
}

TEST_CASE("potential subcommand") {
  const RunResult r = run({"potential", "--lambda", "100", "--omega0", "16", "--x", "0:1:1", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"x", "harmonic", "perturbation"});
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::stod(rows[2][1]) == 128.0);
  CHECK(std::stod(rows[2][2]) == 100.0);
  CHECK(run({"potential", "--lambda", "1", "--omega0", "1", "--x", "1:0:0.1"}).exit_code == 2);
}

TEST_CASE("wavefunction subcommand") {
  const RunResult r = run({"wavefunction", "--lambda", "1", "--level", "0", "--x", "-1:1:0.5", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"x", "psi"});
  CHECK(rows[1][1] == rows[5][1]);
  CHECK(std::stod(rows[3][1]) > std::stod(rows[2][1]));
  const RunResult full = run({"wavefunction", "--lambda", "1", "--level", "2"});
  CHECK(full.exit_code == 0);
}

TEST_CASE("output file") {
  const auto path = temp_path("levels.csv");
  const RunResult r = run({"levels", "--lambda", "1", "--count", "2", "--format", "csv", "--output", path.string()});
  REQUIRE(r.exit_code == 0);
  std::ifstream f(path);
  std::stringstream contents;
  contents << f.rdbuf();
  CHECK(contains(contents.str(), "0.80377065,2.73789227"));
  std::filesystem::remove(path);
}
