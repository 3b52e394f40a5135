// End-to-end checks of the command-line tool, driven through a shell.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::json;

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("fsc_cli_test_" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command =
      std::string(FSC_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe))
    result.output += buffer.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_metric(const std::string& output, const std::string& key) {
  const auto pos = output.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(output.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("gen writes the dataset and manifest deterministically") {
  TempDir dir;
  const std::string base = "gen --ambient 9 --dims 2,3,4 --counts 100 "
                           "--sigma 0 --seed 1 --out ";
  const auto first = run_cli(base + dir.file("a.csv"));
  CHECK(first.exit_code == 0);
  const auto second = run_cli(base + dir.file("b.csv"));
  CHECK(second.exit_code == 0);
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));

  // 600 rows at counts 200 per the reference protocol shape.
  const auto big = run_cli(
      "gen --ambient 9 --dims 2,3,4 --counts 200 --sigma 0 --seed 1 --out " +
      dir.file("big.csv"));
  CHECK(big.exit_code == 0);
  std::ifstream in(dir.file("big.csv"));
  int rows = -1;  // header
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 600);

  const json manifest = json::parse(slurp(dir.file("big.csv.json")));
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["sigma"] == 0.0);
  CHECK(manifest["dims"] == json::array({2, 3, 4}));
  CHECK(manifest["bases"].size() == 3);

  const auto noisy = run_cli(
      "gen --ambient 9 --dims 4,5,6 --counts 50 --sigma 0.01 --seed 2 "
      "--out " + dir.file("noisy.csv"));
  CHECK(noisy.exit_code == 0);
  const json noisy_manifest = json::parse(slurp(dir.file("noisy.csv.json")));
  CHECK(noisy_manifest["sigma"] == 0.01);
}

TEST_CASE("run executes each method and eval reproduces the error") {
  TempDir dir;
  const std::string data = dir.file("data.csv");
  REQUIRE(run_cli("gen --ambient 9 --dims 2,3,4 --counts 100 --sigma 0 "
                  "--seed 3 --out " + data).exit_code == 0);

  SUBCASE("fsasc run, result file, eval round-trip") {
    const std::string result_path = dir.file("result.json");
    const auto run = run_cli("run --method fsasc --input " + data +
                             " --n 3 --seed 3 --save-affinity --out " +
                             result_path);
    CHECK(run.exit_code == 0);
    CHECK(parse_metric(run.output, "error_percent") == 0.0);
    CHECK(parse_metric(run.output, "intra") >= 0.99);
    CHECK(parse_metric(run.output, "inter_percent") <= 2.0);

    const json result = json::parse(slurp(result_path));
    CHECK(result["labels"].size() == 300);
    CHECK(result["method"] == "fsasc");

    const auto eval =
        run_cli("eval --pred " + result_path + " --truth " + data);
    CHECK(eval.exit_code == 0);
    CHECK(parse_metric(eval.output, "error_percent") == 0.0);
    CHECK(parse_metric(eval.output, "intra") >= 0.99);
  }
  SUBCASE("sasc-a does poorly where sasc-d is exact") {
    const auto bad = run_cli("run --method sasc-a --input " + data +
                             " --n 3 --seed 3");
    CHECK(bad.exit_code == 0);
    CHECK(parse_metric(bad.output, "error_percent") > 10.0);
    const auto good = run_cli("run --method sasc-d --input " + data +
                              " --n 3 --seed 3");
    CHECK(good.exit_code == 0);
    CHECK(parse_metric(good.output, "error_percent") == 0.0);
  }
  SUBCASE("csv result format") {
    const std::string result_path = dir.file("result.csv");
    const auto run = run_cli("run --method sasc-d --input " + data +
                             " --n 3 --seed 3 --format csv --out " +
                             result_path);
    CHECK(run.exit_code == 0);
    const std::string contents = slurp(result_path);
    CHECK(contents.find("error_percent,intra,inter_percent,eigengap,"
                        "seconds") == 0);
  }
  SUBCASE("fasc reports the decomposition") {
    const std::string result_path = dir.file("fasc.json");
    const auto run = run_cli("run --method fasc --input " + data +
                             " --n 3 --seed 3 --out " + result_path);
    CHECK(run.exit_code == 0);
    CHECK(parse_metric(run.output, "error_percent") == 0.0);
    const json result = json::parse(slurp(result_path));
    CHECK(result["n_found"] == 3);
    json dims = result["dims"];
    std::vector<int> sorted_dims(dims.begin(), dims.end());
    std::sort(sorted_dims.begin(), sorted_dims.end());
    CHECK(sorted_dims == std::vector<int>{2, 3, 4});
  }
}

TEST_CASE("eval accepts permuted and plain-text labels") {
  TempDir dir;
  const std::string truth = dir.file("truth.txt");
  const std::string pred = dir.file("pred.txt");
  {
    std::ofstream t(truth), p(pred);
    // Truth 1,1,2,2 vs a prediction with one of four misassigned.
    t << "1\n1\n2\n2\n";
    p << "1\n2\n2\n2\n";
  }
  const auto result = run_cli("eval --pred " + pred + " --truth " + truth);
  CHECK(result.exit_code == 0);
  CHECK(parse_metric(result.output, "error_percent") == 25.0);

  {
    std::ofstream p(pred);
    p << "2\n2\n1\n1\n";  // permuted names, zero error
  }
  const auto permuted = run_cli("eval --pred " + pred + " --truth " + truth);
  CHECK(parse_metric(permuted.output, "error_percent") == 0.0);
}

TEST_CASE("bench aggregates match per-trial runs on the same seeds") {
  TempDir dir;
  const std::string table = dir.file("table.json");
  const auto bench = run_cli(
      "bench --methods sasc-d --configs 2,3,4 --sigmas 0.01 --trials 2 "
      "--counts 60 --n 3 --seed 11 --format json --out " + table);
  REQUIRE(bench.exit_code == 0);
  const json doc = json::parse(slurp(table));
  REQUIRE(doc["cells"].size() == 1);
  const double bench_mean = doc["cells"][0]["mean_error_percent"];

  double manual = 0;
  for (int t = 0; t < 2; ++t) {
    const std::string data = dir.file("trial" + std::to_string(t) + ".csv");
    REQUIRE(run_cli("gen --ambient 9 --dims 2,3,4 --counts 60 --sigma 0.01 "
                    "--seed " + std::to_string(11 + t) + " --out " + data)
                .exit_code == 0);
    const auto run = run_cli("run --method sasc-d --input " + data +
                             " --n 3 --seed " + std::to_string(11 + t));
    REQUIRE(run.exit_code == 0);
    manual += parse_metric(run.output, "error_percent");
  }
  CHECK(bench_mean == doctest::Approx(manual / 2.0).epsilon(1e-12));
}

TEST_CASE("bench runtime grows with the sample size") {
  TempDir dir;
  auto mean_seconds = [&](int counts) {
    const std::string table = dir.file("rt" + std::to_string(counts) +
                                       ".json");
    const auto bench = run_cli(
        "bench --methods fsasc --configs 4,5,6 --sigmas 0.01 --trials 3 "
        "--counts " + std::to_string(counts) +
        " --n 3 --seed 21 --format json --out " + table);
    REQUIRE(bench.exit_code == 0);
    return json::parse(slurp(table))["cells"][0]["mean_seconds"]
        .get<double>();
  };
  // 4x the points is at least ~16x the affinity work; timing jitter cannot
  // invert that.
  CHECK(mean_seconds(240) > mean_seconds(60));
}

TEST_CASE("config file values are overridden by flags") {
  TempDir dir;
  const std::string cfg = dir.file("cfg.json");
  {
    std::ofstream out(cfg);
    out << R"({"ambient": 9, "dims": [2, 3, 4], "counts": [50],)"
        << R"( "sigma": 0.0, "seed": 19, "out": ")" << dir.file("cfg.csv")
        << R"("})";
  }
  const auto from_config = run_cli("gen --config " + cfg);
  CHECK(from_config.exit_code == 0);
  CHECK(slurp(dir.file("cfg.csv")).substr(0, 2) == "x1");

  // The flag wins over the config value.
  const auto overridden =
      run_cli("gen --config " + cfg + " --seed 20 --out " +
              dir.file("cfg2.csv"));
  CHECK(overridden.exit_code == 0);
  CHECK(slurp(dir.file("cfg.csv")) != slurp(dir.file("cfg2.csv")));
}

TEST_CASE("exit codes") {
  TempDir dir;
  SUBCASE("bad flag: 2") {
    CHECK(run_cli("gen --no-such-flag").exit_code == 2);
  }
  SUBCASE("missing required option: 2") {
    CHECK(run_cli("gen").exit_code == 2);
  }
  SUBCASE("method precondition: 3") {
    const std::string data = dir.file("tiny.csv");
    REQUIRE(run_cli("gen --ambient 9 --dims 2,3 --counts 20 --sigma 0 "
                    "--seed 1 --out " + data).exit_code == 0);
    // 40 points < M_3(9) = 165.
    const auto run =
        run_cli("run --method fsasc --input " + data + " --n 3");
    CHECK(run.exit_code == 3);
    CHECK(run.output.find("Not enough points") != std::string::npos);
  }
  SUBCASE("help: 0") {
    CHECK(run_cli("--help").exit_code == 0);
  }
}
