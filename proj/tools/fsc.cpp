// Command-line front end: dataset generation, method execution, benchmark
// sweeps, and metric evaluation.
//
// Exit codes: 0 success, 2 configuration/input error, 3 method precondition
// error (e.g. "Not enough points").

#include <fsc/datagen.hpp>
#include <fsc/fasc.hpp>
#include <fsc/filtration.hpp>
#include <fsc/io.hpp>
#include <fsc/metrics.hpp>
#include <fsc/sasc.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <thread>

namespace {

using json = nlohmann::json;
using fsc::Index;

constexpr int kExitConfig = 2;
constexpr int kExitMethod = 3;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<Index> to_index_vec(const std::vector<std::int64_t>& v) {
  return std::vector<Index>(v.begin(), v.end());
}

// Pre-scan for --config and load JSON defaults; explicit flags override.
json load_config_file(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config")
      return fsc::read_json(argv[i + 1]);
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const std::string prefix = "--config=";
    if (arg.rfind(prefix, 0) == 0)
      return fsc::read_json(arg.substr(prefix.size()));
  }
  return json::object();
}

template <typename T>
void config_default(const json& cfg, const std::string& key, T* value) {
  if (cfg.contains(key)) *value = cfg.at(key).get<T>();
}

struct GenOptions {
  std::int64_t ambient = 9;
  std::vector<std::int64_t> dims;
  std::vector<std::int64_t> counts;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out = "points.csv";
  std::string manifest;
  std::string config_path;
};

struct RunOptions {
  std::string method = "fsasc";
  std::string input;
  int n = 0;
  std::int64_t clusters = 0;
  std::vector<double> gammas = {0.1};
  std::int64_t min_cluster = 10;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  bool save_affinity = false;
  int threads = 0;
  std::string config_path;
};

struct BenchOptions {
  std::vector<std::string> methods = {"fsasc"};
  std::vector<std::string> configs;  // each "d1,d2,..."
  std::vector<double> sigmas = {0.0};
  std::int64_t ambient = 9;
  std::vector<std::int64_t> counts = {100};
  int trials = 10;
  int n = 0;
  std::int64_t clusters = 0;
  std::vector<double> gammas = {0.1};
  std::int64_t min_cluster = 10;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  std::string config_path;
};

struct EvalOptions {
  std::string pred;
  std::string truth;
};

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const GenOptions& opt) {
  if (opt.dims.empty()) {
    std::cerr << "gen: --dims is required\n";
    return kExitConfig;
  }
  std::vector<std::int64_t> counts = opt.counts;
  if (counts.empty()) counts.assign(opt.dims.size(), 100);
  if (counts.size() == 1) counts.assign(opt.dims.size(), counts[0]);
  if (counts.size() != opt.dims.size()) {
    std::cerr << "gen: --counts must match --dims\n";
    return kExitConfig;
  }

  const auto sample = fsc::sample_arrangement<double>(
      opt.ambient, to_index_vec(opt.dims), to_index_vec(counts), opt.sigma,
      opt.seed);
  fsc::write_points_csv(sample.cloud, opt.out);

  json manifest;
  manifest["command"] = "gen";
  manifest["seed"] = opt.seed;
  manifest["sigma"] = opt.sigma;
  manifest["ambient"] = opt.ambient;
  manifest["dims"] = opt.dims;
  manifest["counts"] = counts;
  manifest["points"] = opt.out;
  manifest["normalized"] = true;
  json bases = json::array();
  for (const auto& s : sample.arrangement.subspaces)
    bases.push_back(fsc::matrix_to_json(s.basis));
  manifest["bases"] = std::move(bases);
  const std::string manifest_path =
      opt.manifest.empty() ? opt.out + ".json" : opt.manifest;
  fsc::write_json(manifest, manifest_path);

  std::cout << "wrote " << sample.cloud.size() << " points to " << opt.out
            << " (manifest " << manifest_path << ", seed " << opt.seed
            << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// run

struct MethodOutcome {
  std::vector<int> labels;
  std::optional<fsc::Matrix<double>> affinity;  // symmetrized, when spectral
  double eigengap = std::numeric_limits<double>::quiet_NaN();
  json extra = json::object();  // method-specific fields (e.g. fasc dims)
};

MethodOutcome dispatch_method(const std::string& method,
                              const fsc::PointCloud<double>& cloud,
                              const RunOptions& opt) {
  MethodOutcome outcome;
  const Index clusters = opt.clusters > 0 ? opt.clusters : opt.n;
  fsc::RankPolicy policy;
  policy.relative_tolerance = opt.tol;

  if (method == "fsasc") {
    fsc::FsascParams<double> params;
    params.degree = opt.n;
    params.clusters = clusters;
    params.min_cluster = opt.min_cluster;
    params.gammas = opt.gammas;
    params.seed = opt.seed;
    params.threads = opt.threads;
    auto result = fsc::fsasc(cloud, params);
    outcome.labels = std::move(result.labels);
    outcome.affinity =
        result.affinity.weights + result.affinity.weights.transpose();
    outcome.eigengap = result.eigengap;
    outcome.extra["beta"] = result.beta;
    outcome.extra["gamma_selected"] = result.gamma;
  } else if (method == "sasc-a" || method == "sasc-d") {
    const auto variant = method == "sasc-a" ? fsc::SascVariant::kAngle
                                            : fsc::SascVariant::kDist;
    auto result = fsc::sasc_cluster(cloud, opt.n, variant, opt.seed, clusters);
    outcome.labels = std::move(result.labels);
    outcome.affinity =
        result.affinity.weights + result.affinity.weights.transpose();
    outcome.eigengap = result.eigengap;
  } else if (method == "fasc") {
    const auto unit = fsc::normalize_points(cloud);
    const auto result = fsc::fasc(unit, opt.n, policy);
    outcome.labels.resize(unit.size());
    for (Index j = 0; j < unit.size(); ++j) {
      double best = std::numeric_limits<double>::max();
      for (Index i = 0; i < result.count; ++i) {
        const double dist = (result.complements[i].transpose() *
                             unit.points.row(j).transpose())
                                .norm();
        if (dist < best) {
          best = dist;
          outcome.labels[j] = static_cast<int>(i);
        }
      }
    }
    outcome.extra["n_found"] = result.count;
    outcome.extra["dims"] = result.dims;
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  return outcome;
}

int cmd_run(const RunOptions& opt) {
  if (opt.input.empty() || opt.n < 1) {
    std::cerr << "run: --input and --n are required\n";
    return kExitConfig;
  }
  const fsc::PointCloud<double> cloud = fsc::read_points_csv(opt.input);
  if (!cloud.has_labels()) {
    std::cerr << "run: input CSV must carry a label column (labels are used "
                 "only for metrics)\n";
    return kExitConfig;
  }

  const double t0 = now_seconds();
  const MethodOutcome outcome = dispatch_method(opt.method, cloud, opt);
  const double seconds = now_seconds() - t0;

  fsc::ClusteringResult metrics;
  metrics.labels = outcome.labels;
  metrics.error_percent = fsc::clustering_error(outcome.labels, cloud.labels);
  metrics.eigengap = outcome.eigengap;
  metrics.intra = std::numeric_limits<double>::quiet_NaN();
  metrics.inter_percent = std::numeric_limits<double>::quiet_NaN();

  json result;
  result["command"] = "run";
  result["method"] = opt.method;
  result["input"] = opt.input;
  result["n"] = opt.n;
  result["clusters"] = opt.clusters > 0 ? opt.clusters : opt.n;
  result["gamma"] = opt.gammas;
  result["min_cluster"] = opt.min_cluster;
  result["tol"] = opt.tol;
  result["seed"] = opt.seed;
  result["labels"] = metrics.labels;
  result.update(outcome.extra);
  result["error_percent"] = metrics.error_percent;
  if (outcome.affinity) {
    metrics.intra = fsc::intra_connectivity(*outcome.affinity, cloud.labels);
    metrics.inter_percent =
        fsc::inter_connectivity(*outcome.affinity, cloud.labels);
    result["intra"] = metrics.intra;
    result["inter_percent"] = metrics.inter_percent;
    if (opt.save_affinity)
      result["affinity"] = fsc::matrix_to_json(*outcome.affinity);
  }
  if (!std::isnan(metrics.eigengap)) result["eigengap"] = metrics.eigengap;
  result["seconds"] = seconds;

  std::cout << "error_percent=" << metrics.error_percent
            << " intra=" << metrics.intra
            << " inter_percent=" << metrics.inter_percent
            << " eigengap=" << metrics.eigengap << " seconds=" << seconds
            << " seed=" << opt.seed << "\n";

  if (!opt.out.empty()) {
    if (opt.format == "json") {
      fsc::write_json(result, opt.out);
    } else {
      std::ofstream out(opt.out);
      out << "error_percent,intra,inter_percent,eigengap,seconds\n"
          << metrics.error_percent << "," << metrics.intra << ","
          << metrics.inter_percent << "," << metrics.eigengap << ","
          << seconds << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchCell {
  std::string dims_text;
  double sigma = 0;
  std::string method;
  int trials = 0;
  int failures = 0;
  double mean_error = 0;
  double mean_intra = 0;
  double mean_inter = 0;
  double mean_seconds = 0;
};

std::vector<std::int64_t> parse_dims_text(const std::string& text) {
  std::vector<std::int64_t> dims;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) dims.push_back(std::stoll(cell));
  return dims;
}

int cmd_bench(const BenchOptions& opt) {
  if (opt.configs.empty() || opt.n < 1) {
    std::cerr << "bench: --configs and --n are required\n";
    return kExitConfig;
  }

  std::vector<BenchCell> cells;
  for (const std::string& config : opt.configs) {
    const std::vector<std::int64_t> dims = parse_dims_text(config);
    std::vector<std::int64_t> counts = opt.counts;
    if (counts.size() == 1) counts.assign(dims.size(), counts[0]);
    if (counts.size() != dims.size()) {
      std::cerr << "bench: --counts must be one value or match each config\n";
      return kExitConfig;
    }
    for (const double sigma : opt.sigmas) {
      for (const std::string& method : opt.methods) {
        BenchCell cell;
        cell.dims_text = config;
        cell.sigma = sigma;
        cell.method = method;
        cell.trials = opt.trials;

        struct TrialResult {
          bool ok = false;
          double error = 0, intra = 0, inter = 0, seconds = 0;
        };
        std::vector<TrialResult> results(opt.trials);

        // Per-trial seed = base seed + trial index, so single runs are
        // reproducible with `run --seed <base+t>`.
        auto run_trial = [&](int t) {
          TrialResult& r = results[t];
          try {
            const auto sample = fsc::sample_arrangement<double>(
                opt.ambient, to_index_vec(dims), to_index_vec(counts), sigma,
                opt.seed + static_cast<std::uint64_t>(t));
            RunOptions run_opt;
            run_opt.method = method;
            run_opt.n = opt.n;
            run_opt.clusters = opt.clusters;
            run_opt.gammas = opt.gammas;
            run_opt.min_cluster = opt.min_cluster;
            run_opt.tol = opt.tol;
            run_opt.seed = opt.seed + static_cast<std::uint64_t>(t);
            run_opt.threads = 1;  // trials already run concurrently
            const double t0 = now_seconds();
            const MethodOutcome outcome =
                dispatch_method(method, sample.cloud, run_opt);
            r.seconds = now_seconds() - t0;
            r.error =
                fsc::clustering_error(outcome.labels, sample.cloud.labels);
            if (outcome.affinity) {
              r.intra = fsc::intra_connectivity(*outcome.affinity,
                                                sample.cloud.labels);
              r.inter = fsc::inter_connectivity(*outcome.affinity,
                                                sample.cloud.labels);
            }
            r.ok = true;
          } catch (const std::exception& e) {
            std::cerr << "bench: trial " << t << " of " << method << " on ("
                      << config << ") sigma=" << sigma
                      << " failed: " << e.what() << "\n";
          }
        };

        unsigned workers = std::thread::hardware_concurrency();
        if (workers < 1) workers = 1;
        std::atomic<int> next{0};
        auto worker = [&] {
          for (int t = next.fetch_add(1); t < opt.trials;
               t = next.fetch_add(1))
            run_trial(t);
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        int ok = 0;
        for (const auto& r : results) {
          if (!r.ok) {
            ++cell.failures;
            continue;
          }
          ++ok;
          cell.mean_error += r.error;
          cell.mean_intra += r.intra;
          cell.mean_inter += r.inter;
          cell.mean_seconds += r.seconds;
        }
        if (ok > 0) {
          cell.mean_error /= ok;
          cell.mean_intra /= ok;
          cell.mean_inter /= ok;
          cell.mean_seconds /= ok;
        }
        cells.push_back(std::move(cell));
      }
    }
  }

  std::ostringstream table;
  if (opt.format == "csv") {
    table << "dims,sigma,method,trials,failures,mean_error_percent,"
             "mean_intra,mean_inter_percent,mean_seconds\n";
    for (const auto& c : cells)
      table << "\"" << c.dims_text << "\"," << c.sigma << "," << c.method
            << "," << c.trials << "," << c.failures << "," << c.mean_error
            << "," << c.mean_intra << "," << c.mean_inter << ","
            << c.mean_seconds << "\n";
  } else {
    json rows = json::array();
    for (const auto& c : cells) {
      json row;
      row["dims"] = c.dims_text;
      row["sigma"] = c.sigma;
      row["method"] = c.method;
      row["trials"] = c.trials;
      row["failures"] = c.failures;
      row["mean_error_percent"] = c.mean_error;
      row["mean_intra"] = c.mean_intra;
      row["mean_inter_percent"] = c.mean_inter;
      row["mean_seconds"] = c.mean_seconds;
      rows.push_back(std::move(row));
    }
    json doc;
    doc["command"] = "bench";
    doc["seed"] = opt.seed;
    doc["n"] = opt.n;
    doc["ambient"] = opt.ambient;
    doc["gamma"] = opt.gammas;
    doc["min_cluster"] = opt.min_cluster;
    doc["tol"] = opt.tol;
    doc["cells"] = std::move(rows);
    table << doc.dump(2) << "\n";
  }

  if (opt.out.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(opt.out);
    out << table.str();
    std::cout << "wrote " << cells.size() << " cells to " << opt.out
              << " (base seed " << opt.seed << ", trial t uses seed+t)\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

// Accepts a run-result JSON (labels + optional affinity), a points CSV with
// a label column, or a plain one-label-per-line file.
struct LabelFile {
  std::vector<int> labels;
  std::optional<fsc::Matrix<double>> affinity;
};

LabelFile read_labels_any(const std::string& path) {
  LabelFile out;
  std::ifstream probe(path);
  if (!probe) throw std::runtime_error("cannot open: " + path);
  char first = 0;
  probe >> first;
  probe.close();
  if (first == '{') {
    const json doc = fsc::read_json(path);
    out.labels = doc.at("labels").get<std::vector<int>>();
    if (doc.contains("affinity"))
      out.affinity = fsc::matrix_from_json(doc.at("affinity"));
    return out;
  }
  if (first == 'x') {
    const auto cloud = fsc::read_points_csv(path);
    if (!cloud.has_labels())
      throw std::runtime_error("no label column in " + path);
    out.labels = cloud.labels;
    return out;
  }
  std::ifstream in(path);
  int value = 0;
  while (in >> value) out.labels.push_back(value);
  if (out.labels.empty()) throw std::runtime_error("no labels in " + path);
  return out;
}

int cmd_eval(const EvalOptions& opt) {
  if (opt.pred.empty() || opt.truth.empty()) {
    std::cerr << "eval: --pred and --truth are required\n";
    return kExitConfig;
  }
  const LabelFile pred = read_labels_any(opt.pred);
  const LabelFile truth = read_labels_any(opt.truth);
  const double error = fsc::clustering_error(pred.labels, truth.labels);
  std::cout << "error_percent=" << error;
  if (pred.affinity) {
    std::cout << " intra="
              << fsc::intra_connectivity(*pred.affinity, truth.labels)
              << " inter_percent="
              << fsc::inter_connectivity(*pred.affinity, truth.labels);
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fsc: subspace clustering by descending filtrations"};
  app.require_subcommand(1);

  json cfg;
  try {
    cfg = load_config_file(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }

  GenOptions gen;
  config_default(cfg, "ambient", &gen.ambient);
  config_default(cfg, "dims", &gen.dims);
  config_default(cfg, "counts", &gen.counts);
  config_default(cfg, "sigma", &gen.sigma);
  config_default(cfg, "seed", &gen.seed);
  config_default(cfg, "out", &gen.out);
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset");
  gen_cmd->add_option("--ambient", gen.ambient, "ambient dimension D");
  gen_cmd->add_option("--dims", gen.dims, "subspace dimensions")
      ->delimiter(',');
  gen_cmd->add_option("--counts", gen.counts,
                      "points per subspace (one value broadcasts)")
      ->delimiter(',');
  gen_cmd->add_option("--sigma", gen.sigma, "noise level");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "output CSV path");
  gen_cmd->add_option("--manifest", gen.manifest,
                      "manifest path (default: <out>.json)");
  gen_cmd->add_option("--config", gen.config_path, "JSON config file");

  RunOptions run;
  config_default(cfg, "method", &run.method);
  config_default(cfg, "input", &run.input);
  config_default(cfg, "n", &run.n);
  config_default(cfg, "clusters", &run.clusters);
  config_default(cfg, "gamma", &run.gammas);
  config_default(cfg, "min-cluster", &run.min_cluster);
  config_default(cfg, "tol", &run.tol);
  config_default(cfg, "seed", &run.seed);
  config_default(cfg, "format", &run.format);
  config_default(cfg, "out", &run.out);
  auto* run_cmd = app.add_subcommand("run", "run one method on a dataset");
  run_cmd->add_option("--method", run.method,
                      "fsasc | sasc-a | sasc-d | fasc");
  run_cmd->add_option("--input", run.input, "points CSV with labels");
  run_cmd->add_option("--n", run.n, "number of subspaces / working degree");
  run_cmd->add_option("--clusters", run.clusters,
                      "clusters for the spectral step (default: n)");
  run_cmd->add_option("--gamma", run.gammas, "candidate gamma values")
      ->delimiter(',');
  run_cmd->add_option("--min-cluster", run.min_cluster,
                      "minimum cluster size L");
  run_cmd->add_option("--tol", run.tol, "rank tolerance");
  run_cmd->add_option("--seed", run.seed, "RNG seed (spectral step)");
  run_cmd->add_option("--format", run.format, "json | csv");
  run_cmd->add_option("--out", run.out, "result file");
  run_cmd->add_flag("--save-affinity", run.save_affinity,
                    "embed the affinity matrix in the result JSON");
  run_cmd->add_option("--threads", run.threads, "filtration worker threads");
  run_cmd->add_option("--config", run.config_path, "JSON config file");

  BenchOptions bench;
  config_default(cfg, "methods", &bench.methods);
  config_default(cfg, "configs", &bench.configs);
  config_default(cfg, "sigmas", &bench.sigmas);
  config_default(cfg, "ambient", &bench.ambient);
  config_default(cfg, "counts", &bench.counts);
  config_default(cfg, "trials", &bench.trials);
  config_default(cfg, "n", &bench.n);
  config_default(cfg, "clusters", &bench.clusters);
  config_default(cfg, "gamma", &bench.gammas);
  config_default(cfg, "min-cluster", &bench.min_cluster);
  config_default(cfg, "tol", &bench.tol);
  config_default(cfg, "seed", &bench.seed);
  config_default(cfg, "format", &bench.format);
  config_default(cfg, "out", &bench.out);
  auto* bench_cmd =
      app.add_subcommand("bench", "average methods over seeded trials");
  bench_cmd->add_option("--methods", bench.methods, "methods to compare")
      ->delimiter(',');
  bench_cmd->add_option("--configs", bench.configs,
                        "dimension configs, e.g. 2,3,4 4,5,6");
  bench_cmd->add_option("--sigmas", bench.sigmas, "noise levels")
      ->delimiter(',');
  bench_cmd->add_option("--ambient", bench.ambient, "ambient dimension D");
  bench_cmd->add_option("--counts", bench.counts,
                        "points per subspace (one value broadcasts)")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "trials per cell");
  bench_cmd->add_option("--n", bench.n, "working degree");
  bench_cmd->add_option("--clusters", bench.clusters,
                        "clusters for spectral step (default: n)");
  bench_cmd->add_option("--gamma", bench.gammas, "candidate gammas")
      ->delimiter(',');
  bench_cmd->add_option("--min-cluster", bench.min_cluster,
                        "minimum cluster size L");
  bench_cmd->add_option("--tol", bench.tol, "rank tolerance");
  bench_cmd->add_option("--seed", bench.seed,
                        "base seed; trial t uses seed+t");
  bench_cmd->add_option("--format", bench.format, "csv | json");
  bench_cmd->add_option("--out", bench.out, "table file (default: stdout)");
  bench_cmd->add_option("--config", bench.config_path, "JSON config file");

  EvalOptions eval;
  auto* eval_cmd =
      app.add_subcommand("eval", "recompute metrics from stored labels");
  eval_cmd->add_option("--pred", eval.pred,
                       "run-result JSON, labeled CSV, or plain labels");
  eval_cmd->add_option("--truth", eval.truth, "ground-truth labels file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (run_cmd->parsed()) return cmd_run(run);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (eval_cmd->parsed()) return cmd_eval(eval);
  } catch (const fsc::NotEnoughPointsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMethod;
  } catch (const fsc::GeneralPositionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMethod;
  } catch (const fsc::DegeneratePolynomialError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMethod;
  } catch (const fsc::NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMethod;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
