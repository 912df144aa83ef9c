#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "privwave/bounds.hpp"
#include "privwave/classifier.hpp"
#include "privwave/experiment.hpp"
#include "privwave/io.hpp"
#include "privwave/metrics.hpp"

namespace {

using privwave::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw privwave::ConfigError({path + ": cannot open"});
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw privwave::ConfigError({path + ": " + e.what()});
  }
}

// Grid values accepted everywhere: a single even integer (square grid) or a
// [gx, gy] pair.
privwave::GridSpec read_grid(const json& v) {
  auto extent = [](const json& e) {
    if (!e.is_number_integer()) throw privwave::ConfigError({"grid: must be an integer"});
    long long g = e.get<long long>();
    if (g < 2 || g % 2 != 0)
      throw privwave::ConfigError({"grid: must be an even integer >= 2"});
    return static_cast<int>(g);
  };
  if (v.is_array() && v.size() == 2)
    return privwave::GridSpec(extent(v[0]), extent(v[1]));
  if (v.is_number_integer()) return privwave::GridSpec(extent(v));
  throw privwave::ConfigError({"grid: must be an even integer or a [gx, gy] pair"});
}

int cmd_run(const std::string& config_path) {
  privwave::ExperimentConfig cfg = privwave::parse_experiment_config(load_json(config_path));
  privwave::ExperimentResult result = privwave::run_experiment(cfg);
  std::cout << result.truth.dump(2) << '\n';
  std::cout << privwave::aggregate_csv(result.aggregates);
  if (result.any_failed) {
    int failed = 0;
    for (const auto& r : result.records)
      if (!r.error.empty()) ++failed;
    std::cerr << failed << " run(s) failed; see runs.jsonl error fields\n";
    return 3;
  }
  return 0;
}

int cmd_gen(const std::string& spec_path, const std::string& out_path) {
  privwave::DatasetSpec spec = privwave::parse_dataset_spec(load_json(spec_path), "dataset");
  privwave::PointSet data = privwave::build_dataset(spec);
  privwave::write_points_csv(out_path, data);
  std::cout << "wrote " << data.size() << " points to " << out_path << '\n';
  return 0;
}

std::string range_claim_name(privwave::Mechanism m) {
  switch (m) {
    case privwave::Mechanism::privqt: return "privqt-rank-range";
    case privwave::Mechanism::privthr: return "privthr-rank-range";
    case privwave::Mechanism::privthr_em: return "privthr-em-rank-range";
    default: return "unknown";
  }
}

int cmd_bounds(const std::string& config_path) {
  json j = load_json(config_path);
  std::vector<std::string> issues;
  if (!j.is_object()) throw privwave::ConfigError({"config: must be a JSON object"});

  if (!j.contains("dataset")) issues.push_back("dataset: required");
  if (!j.contains("grid")) issues.push_back("grid: required");
  if (!j.contains("p")) issues.push_back("p: required");
  if (!j.contains("epsilon")) issues.push_back("epsilon: required");
  if (!issues.empty()) throw privwave::ConfigError(std::move(issues));

  privwave::DatasetSpec dspec = privwave::parse_dataset_spec(j["dataset"], "dataset");
  privwave::GridSpec grid = read_grid(j["grid"]);
  double p = privwave::normalize_fraction(j["p"].get<double>());
  double epsilon = j["epsilon"].get<double>();
  if (epsilon <= 0.0) throw privwave::ConfigError({"epsilon: must be > 0"});
  double omega = j.value("omega", 0.05);
  if (omega <= 0.0 || omega >= 1.0) throw privwave::ConfigError({"omega: must be in (0, 1)"});
  int reps = j.value("reps", 1000);
  if (reps < 1) throw privwave::ConfigError({"reps: must be >= 1"});
  int theta_reps = j.value("theta_reps", 400);
  std::uint64_t seed = j.value("seed", std::uint64_t{1});

  std::vector<privwave::Mechanism> mechs;
  if (j.contains("mechanisms")) {
    for (const auto& m : j["mechanisms"]) {
      privwave::Mechanism mech = privwave::mechanism_from_name(m.get<std::string>());
      if (mech == privwave::Mechanism::baseline)
        throw privwave::ConfigError({"mechanisms: baseline publishes no rank, nothing to bound"});
      mechs.push_back(mech);
    }
  } else {
    mechs = {privwave::Mechanism::privqt, privwave::Mechanism::privthr,
             privwave::Mechanism::privthr_em};
  }

  privwave::PointSet data = privwave::build_dataset(dspec);

  json reports = json::array();
  for (privwave::Mechanism mech : mechs) {
    double alpha = -1.0;
    if (j.contains("alpha") && j["alpha"].contains(privwave::mechanism_name(mech)))
      alpha = j["alpha"][privwave::mechanism_name(mech)].get<double>();
    privwave::CoverageReport rep = privwave::validate_k_coverage(
        mech, data, grid, p, epsilon, alpha, omega, reps, seed, theta_reps);
    json r;
    r["claim"] = range_claim_name(mech);
    r["mechanism"] = privwave::mechanism_name(mech);
    r["omega"] = omega;
    r["k_min"] = rep.bounds.k_min;
    r["k_max"] = rep.bounds.k_max;
    r["empirical_coverage"] = rep.empirical_coverage;
    r["required_coverage"] = rep.required_coverage;
    r["reps"] = rep.reps;
    r["inputs"] = {{"l_size", rep.inputs.l_size}, {"zcount", rep.inputs.zcount},
                   {"k", rep.inputs.k},           {"p", rep.inputs.p},
                   {"eps1", rep.inputs.eps1},     {"eps2", rep.inputs.eps2},
                   {"w_k", rep.inputs.w_k},       {"w_max", rep.inputs.w_max},
                   {"theta", rep.inputs.theta}};
    r["eta1"] = rep.bounds.eta1;
    r["eta2"] = rep.bounds.eta2;
    r["gamma"] = rep.bounds.gamma;
    r["beta"] = rep.bounds.beta;
    r["pass"] = rep.empirical_coverage >= rep.required_coverage;
    reports.push_back(std::move(r));
  }
  std::cout << reports.dump(2) << '\n';
  if (j.contains("output")) {
    std::ofstream out(j["output"].get<std::string>());
    out << reports.dump(2) << '\n';
  }
  for (const auto& r : reports)
    if (!r["pass"].get<bool>()) return 1;
  return 0;
}

int cmd_metrics(const std::string& truth_path, const std::string& priv_path) {
  privwave::GridClustering truth = privwave::read_label_matrix(truth_path);
  privwave::GridClustering priv = privwave::read_label_matrix(priv_path);
  if (truth.rows != priv.rows || truth.cols != priv.cols)
    throw std::runtime_error("label matrices disagree on shape: " +
                             std::to_string(truth.rows) + "x" + std::to_string(truth.cols) +
                             " vs " + std::to_string(priv.rows) + "x" +
                             std::to_string(priv.cols));
  json out;
  out["dsgc"] = privwave::dsgc(truth, priv);
  out["ocm"] = privwave::ocm(truth.labels, priv.labels);
  out["tce"] = privwave::tce(truth.labels, priv.labels);
  out["fmeasure"] = (truth.cluster_count == 0 || priv.cluster_count == 0)
                        ? 0.0
                        : privwave::fmeasure(truth, priv);
  out["truth_clusters"] = truth.cluster_count;
  out["priv_clusters"] = priv.cluster_count;
  out["truth_significant"] = truth.significant_cells();
  out["priv_significant"] = priv.significant_cells();
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_inspect(const std::string& spec_path, long long grid, double p,
                double eps, int theta_reps, double train_fraction,
                std::uint64_t master_seed) {
  privwave::DatasetSpec dspec = privwave::parse_dataset_spec(load_json(spec_path), "dataset");
  privwave::PointSet data = privwave::build_dataset(dspec);
  if (grid < 2 || grid % 2 != 0)
    throw privwave::ConfigError({"grid: must be an even integer >= 2"});
  p = privwave::normalize_fraction(p);

  json out;
  out["points"] = data.size();
  if (train_fraction < 1.0) {
    privwave::SeededRng split_rng(privwave::derive_seed(master_seed, "split", 0, 0), 0);
    auto [train, test] = privwave::split_train_test(data, train_fraction, split_rng);
    out["train_points"] = train.size();
    data = std::move(train);
  }

  privwave::GridSpec g(static_cast<int>(grid), static_cast<int>(grid));
  privwave::WaveClusterResult res = privwave::run_wavecluster(data, g, p);
  out["grid"] = grid;
  out["p"] = p;
  out["l_size"] = res.subband.positives_sorted.size();
  out["zcount"] = res.subband.zcount;
  out["k"] = res.threshold.k;
  out["d"] = res.threshold.d;
  out["cluster_count"] = res.clustering.cluster_count;
  out["significant_cells"] = res.clustering.significant_cells();
  json sizes = json::array();
  for (const auto& c : res.clustering.clusters) sizes.push_back(c.size());
  out["cluster_sizes"] = sizes;

  privwave::SeededRng theta_rng(privwave::derive_seed(master_seed, "theta", 0, 0), 0);
  double theta = privwave::estimate_theta(res.subband, eps, theta_reps, theta_rng);
  out["theta_eps"] = eps;
  out["theta"] = theta;
  out["theta_over_l"] =
      res.subband.positives_sorted.empty()
          ? 0.0
          : theta / static_cast<double>(res.subband.positives_sorted.size());
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private grid clustering: experiments, data "
               "generation, bound checks, and metrics"};
  app.require_subcommand(1);

  std::string config_path, spec_path, out_path, truth_path, priv_path;

  CLI::App* run = app.add_subcommand("run", "Run a full experiment sweep from a config file");
  run->add_option("--config", config_path, "Experiment config JSON")->required();

  CLI::App* gen = app.add_subcommand("gen", "Generate a dataset CSV from a spec file");
  gen->add_option("--spec", spec_path, "Dataset spec JSON")->required();
  gen->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* bounds = app.add_subcommand("bounds", "Check rank-range claims empirically");
  bounds->add_option("--config", config_path, "Bounds config JSON")->required();

  CLI::App* metrics = app.add_subcommand("metrics", "Compare two label matrices");
  metrics->add_option("--truth", truth_path, "Reference label matrix CSV")->required();
  metrics->add_option("--priv", priv_path, "Candidate label matrix CSV")->required();

  long long grid = 64;
  double p = 0.5, eps = 0.5, train_fraction = 1.0;
  int theta_reps = 200;
  std::uint64_t master_seed = 1;
  CLI::App* inspect = app.add_subcommand("inspect", "Profile a dataset under a grid and threshold");
  inspect->add_option("--spec", spec_path, "Dataset spec JSON")->required();
  inspect->add_option("--grid", grid, "Cells per axis (even)")->required();
  inspect->add_option("--p", p, "Density threshold (fraction or percent)")->required();
  inspect->add_option("--eps", eps, "Budget used for the theta estimate");
  inspect->add_option("--theta-reps", theta_reps, "Monte-Carlo repetitions for theta");
  inspect->add_option("--train-fraction", train_fraction,
                      "Profile only a seeded train split of this size");
  inspect->add_option("--master-seed", master_seed, "Seed for the split and theta streams");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*gen) return cmd_gen(spec_path, out_path);
    if (*bounds) return cmd_bounds(config_path);
    if (*metrics) return cmd_metrics(truth_path, priv_path);
    if (*inspect)
      return cmd_inspect(spec_path, grid, p, eps, theta_reps, train_fraction, master_seed);
  } catch (const privwave::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
