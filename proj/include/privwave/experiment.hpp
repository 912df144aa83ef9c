#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "privwave/datagen.hpp"
#include "privwave/private_wavecluster.hpp"

namespace privwave {

using json = nlohmann::ordered_json;

struct DatasetSpec {
  std::string kind;  // gaussians | spirals | shapes | csv
  GaussiansSpec gaussians;
  SpiralsSpec spirals;
  ShapesSpec shapes;
  std::string csv_path;
  std::optional<long> sample_n;
  std::uint64_t csv_seed = 0;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  GridSpec grid;
  double p = 0.0;
  std::vector<Mechanism> mechanisms;
  std::vector<double> epsilons;
  std::map<Mechanism, double> alphas;  // absent = mechanism default
  int repetitions = 10;
  std::uint64_t master_seed = 0;
  double train_fraction = 0.9;
  std::string output_dir;
  bool write_labels = true;
};

// Collects every problem found, each prefixed with the offending field path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> problems);
  std::vector<std::string> issues;
};

DatasetSpec parse_dataset_spec(const json& j, const std::string& path_prefix);
ExperimentConfig parse_experiment_config(const json& j);

// Fractions above 1 are read as percentages.
double normalize_fraction(double p);

PointSet build_dataset(const DatasetSpec& spec);

struct RunRecord {
  std::string mechanism;
  double epsilon = 0.0;
  int eps_index = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  int k_true = 0;
  int k_prime = 0;
  double d_prime = 0.0;
  int cluster_count = 0;
  bool degenerate = false;
  double dsgc = 0.0;
  double ocm = 0.0;
  double tce = 0.0;
  double fmeasure = 0.0;
  std::string error;  // non-empty when the run failed

  json to_json() const;
};

struct AggregateRow {
  std::string mechanism;
  double epsilon = 0.0;
  int runs = 0;
  int k_true = 0;
  double k_prime_mean = 0.0, k_prime_std = 0.0;
  double cluster_count_mean = 0.0;
  double dsgc_mean = 0.0, dsgc_std = 0.0;
  double ocm_mean = 0.0, ocm_std = 0.0;
  double tce_mean = 0.0, tce_std = 0.0;
  double fmeasure_mean = 0.0, fmeasure_std = 0.0;
};

// Means and sample standard deviations per (mechanism, epsilon) group, in
// first-appearance order; failed runs are excluded. Record order within a
// group does not affect the result.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<AggregateRow> aggregates;
  json truth;
  bool any_failed = false;
};

// Full sweep: split the data once, compute the exact clustering and its
// classifier on the train side, then run every (mechanism, epsilon,
// repetition) cell with a seed derived from the master seed. When output_dir
// is set, writes runs.jsonl, aggregate.csv, truth.json and (optionally) one
// label matrix per run.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace privwave
