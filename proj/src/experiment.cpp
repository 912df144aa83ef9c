#include "privwave/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "privwave/classifier.hpp"
#include "privwave/io.hpp"
#include "privwave/metrics.hpp"

namespace privwave {

namespace {

std::string join_issues(const std::vector<std::string>& problems) {
  std::string out = "invalid config:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

// Field-level reader that records every problem instead of stopping at the
// first, so a broken config reports all its mistakes in one pass. Keys
// nobody consumed are rejected by finish(), making typos loud.
class Fields {
 public:
  Fields(const json& j, std::string prefix, std::vector<std::string>& issues)
      : j_(j), prefix_(std::move(prefix)), issues_(issues) {}

  void fail(const std::string& key, const std::string& msg) {
    issues_.push_back(prefix_ + key + ": " + msg);
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  bool number(const std::string& key, double& out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_number()) {
      fail(key, "must be a number");
      return false;
    }
    out = v->get<double>();
    return true;
  }

  bool integer(const std::string& key, long long& out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_number_integer()) {
      fail(key, "must be an integer");
      return false;
    }
    out = v->get<long long>();
    return true;
  }

  bool u64(const std::string& key, std::uint64_t& out) {
    const json* v = get(key);
    if (!v) return false;
    if (v->is_number_unsigned()) {
      out = v->get<std::uint64_t>();
      return true;
    }
    if (v->is_number_integer() && v->get<long long>() >= 0) {
      out = static_cast<std::uint64_t>(v->get<long long>());
      return true;
    }
    fail(key, "must be a non-negative integer");
    return false;
  }

  bool str(const std::string& key, std::string& out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_string()) {
      fail(key, "must be a string");
      return false;
    }
    out = v->get<std::string>();
    return true;
  }

  bool boolean(const std::string& key, bool& out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_boolean()) {
      fail(key, "must be a boolean");
      return false;
    }
    out = v->get<bool>();
    return true;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void finish() {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) fail(item.key(), "unknown field");
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

DatasetSpec read_dataset(const json& j, const std::string& where,
                         std::vector<std::string>& issues) {
  DatasetSpec spec;
  if (!j.is_object()) {
    issues.push_back(where + ": must be an object");
    return spec;
  }
  Fields f(j, where + ".", issues);

  std::string kind;
  if (!f.str("kind", kind)) {
    if (!f.has("kind"))
      f.fail("kind", "required: one of gaussians, spirals, shapes, csv");
    return spec;
  }
  spec.kind = kind;

  long long ll = 0;
  double d = 0.0;
  std::uint64_t u = 0;

  if (kind == "gaussians") {
    auto& g = spec.gaussians;
    if (f.integer("components", ll)) {
      if (ll < 1) f.fail("components", "must be >= 1");
      else g.components = static_cast<int>(ll);
    }
    if (f.integer("n_points", ll)) {
      if (ll < 1) f.fail("n_points", "must be >= 1");
      else g.n_points = ll;
    }
    if (f.u64("seed", u)) g.seed = u;
    if (f.number("sigma", d)) {
      if (d <= 0.0) f.fail("sigma", "must be > 0");
      else g.sigma = d;
    }
    if (f.number("sigma_spread", d)) {
      if (d < 0.0 || d >= 1.0) f.fail("sigma_spread", "must be in [0, 1)");
      else g.sigma_spread = d;
    }
    if (f.number("jitter", d)) {
      if (d < 0.0) f.fail("jitter", "must be >= 0");
      else g.jitter = d;
    }
    if (f.number("truncate", d)) {
      if (d <= 0.0) f.fail("truncate", "must be > 0");
      else g.truncate = d;
    }
  } else if (kind == "spirals") {
    auto& s = spec.spirals;
    if (f.integer("arms", ll)) {
      if (ll < 1) f.fail("arms", "must be >= 1");
      else s.arms = static_cast<int>(ll);
    }
    if (f.integer("n_points", ll)) {
      if (ll < 1) f.fail("n_points", "must be >= 1");
      else s.n_points = ll;
    }
    if (f.u64("seed", u)) s.seed = u;
    if (f.number("r0", d)) {
      if (d <= 0.0) f.fail("r0", "must be > 0");
      else s.r0 = d;
    }
    if (f.number("r1", d)) {
      if (d <= 0.0) f.fail("r1", "must be > 0");
      else s.r1 = d;
    }
    if (f.number("sweep", d)) {
      if (d <= 0.0) f.fail("sweep", "must be > 0");
      else s.sweep = d;
    }
    if (f.number("jitter", d)) {
      if (d < 0.0) f.fail("jitter", "must be >= 0");
      else s.jitter = d;
    }
    if (f.number("truncate", d)) {
      if (d <= 0.0) f.fail("truncate", "must be > 0");
      else s.truncate = d;
    }
    if (f.number("ramp", d)) {
      if (d < 0.0) f.fail("ramp", "must be >= 0");
      else s.ramp = d;
    }
    if (s.r1 <= s.r0) f.fail("r1", "must exceed r0");
  } else if (kind == "shapes") {
    auto& s = spec.shapes;
    if (f.integer("n_points", ll)) {
      if (ll < 1) f.fail("n_points", "must be >= 1");
      else s.n_points = ll;
    }
    if (f.u64("seed", u)) s.seed = u;
    if (f.number("bridge_density", d)) {
      if (d < 0.0 || d > 1.0) f.fail("bridge_density", "must be in [0, 1]");
      else s.bridge_density = d;
    }
    if (f.number("bridge_halfwidth", d)) {
      if (d <= 0.0) f.fail("bridge_halfwidth", "must be > 0");
      else s.bridge_halfwidth = d;
    }
  } else if (kind == "csv") {
    if (!f.str("path", spec.csv_path) && !f.has("path"))
      f.fail("path", "required for kind csv");
    else if (spec.csv_path.empty() && f.has("path"))
      f.fail("path", "must not be empty");
    if (f.integer("sample_n", ll)) {
      if (ll < 1) f.fail("sample_n", "must be >= 1");
      else spec.sample_n = ll;
    }
    if (f.u64("seed", u)) spec.csv_seed = u;
  } else {
    f.fail("kind", "unknown kind '" + kind +
                       "' (expected gaussians, spirals, shapes, or csv)");
    return spec;
  }
  f.finish();
  return spec;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_issues(problems)), issues(std::move(problems)) {}

double normalize_fraction(double p) { return p > 1.0 ? p / 100.0 : p; }

DatasetSpec parse_dataset_spec(const json& j, const std::string& path_prefix) {
  std::vector<std::string> issues;
  DatasetSpec spec = read_dataset(j, path_prefix.empty() ? "dataset" : path_prefix, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

ExperimentConfig parse_experiment_config(const json& j) {
  std::vector<std::string> issues;
  ExperimentConfig cfg;
  if (!j.is_object()) {
    issues.push_back("config: must be a JSON object");
    throw ConfigError(std::move(issues));
  }
  Fields f(j, "", issues);

  if (const json* ds = f.get("dataset"))
    cfg.dataset = read_dataset(*ds, "dataset", issues);
  else
    f.fail("dataset", "required");

  if (const json* g = f.get("grid")) {
    auto read_extent = [&](const json& v, const std::string& key, int& out) {
      if (!v.is_number_integer()) {
        f.fail(key, "must be an integer");
        return;
      }
      long long e = v.get<long long>();
      if (e < 2 || e % 2 != 0) {
        f.fail(key, "must be an even integer >= 2");
        return;
      }
      out = static_cast<int>(e);
    };
    int gx = 0, gy = 0;
    if (g->is_array() && g->size() == 2) {
      read_extent((*g)[0], "grid[0]", gx);
      read_extent((*g)[1], "grid[1]", gy);
    } else if (g->is_number_integer()) {
      read_extent(*g, "grid", gx);
      gy = gx;
    } else {
      f.fail("grid", "must be an even integer or a [gx, gy] pair");
    }
    if (gx >= 2 && gy >= 2) cfg.grid = GridSpec(gx, gy);
  } else {
    f.fail("grid", "required");
  }

  double d = 0.0;
  if (f.number("p", d)) {
    double frac = normalize_fraction(d);
    if (frac < 0.0 || frac >= 1.0)
      f.fail("p", "must be a fraction in [0, 1) or a percentage in [0, 100)");
    else
      cfg.p = frac;
  } else if (!f.has("p")) {
    f.fail("p", "required");
  }

  if (const json* mechs = f.get("mechanisms")) {
    if (!mechs->is_array() || mechs->empty()) {
      f.fail("mechanisms", "must be a non-empty array of mechanism names");
    } else {
      for (std::size_t i = 0; i < mechs->size(); ++i) {
        const json& m = (*mechs)[i];
        std::string key = "mechanisms[" + std::to_string(i) + "]";
        if (!m.is_string()) {
          f.fail(key, "must be a string");
          continue;
        }
        try {
          cfg.mechanisms.push_back(mechanism_from_name(m.get<std::string>()));
        } catch (const std::exception& e) {
          f.fail(key, e.what());
        }
      }
    }
  } else {
    cfg.mechanisms = {Mechanism::baseline, Mechanism::privqt,
                      Mechanism::privthr, Mechanism::privthr_em};
  }

  if (const json* eps = f.get("epsilons")) {
    if (!eps->is_array() || eps->empty()) {
      f.fail("epsilons", "must be a non-empty array of positive numbers");
    } else {
      for (std::size_t i = 0; i < eps->size(); ++i) {
        const json& e = (*eps)[i];
        std::string key = "epsilons[" + std::to_string(i) + "]";
        if (!e.is_number()) {
          f.fail(key, "must be a number");
        } else if (e.get<double>() <= 0.0) {
          f.fail(key, "must be > 0");
        } else {
          cfg.epsilons.push_back(e.get<double>());
        }
      }
    }
  } else {
    f.fail("epsilons", "required");
  }

  if (const json* al = f.get("alpha")) {
    if (!al->is_object()) {
      f.fail("alpha", "must map mechanism names to budget shares");
    } else {
      for (const auto& item : al->items()) {
        std::string key = "alpha." + item.key();
        Mechanism m;
        try {
          m = mechanism_from_name(item.key());
        } catch (const std::exception& e) {
          f.fail(key, e.what());
          continue;
        }
        if (!item.value().is_number()) {
          f.fail(key, "must be a number");
        } else {
          double a = item.value().get<double>();
          if (a <= 0.0 || a >= 1.0) f.fail(key, "must be in (0, 1)");
          else cfg.alphas[m] = a;
        }
      }
    }
  }

  long long ll = 0;
  if (f.integer("repetitions", ll)) {
    if (ll < 1) f.fail("repetitions", "must be >= 1");
    else cfg.repetitions = static_cast<int>(ll);
  }

  std::uint64_t u = 0;
  if (f.u64("master_seed", u)) cfg.master_seed = u;

  if (f.number("train_fraction", d)) {
    if (d <= 0.0 || d >= 1.0) f.fail("train_fraction", "must be in (0, 1)");
    else cfg.train_fraction = d;
  }

  f.str("output_dir", cfg.output_dir);
  f.boolean("write_labels", cfg.write_labels);
  f.finish();

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

PointSet build_dataset(const DatasetSpec& spec) {
  if (spec.kind == "gaussians") return gen_gaussians(spec.gaussians);
  if (spec.kind == "spirals") return gen_spirals(spec.spirals);
  if (spec.kind == "shapes") return gen_shapes(spec.shapes);
  if (spec.kind == "csv") {
    SeededRng rng(spec.csv_seed, 0);
    return ingest_csv(spec.csv_path, spec.sample_n, rng);
  }
  throw std::runtime_error("dataset: unknown kind '" + spec.kind + "'");
}

json RunRecord::to_json() const {
  json j;
  j["mechanism"] = mechanism;
  j["epsilon"] = epsilon;
  j["eps_index"] = eps_index;
  j["repetition"] = repetition;
  j["seed"] = seed;
  j["alpha"] = alpha;
  if (!error.empty()) {
    j["error"] = error;
    return j;
  }
  j["k_true"] = k_true;
  j["k_prime"] = k_prime;
  j["d_prime"] = d_prime;
  j["cluster_count"] = cluster_count;
  j["degenerate"] = degenerate;
  j["dsgc"] = dsgc;
  j["ocm"] = ocm;
  j["tce"] = tce;
  j["fmeasure"] = fmeasure;
  return j;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  struct Group {
    std::string mechanism;
    double epsilon = 0.0;
    std::vector<const RunRecord*> recs;
  };
  std::vector<Group> groups;
  auto find_group = [&](const RunRecord& r) -> Group& {
    for (auto& g : groups)
      if (g.mechanism == r.mechanism && g.epsilon == r.epsilon) return g;
    groups.push_back({r.mechanism, r.epsilon, {}});
    return groups.back();
  };
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    find_group(r).recs.push_back(&r);
  }

  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (auto& g : groups) {
    // Canonical accumulation order keeps float sums independent of the order
    // records arrived in.
    std::sort(g.recs.begin(), g.recs.end(),
              [](const RunRecord* a, const RunRecord* b) {
                return a->repetition < b->repetition;
              });
    AggregateRow row;
    row.mechanism = g.mechanism;
    row.epsilon = g.epsilon;
    row.runs = static_cast<int>(g.recs.size());
    if (g.recs.empty()) {
      rows.push_back(row);
      continue;
    }
    row.k_true = g.recs.front()->k_true;
    auto stats = [&](auto getter, double& mean, double* stddev) {
      std::vector<double> xs;
      xs.reserve(g.recs.size());
      for (const RunRecord* r : g.recs) xs.push_back(getter(*r));
      double sum = 0.0;
      for (double x : xs) sum += x;
      mean = sum / static_cast<double>(xs.size());
      if (stddev) *stddev = sample_std(xs, mean);
    };
    stats([](const RunRecord& r) { return static_cast<double>(r.k_prime); },
          row.k_prime_mean, &row.k_prime_std);
    stats([](const RunRecord& r) { return static_cast<double>(r.cluster_count); },
          row.cluster_count_mean, nullptr);
    stats([](const RunRecord& r) { return r.dsgc; }, row.dsgc_mean, &row.dsgc_std);
    stats([](const RunRecord& r) { return r.ocm; }, row.ocm_mean, &row.ocm_std);
    stats([](const RunRecord& r) { return r.tce; }, row.tce_mean, &row.tce_std);
    stats([](const RunRecord& r) { return r.fmeasure; }, row.fmeasure_mean,
          &row.fmeasure_std);
    rows.push_back(row);
  }
  return rows;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "mechanism,epsilon,runs,k_true,k_prime_mean,k_prime_std,"
      "cluster_count_mean,dsgc_mean,dsgc_std,ocm_mean,ocm_std,"
      "tce_mean,tce_std,fmeasure_mean,fmeasure_std\n";
  for (const auto& r : rows) {
    out += r.mechanism;
    out += ',' + fmt_double(r.epsilon);
    out += ',' + std::to_string(r.runs);
    out += ',' + std::to_string(r.k_true);
    out += ',' + fmt_double(r.k_prime_mean);
    out += ',' + fmt_double(r.k_prime_std);
    out += ',' + fmt_double(r.cluster_count_mean);
    out += ',' + fmt_double(r.dsgc_mean);
    out += ',' + fmt_double(r.dsgc_std);
    out += ',' + fmt_double(r.ocm_mean);
    out += ',' + fmt_double(r.ocm_std);
    out += ',' + fmt_double(r.tce_mean);
    out += ',' + fmt_double(r.tce_std);
    out += ',' + fmt_double(r.fmeasure_mean);
    out += ',' + fmt_double(r.fmeasure_std);
    out += '\n';
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  PointSet data = build_dataset(cfg.dataset);

  SeededRng split_rng(derive_seed(cfg.master_seed, "split", 0, 0), 0);
  auto [train, test] = split_train_test(data, cfg.train_fraction, split_rng);

  WaveClusterResult truth = run_wavecluster(train, cfg.grid, cfg.p);
  DecisionTree truth_tree;
  {
    auto samples = make_training_set(truth.clustering, train.bounds);
    truth_tree = train_tree(samples);
  }
  std::vector<int> truth_pred = predict_labels(truth_tree, test);

  result.truth["dataset"] = cfg.dataset.kind;
  result.truth["points"] = data.size();
  result.truth["train_points"] = train.size();
  result.truth["test_points"] = test.size();
  result.truth["grid"] = json::array({cfg.grid.g1, cfg.grid.g2});
  result.truth["p"] = cfg.p;
  result.truth["train_fraction"] = cfg.train_fraction;
  result.truth["master_seed"] = cfg.master_seed;
  result.truth["k"] = truth.threshold.k;
  result.truth["d"] = truth.threshold.d;
  result.truth["l_size"] = truth.subband.positives_sorted.size();
  result.truth["zcount"] = truth.subband.zcount;
  result.truth["cluster_count"] = truth.clustering.cluster_count;
  result.truth["significant_cells"] = truth.clustering.significant_cells();

  const bool writing = !cfg.output_dir.empty();
  namespace fs = std::filesystem;
  if (writing) {
    fs::create_directories(cfg.output_dir);
    if (cfg.write_labels) fs::create_directories(fs::path(cfg.output_dir) / "labels");
  }

  struct Task {
    Mechanism mech;
    int ei = 0;
    int rep = 0;
  };
  std::vector<Task> tasks;
  for (Mechanism mech : cfg.mechanisms)
    for (std::size_t ei = 0; ei < cfg.epsilons.size(); ++ei)
      for (int rep = 0; rep < cfg.repetitions; ++rep)
        tasks.push_back({mech, static_cast<int>(ei), rep});

  // Runs fill their own slot, so completion order never leaks into the
  // output; all file writes happen afterwards on this thread.
  const bool keep_labels = writing && cfg.write_labels;
  result.records.resize(tasks.size());
  std::vector<GridClustering> run_labels(keep_labels ? tasks.size() : 0);
  std::atomic<std::size_t> cursor{0};

  auto worker = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      RunRecord& rec = result.records[i];
      rec.mechanism = mechanism_name(t.mech);
      rec.epsilon = cfg.epsilons[static_cast<std::size_t>(t.ei)];
      rec.eps_index = t.ei;
      rec.repetition = t.rep;
      rec.seed = derive_seed(cfg.master_seed, rec.mechanism,
                             static_cast<std::uint64_t>(t.ei),
                             static_cast<std::uint64_t>(t.rep));
      auto it = cfg.alphas.find(t.mech);
      PrivateRunConfig pcfg;
      pcfg.mechanism = t.mech;
      pcfg.epsilon = rec.epsilon;
      pcfg.alpha = it == cfg.alphas.end() ? -1.0 : it->second;
      pcfg.grid = cfg.grid;
      pcfg.p = cfg.p;
      pcfg.seed = rec.seed;
      try {
        PrivateRunResult res = run_private(train, pcfg);
        rec.alpha = res.alpha;
        rec.k_true = res.k_true;
        rec.k_prime = res.selection.k_prime;
        rec.d_prime = res.selection.d_prime;
        rec.cluster_count = res.clustering.cluster_count;
        rec.degenerate = res.selection.degenerate;
        rec.dsgc = dsgc(truth.clustering, res.clustering);

        auto priv_samples = make_training_set(res.clustering, train.bounds);
        DecisionTree priv_tree = train_tree(priv_samples);
        std::vector<int> priv_pred = predict_labels(priv_tree, test);
        rec.ocm = ocm(truth_pred, priv_pred);
        rec.tce = tce(truth_pred, priv_pred);
        rec.fmeasure = (truth.clustering.cluster_count == 0 ||
                        res.clustering.cluster_count == 0)
                           ? 0.0
                           : fmeasure(truth.clustering, res.clustering);

        if (keep_labels) run_labels[i] = std::move(res.clustering);
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  std::size_t n_workers = std::min<std::size_t>(std::max(hw, 1u), tasks.size());
  if (n_workers > 1) {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }

  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const RunRecord& rec = result.records[i];
    if (!rec.error.empty()) {
      result.any_failed = true;
    } else if (keep_labels) {
      fs::path p = fs::path(cfg.output_dir) / "labels" /
                   (rec.mechanism + "_e" + std::to_string(rec.eps_index) + "_r" +
                    std::to_string(rec.repetition) + ".csv");
      write_label_matrix(p.string(), run_labels[i]);
    }
  }

  result.aggregates = aggregate(result.records);

  if (writing) {
    fs::path dir(cfg.output_dir);
    {
      std::ofstream out(dir / "runs.jsonl");
      if (!out) throw std::runtime_error("cannot write " + (dir / "runs.jsonl").string());
      for (const auto& r : result.records) out << r.to_json().dump() << '\n';
    }
    {
      std::ofstream out(dir / "aggregate.csv");
      if (!out) throw std::runtime_error("cannot write " + (dir / "aggregate.csv").string());
      out << aggregate_csv(result.aggregates);
    }
    {
      std::ofstream out(dir / "truth.json");
      if (!out) throw std::runtime_error("cannot write " + (dir / "truth.json").string());
      out << result.truth.dump(2) << '\n';
    }
  }
  return result;
}

}  // namespace privwave
