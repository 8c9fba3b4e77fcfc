#include "manifest.hpp"
#include "rsda/cli.hpp"

#include "rsda/errors.hpp"
#include "rsda/harness.hpp"
#include "rsda/random.hpp"
#include "rsda/rho_selection.hpp"
#include "rsda/serialization.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rsda::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ModelFlags {
  std::string model = "toy1";
  long p = 50;
  long n1 = 20;
  long n2 = 0;  // 0: same as n1
  double target_error = 0.10;
  double sparsity = 1.0;

  long class2() const { return n2 > 0 ? n2 : n1; }
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool sizes = true) {
  cmd->add_option("--model", f.model, "toy1|toy2|toy3|m1|m2|m3|rand1|rand2");
  cmd->add_option("--p", f.p, "dimension");
  if (sizes) {
    cmd->add_option("--n1", f.n1, "class 1 training size");
    cmd->add_option("--n2", f.n2, "class 2 training size (default: n1)");
  }
  cmd->add_option("--target-error", f.target_error, "Bayes error for toy and structured models");
  cmd->add_option("--sparsity", f.sparsity, "share of nonzero beta entries for random models");
}

ModelRecipe recipe_from(const ModelFlags& f) {
  ModelRecipe r;
  try {
    r = parse_model_name(f.model);
  } catch (const Error&) {
    throw UsageError("unknown --model '" + f.model + "'");
  }
  if (f.p < 2) {
    throw UsageError("--p must be at least 2");
  }
  if (f.n1 < 1 || f.n2 < 0) {
    throw UsageError("--n1 must be at least 1 and --n2 non-negative");
  }
  if (!(f.target_error > 0.0 && f.target_error < 0.5)) {
    throw UsageError("--target-error must lie in (0, 0.5)");
  }
  if (!(f.sparsity > 0.0 && f.sparsity <= 1.0)) {
    throw UsageError("--sparsity must lie in (0, 1]");
  }
  r.p = f.p;
  r.target_error = f.target_error;
  r.sparsity = f.sparsity;
  return r;
}

json model_json(const ModelFlags& f) {
  return json{{"model", f.model},           {"p", f.p},
              {"n1", f.n1},                 {"n2", f.class2()},
              {"target_error", f.target_error}, {"sparsity", f.sparsity}};
}

// "cv" or a positive number.
std::optional<double> parse_rho(const std::string& text) {
  if (text == "cv") {
    return std::nullopt;
  }
  const auto grid = parse_grid(text);
  if (grid.size() != 1 || !(grid[0] > 0.0)) {
    throw UsageError("--rho must be a positive number or 'cv', got '" + text + "'");
  }
  return grid[0];
}

std::vector<double> positive_grid(const std::string& text, const char* flag) {
  auto grid = parse_grid(text);
  for (const double v : grid) {
    if (!(v > 0.0)) {
      throw UsageError(std::string(flag) + " values must be positive");
    }
  }
  return grid;
}

std::vector<MethodSpec> methods_from(const std::string& text) {
  try {
    return parse_methods(text);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--methods: ") + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  ModelFlags model;
  int reps = 100;
  std::string methods = "road,rs-road,oracle";
  std::string rho = "0.5";
  std::string rho_grid;
  int cv_folds = 5;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  long n_test1 = 0;
  long n_test2 = 0;
  bool redraw_model = false;
  bool export_data = false;
};

int simulate(const SimulateFlags& f, Manifest manifest, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  if (f.reps < 1) {
    throw UsageError("--reps must be at least 1");
  }
  if (f.cv_folds < 2) {
    throw UsageError("--cv-folds must be at least 2");
  }
  if (f.n_test1 < 0 || f.n_test2 < 0) {
    throw UsageError("test sizes must be non-negative");
  }
  ExperimentSpec spec;
  spec.model = recipe_from(f.model);
  spec.n1 = f.model.n1;
  spec.n2 = f.model.class2();
  spec.n_test1 = f.n_test1;
  spec.n_test2 = f.n_test2;
  spec.methods = methods_from(f.methods);
  spec.replicates = f.reps;
  spec.master_seed = f.seed;
  spec.rho.fixed = parse_rho(f.rho);
  if (!f.rho_grid.empty()) {
    spec.rho.grid = positive_grid(f.rho_grid, "--rho-grid");
  }
  spec.cv_folds = f.cv_folds;
  spec.redraw_model = f.redraw_model;
  spec.threads = f.threads;

  const fs::path dir(f.out);
  fs::create_directories(dir);
  const ExperimentResult result = run_experiment(spec);
  write_text(dir / "result.json", result_to_json(result));
  write_text(dir / "errors.csv", result_to_long_csv(result));
  manifest.outputs = {(dir / "result.json").string(), (dir / "errors.csv").string()};
  if (f.export_data) {
    const PopulationModel model = spec.model.build(derive_seed(f.seed, 0, Stream::model));
    const GaussianSampler sampler(model);
    write_dataset_csv(dir / "train.csv",
                      sampler.draw(spec.n1, spec.n2, derive_seed(f.seed, 0, Stream::train)));
    write_dataset_csv(dir / "test.csv", sampler.draw(spec.test1(), spec.test2(),
                                                     derive_seed(f.seed, 0, Stream::test)));
    manifest.outputs.push_back((dir / "train.csv").string());
    manifest.outputs.push_back((dir / "test.csv").string());
  }
  manifest.seeds = json{{"master_seed", f.seed},
                        {"derivation", "splitmix64(master, replicate, stream)"}};
  manifest.wall_clock_seconds = seconds_since(started);
  write_manifest(dir / "manifest.json", manifest);

  out << std::left << std::setw(20) << "method" << std::setw(12) << "mean" << std::setw(12)
      << "std" << "failures\n";
  for (const auto& m : result.methods) {
    out << std::setw(20) << m.name << std::setw(12) << format_double(m.mean).substr(0, 10)
        << std::setw(12) << format_double(m.std).substr(0, 10) << m.failure_count << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainFlags {
  std::string data;
  std::string method;
  std::string rho = "0.5";
  std::string rho_grid;
  bool economy = false;
  int cv_folds = 5;
  std::uint64_t seed = 0;
  std::string grid;
  std::string model_out;
};

int train(const TrainFlags& f, Manifest manifest, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  if (f.cv_folds < 2) {
    throw UsageError("--cv-folds must be at least 2");
  }
  MethodSpec method;
  try {
    method = parse_method(f.method);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--method: ") + e.what());
  }
  if (method.base == Method::oracle || method.rotation == RotationMode::oracle) {
    throw UsageError("--method " + f.method + " needs the population model; use simulate");
  }
  const bool economy = f.economy || method.rotation == RotationMode::economy;
  const std::optional<double> fixed_rho = parse_rho(f.rho);

  const fs::path path(f.data);
  const LabeledDataset data = read_dataset_csv(path).labeled(path);
  if (data.n1() == 0 || data.n2() == 0) {
    throw DataError(path.string() + ": training data needs samples of both classes (n1=" +
                    std::to_string(data.n1()) + ", n2=" + std::to_string(data.n2()) + ")");
  }
  SolverConfig base;
  base.method = method.base;
  base.folds = f.cv_folds;
  base.seed = f.seed;
  if (!f.grid.empty()) {
    base.grid = parse_grid(f.grid);
  }
  try {
    base.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  AnyRule rule = [&]() -> AnyRule {
    if (!method.rotated()) {
      return train_linear(data, base);
    }
    double rho = 0.0;
    if (fixed_rho) {
      rho = *fixed_rho;
    } else {
      const auto grid = f.rho_grid.empty() ? default_rho_grid() : positive_grid(f.rho_grid, "--rho-grid");
      const RhoSelection sel = select_rho(data, grid, base, f.cv_folds, f.seed);
      rho = sel.rho_star;
      json curve = json::array();
      for (const auto& [r, e] : sel.curve) {
        curve.push_back(json{{"rho", r}, {"cv_error", e}});
      }
      manifest.extra["selected_rho"] = rho;
      manifest.extra["cv_curve"] = curve;
      manifest.extra["cv_folds_used"] = sel.folds_used;
    }
    return rotate_and_solve(data, rho, base, economy);
  }();

  const fs::path model_out(f.model_out);
  if (model_out.has_parent_path()) {
    fs::create_directories(model_out.parent_path());
  }
  write_text(model_out, rule_to_json(rule));
  manifest.outputs = {model_out.string()};
  manifest.seeds = json{{"seed", f.seed}};
  manifest.extra["training_error"] = misclassification_rate(rule, data);
  manifest.wall_clock_seconds = seconds_since(started);
  write_manifest(manifest_path_for(model_out), manifest);
  out << "wrote " << model_out.string() << '\n';
  return 0;
}

// ----------------------------------------------------------------- predict

struct PredictFlags {
  std::string model;
  std::string data;
  std::string out;
};

int predict(const PredictFlags& f, Manifest manifest, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const AnyRule rule = rule_from_json(read_text(f.model));
  const fs::path path(f.data);
  const DatasetFile file = read_dataset_csv(path);
  if (file.features.cols() != rule_dim(rule)) {
    std::ostringstream msg;
    msg << "rule expects p=" << rule_dim(rule) << " features but " << path.string() << " has p="
        << file.features.cols();
    throw DimensionError(msg.str());
  }
  const auto labels = predict_rows(rule, file.features);
  std::ostringstream csv;
  csv << "row,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    csv << i << ',' << to_int(labels[i]) << '\n';
  }
  const fs::path out_path(f.out);
  if (out_path.has_parent_path()) {
    fs::create_directories(out_path.parent_path());
  }
  write_text(out_path, csv.str());
  if (file.labels) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      wrong += labels[i] != (*file.labels)[i] ? 1 : 0;
    }
    const double rate = static_cast<double>(wrong) / static_cast<double>(labels.size());
    manifest.extra["error_rate"] = rate;
    out << "error_rate " << format_double(rate) << '\n';
  }
  manifest.outputs = {out_path.string()};
  manifest.wall_clock_seconds = seconds_since(started);
  write_manifest(manifest_path_for(out_path), manifest);
  return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepFlags {
  std::string kind;
  ModelFlags model;
  std::string grid;
  std::string levels;
  int reps = 100;
  std::string methods;
  std::string rho = "0.5";
  int cv_folds = 5;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};

int sweep(const SweepFlags& f, Manifest manifest, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  if (f.reps < 1) {
    throw UsageError("--reps must be at least 1");
  }
  if (f.kind != "rho" && f.kind != "sparsity") {
    throw UsageError("--kind must be rho or sparsity");
  }
  const bool rho_kind = f.kind == "rho";
  if (rho_kind && !f.levels.empty()) {
    throw UsageError("--levels belongs to --kind sparsity");
  }
  if (!rho_kind && !f.grid.empty()) {
    throw UsageError("--grid belongs to --kind rho; use --levels");
  }
  ExperimentSpec spec;
  spec.model = recipe_from(f.model);
  spec.n1 = f.model.n1;
  spec.n2 = f.model.class2();
  spec.methods = methods_from(f.methods.empty() ? (rho_kind ? "road,rs-road" : "road,rs-road,oracle")
                                                : f.methods);
  spec.replicates = f.reps;
  spec.master_seed = f.seed;
  spec.cv_folds = f.cv_folds;
  spec.threads = f.threads;
  spec.rho.fixed = parse_rho(f.rho);

  std::vector<SweepRow> rows;
  if (rho_kind) {
    rows = rho_sweep(spec, positive_grid(f.grid.empty() ? "0.1,1,10" : f.grid, "--grid"));
  } else {
    if (spec.model.family != ModelFamily::random) {
      throw UsageError("--kind sparsity needs --model rand1 or rand2");
    }
    const auto levels = positive_grid(f.levels.empty() ? "0.05:0.05:1.0" : f.levels, "--levels");
    for (const double level : levels) {
      if (level > 1.0) {
        throw UsageError("--levels must lie in (0, 1]");
      }
    }
    rows = sparsity_sweep(spec, levels);
  }
  const fs::path out_path(f.out);
  if (out_path.has_parent_path()) {
    fs::create_directories(out_path.parent_path());
  }
  write_text(out_path, sweep_to_csv(rows));
  manifest.outputs = {out_path.string()};
  manifest.seeds = json{{"master_seed", f.seed}};
  json failures = json::array();
  for (const auto& r : rows) {
    if (r.failures > 0) {
      failures.push_back(json{{"grid", r.grid}, {"method", r.method}, {"failures", r.failures}});
    }
  }
  manifest.extra["failures"] = failures;
  manifest.wall_clock_seconds = seconds_since(started);
  write_manifest(manifest_path_for(out_path), manifest);
  out << "wrote " << rows.size() << " rows to " << out_path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseFlags {
  ModelFlags model;
  double rho = 0.5;
  int reps = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string data;
};

int diagnose(const DiagnoseFlags& f, Manifest manifest, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  if (!f.data.empty()) {
    throw UsageError(
        "diagnose compares against the population discriminant direction, which only simulated "
        "models provide; --data files cannot be diagnosed");
  }
  if (f.reps < 1) {
    throw UsageError("--reps must be at least 1");
  }
  if (!(f.rho > 0.0)) {
    throw UsageError("--rho must be positive");
  }
  const ModelRecipe recipe = recipe_from(f.model);
  const PopulationModel model = recipe.build(derive_seed(f.seed, 0, Stream::model));
  const SparsityCurves curves =
      sparsity_diagnostic(model, f.rho, f.model.n1, f.model.class2(), f.reps, f.seed);
  std::ostringstream csv;
  csv << "index,raw,oracle,empirical\n";
  for (Eigen::Index j = 0; j < curves.raw.size(); ++j) {
    csv << (j + 1) << ',' << format_double(curves.raw(j)) << ',' << format_double(curves.oracle(j))
        << ',' << format_double(curves.empirical(j)) << '\n';
  }
  const fs::path out_path(f.out);
  if (out_path.has_parent_path()) {
    fs::create_directories(out_path.parent_path());
  }
  write_text(out_path, csv.str());
  manifest.outputs = {out_path.string()};
  manifest.seeds = json{{"seed", f.seed}};
  manifest.wall_clock_seconds = seconds_since(started);
  write_manifest(manifest_path_for(out_path), manifest);
  out << "wrote " << out_path.string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rsda: rotate-and-solve linear discriminant analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version));

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "replicated Monte-Carlo experiment");
  add_model_flags(sim_cmd, sim.model);
  sim_cmd->add_option("--reps", sim.reps, "replicates");
  sim_cmd->add_option("--methods", sim.methods, "comma-separated method names");
  sim_cmd->add_option("--rho", sim.rho, "rotation parameter or 'cv'");
  sim_cmd->add_option("--rho-grid", sim.rho_grid, "grid for --rho cv");
  sim_cmd->add_option("--cv-folds", sim.cv_folds, "cross-validation folds");
  sim_cmd->add_option("--seed", sim.seed, "master seed");
  sim_cmd->add_option("--out", sim.out, "output directory")->required();
  sim_cmd->add_option("--threads", sim.threads, "worker threads (0: all cores)");
  sim_cmd->add_option("--n-test1", sim.n_test1, "class 1 test size (default: n1)");
  sim_cmd->add_option("--n-test2", sim.n_test2, "class 2 test size (default: n2)");
  sim_cmd->add_flag("--redraw-model", sim.redraw_model, "new random model per replicate");
  sim_cmd->add_flag("--export-data", sim.export_data, "also write replicate 0 train/test CSVs");

  TrainFlags tr;
  auto* train_cmd = app.add_subcommand("train", "fit a rule to a labeled CSV file");
  train_cmd->add_option("--data", tr.data, "training CSV")->required();
  train_cmd->add_option("--method", tr.method, "lda|ir|nsc|road|rs-<base>[-econ]")->required();
  train_cmd->add_option("--rho", tr.rho, "rotation parameter or 'cv'");
  train_cmd->add_option("--rho-grid", tr.rho_grid, "grid for --rho cv");
  train_cmd->add_flag("--economy", tr.economy, "rotate by the economy basis");
  train_cmd->add_option("--cv-folds", tr.cv_folds, "cross-validation folds");
  train_cmd->add_option("--seed", tr.seed, "seed for fold assignment");
  train_cmd->add_option("--grid", tr.grid, "tuning grid (lambda for road, shrinkage for nsc)");
  train_cmd->add_option("--model-out", tr.model_out, "rule JSON path")->required();

  PredictFlags pr;
  auto* predict_cmd = app.add_subcommand("predict", "apply a saved rule to a CSV file");
  predict_cmd->add_option("--model", pr.model, "rule JSON")->required();
  predict_cmd->add_option("--data", pr.data, "CSV file (label column optional)")->required();
  predict_cmd->add_option("--out", pr.out, "predictions CSV")->required();

  SweepFlags sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "rho or sparsity sweep");
  sweep_cmd->add_option("--kind", sw.kind, "rho|sparsity")->required();
  add_model_flags(sweep_cmd, sw.model);
  sweep_cmd->add_option("--grid", sw.grid, "rho grid (kind rho)");
  sweep_cmd->add_option("--levels", sw.levels, "sparsity levels (kind sparsity)");
  sweep_cmd->add_option("--reps", sw.reps, "replicates");
  sweep_cmd->add_option("--methods", sw.methods, "comma-separated method names");
  sweep_cmd->add_option("--rho", sw.rho, "rho for rotated methods (kind sparsity)");
  sweep_cmd->add_option("--cv-folds", sw.cv_folds, "cross-validation folds");
  sweep_cmd->add_option("--seed", sw.seed, "master seed");
  sweep_cmd->add_option("--out", sw.out, "sweep CSV")->required();
  sweep_cmd->add_option("--threads", sw.threads, "worker threads (0: all cores)");

  DiagnoseFlags dg;
  auto* diag_cmd = app.add_subcommand("diagnose", "sparsity curves of beta before/after rotation");
  add_model_flags(diag_cmd, dg.model);
  diag_cmd->add_option("--rho", dg.rho, "rotation parameter");
  diag_cmd->add_option("--reps", dg.reps, "replicates for the empirical curve");
  diag_cmd->add_option("--seed", dg.seed, "seed");
  diag_cmd->add_option("--out", dg.out, "diagnostics CSV")->required();
  diag_cmd->add_option("--data", dg.data, "rejected: needs a simulated model");

  std::vector<const char*> argv{"rsda"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (sweep_cmd->parsed() && sweep_cmd->count("--model") == 0) {
    sw.model.model = sw.kind == "sparsity" ? "rand1" : "toy3";
  }

  Manifest manifest;
  manifest.args = args;
  try {
    if (sim_cmd->parsed()) {
      manifest.command = "simulate";
      manifest.flags = model_json(sim.model);
      manifest.flags.update(json{{"reps", sim.reps},
                                 {"methods", sim.methods},
                                 {"rho", sim.rho},
                                 {"rho_grid", sim.rho_grid},
                                 {"cv_folds", sim.cv_folds},
                                 {"seed", sim.seed},
                                 {"out", sim.out},
                                 {"threads", sim.threads},
                                 {"n_test1", sim.n_test1},
                                 {"n_test2", sim.n_test2},
                                 {"redraw_model", sim.redraw_model},
                                 {"export_data", sim.export_data}});
      return simulate(sim, std::move(manifest), out);
    }
    if (train_cmd->parsed()) {
      manifest.command = "train";
      manifest.flags = json{{"data", tr.data},         {"method", tr.method},
                            {"rho", tr.rho},           {"rho_grid", tr.rho_grid},
                            {"economy", tr.economy},   {"cv_folds", tr.cv_folds},
                            {"seed", tr.seed},         {"grid", tr.grid},
                            {"model_out", tr.model_out}};
      return train(tr, std::move(manifest), out);
    }
    if (predict_cmd->parsed()) {
      manifest.command = "predict";
      manifest.flags = json{{"model", pr.model}, {"data", pr.data}, {"out", pr.out}};
      return predict(pr, std::move(manifest), out);
    }
    if (sweep_cmd->parsed()) {
      manifest.command = "sweep";
      manifest.flags = model_json(sw.model);
      manifest.flags.update(json{{"kind", sw.kind},
                                 {"grid", sw.grid},
                                 {"levels", sw.levels},
                                 {"reps", sw.reps},
                                 {"methods", sw.methods},
                                 {"rho", sw.rho},
                                 {"cv_folds", sw.cv_folds},
                                 {"seed", sw.seed},
                                 {"out", sw.out},
                                 {"threads", sw.threads}});
      return sweep(sw, std::move(manifest), out);
    }
    manifest.command = "diagnose";
    manifest.flags = model_json(dg.model);
    manifest.flags.update(json{{"rho", dg.rho}, {"reps", dg.reps}, {"seed", dg.seed}, {"out", dg.out}});
    return diagnose(dg, std::move(manifest), out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rsda::cli
