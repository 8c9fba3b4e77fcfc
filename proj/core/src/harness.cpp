#include "rsda/harness.hpp"

#include "rsda/errors.hpp"
#include "rsda/random.hpp"
#include "rsda/rho_selection.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace rsda {

GaussianSampler::GaussianSampler(const PopulationModel& model)
    : mu1_(model.mu1()), mu2_(model.mu2()) {
  const EigenSystem eig = sym_eig_desc(model.sigma());
  const Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  root_ = eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
  root_ = 0.5 * (root_ + root_.transpose()).eval();
}

LabeledDataset GaussianSampler::draw(Eigen::Index n1, Eigen::Index n2, std::uint64_t seed) const {
  if (n1 < 1 || n2 < 1) {
    throw DomainError("sample: both class sizes must be at least 1");
  }
  Rng rng = make_rng(seed);
  Matrix x = standard_normal_matrix(n1 + n2, mu1_.size(), rng) * root_;
  x.topRows(n1).rowwise() += mu1_.transpose();
  x.bottomRows(n2).rowwise() += mu2_.transpose();
  std::vector<Label> labels(static_cast<std::size_t>(n1), Label::one);
  labels.resize(static_cast<std::size_t>(n1 + n2), Label::two);
  return LabeledDataset(std::move(x), std::move(labels));
}

LabeledDataset sample(const PopulationModel& model, Eigen::Index n1, Eigen::Index n2,
                      std::uint64_t seed) {
  return GaussianSampler(model).draw(n1, n2, seed);
}

MethodSpec parse_method(std::string_view name) {
  MethodSpec spec;
  spec.name = std::string(name);
  if (name == "oracle") {
    spec.base = Method::oracle;
    return spec;
  }
  std::string_view rest = name;
  if (rest.starts_with("o-rs-")) {
    spec.rotation = RotationMode::oracle;
    rest.remove_prefix(5);
  } else if (rest.starts_with("rs-")) {
    spec.rotation = RotationMode::full;
    rest.remove_prefix(3);
    if (rest.ends_with("-econ")) {
      spec.rotation = RotationMode::economy;
      rest.remove_suffix(5);
    }
  }
  try {
    spec.base = method_from_string(rest);
  } catch (const ValidationError&) {
    throw ValidationError("unknown method '" + spec.name + "'");
  }
  if (spec.base == Method::oracle) {
    throw ValidationError("unknown method '" + spec.name + "'");
  }
  return spec;
}

std::vector<MethodSpec> parse_methods(std::string_view comma_list) {
  std::vector<MethodSpec> out;
  std::size_t start = 0;
  while (start <= comma_list.size()) {
    const std::size_t end = std::min(comma_list.find(',', start), comma_list.size());
    const std::string_view item = comma_list.substr(start, end - start);
    if (item.empty()) {
      throw ValidationError("empty entry in method list");
    }
    out.push_back(parse_method(item));
    start = end + 1;
  }
  return out;
}

void ExperimentSpec::validate() const {
  if (replicates < 1) {
    throw ValidationError("ExperimentSpec: replicates must be at least 1");
  }
  if (n1 < 1 || n2 < 1) {
    throw ValidationError("ExperimentSpec: n1 and n2 must be at least 1");
  }
  if (n_test1 < 0 || n_test2 < 0) {
    throw ValidationError("ExperimentSpec: test sizes must be non-negative");
  }
  if (methods.empty()) {
    throw ValidationError("ExperimentSpec: no methods");
  }
  if (cv_folds < 2) {
    throw ValidationError("ExperimentSpec: cv_folds must be at least 2");
  }
  if (rho.fixed && !(*rho.fixed > 0.0 && std::isfinite(*rho.fixed))) {
    throw ValidationError("ExperimentSpec: rho must be positive");
  }
  for (const double r : rho.grid) {
    if (!(r > 0.0 && std::isfinite(r))) {
      throw ValidationError("ExperimentSpec: rho grid values must be positive");
    }
  }
  std::vector<std::string> seen;
  for (const auto& m : methods) {
    if (std::find(seen.begin(), seen.end(), m.name) != seen.end()) {
      throw ValidationError("ExperimentSpec: duplicate method '" + m.name + "'");
    }
    seen.push_back(m.name);
  }
}

const MethodResult& ExperimentResult::method(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.name == name) {
      return m;
    }
  }
  throw ValidationError("no result for method '" + std::string(name) + "'");
}

void summarize(MethodResult& result) {
  double sum = 0.0;
  int count = 0;
  for (const auto& e : result.errors) {
    if (e) {
      sum += *e;
      ++count;
    }
  }
  result.failure_count = static_cast<int>(result.errors.size()) - count;
  if (count == 0) {
    result.mean = std::numeric_limits<double>::quiet_NaN();
    result.std = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  result.mean = sum / count;
  double squares = 0.0;
  for (const auto& e : result.errors) {
    if (e) {
      squares += (*e - result.mean) * (*e - result.mean);
    }
  }
  result.std = count > 1 ? std::sqrt(squares / (count - 1)) : 0.0;
}

namespace {

struct Outcome {
  std::optional<double> error;
  std::optional<double> rho;
  std::string failure;
};

struct ReplicateContext {
  const ExperimentSpec& spec;
  const PopulationModel& model;
  const LabeledDataset& train;
  const LabeledDataset& test;
  std::uint64_t method_seed;
};

Outcome evaluate(const MethodSpec& method, const ReplicateContext& ctx) {
  Outcome out;
  try {
    if (method.base == Method::oracle) {
      const OracleQuantities q = oracle_quantities(ctx.model);
      out.error = misclassification_rate(AnyRule(LinearRule(q.beta, ctx.model.midpoint())),
                                         ctx.test);
      return out;
    }
    SolverConfig base;
    base.method = method.base;
    base.folds = ctx.spec.cv_folds;
    base.seed = ctx.method_seed;
    if (!method.rotated()) {
      out.error = misclassification_rate(AnyRule(train_linear(ctx.train, base)), ctx.test);
      return out;
    }
    double rho = 0.0;
    if (method.rho) {
      rho = *method.rho;
    } else if (ctx.spec.rho.fixed) {
      rho = *ctx.spec.rho.fixed;
    } else {
      const auto grid = ctx.spec.rho.grid.empty() ? default_rho_grid() : ctx.spec.rho.grid;
      rho = select_rho(ctx.train, grid, base, ctx.spec.cv_folds, ctx.method_seed).rho_star;
      out.rho = rho;
    }
    RSRule rule = [&] {
      switch (method.rotation) {
        case RotationMode::oracle:
          return rotate_and_solve(ctx.train, oracle_rotation(ctx.model, rho), base);
        case RotationMode::economy:
          return rotate_and_solve(ctx.train, rho, base, true);
        default:
          return rotate_and_solve(ctx.train, rho, base, false);
      }
    }();
    out.error = misclassification_rate(AnyRule(std::move(rule)), ctx.test);
  } catch (const Error& e) {
    out.error.reset();
    out.failure = e.what();
  }
  return out;
}

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception is rethrown after all workers finish.
template <class Body>
void parallel_for(int count, int threads, Body body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();
  const bool redraw = spec.redraw_model && spec.model.depends_on_seed();

  std::optional<PopulationModel> shared;
  std::optional<GaussianSampler> shared_sampler;
  if (!redraw) {
    shared.emplace(spec.model.build(derive_seed(spec.master_seed, 0, Stream::model)));
    shared_sampler.emplace(*shared);
  }

  const auto reps = static_cast<std::size_t>(spec.replicates);
  std::vector<std::vector<Outcome>> outcomes(reps);
  parallel_for(spec.replicates, spec.threads, [&](int i) {
    const auto index = static_cast<std::uint64_t>(i);
    std::optional<PopulationModel> own;
    std::optional<GaussianSampler> own_sampler;
    if (redraw) {
      own.emplace(spec.model.build(derive_seed(spec.master_seed, index, Stream::model)));
      own_sampler.emplace(*own);
    }
    const PopulationModel& model = redraw ? *own : *shared;
    const GaussianSampler& sampler = redraw ? *own_sampler : *shared_sampler;
    const LabeledDataset train =
        sampler.draw(spec.n1, spec.n2, derive_seed(spec.master_seed, index, Stream::train));
    const LabeledDataset test =
        sampler.draw(spec.test1(), spec.test2(), derive_seed(spec.master_seed, index, Stream::test));
    const ReplicateContext ctx{spec, model, train, test,
                               derive_seed(spec.master_seed, index, Stream::method)};
    auto& row = outcomes[static_cast<std::size_t>(i)];
    row.reserve(spec.methods.size());
    for (const auto& method : spec.methods) {
      row.push_back(evaluate(method, ctx));
    }
  });

  ExperimentResult result;
  result.spec = spec;
  if (shared) {
    result.bayes_error = oracle_quantities(*shared).bayes_error;
  }
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    MethodResult mr;
    mr.name = spec.methods[m].name;
    const bool tracks_rho = spec.methods[m].rotated() && !spec.methods[m].rho && !spec.rho.fixed;
    for (std::size_t i = 0; i < reps; ++i) {
      const Outcome& o = outcomes[i][m];
      mr.errors.push_back(o.error);
      if (tracks_rho) {
        mr.selected_rho.push_back(o.rho);
      }
      if (!o.error) {
        mr.failures.push_back("replicate " + std::to_string(i) + ": " + o.failure);
      }
    }
    summarize(mr);
    result.methods.push_back(std::move(mr));
  }
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

SparsityCurves sparsity_diagnostic(const PopulationModel& model, double rho, Eigen::Index n1,
                                   Eigen::Index n2, int replicates, std::uint64_t seed) {
  if (replicates < 1) {
    throw DomainError("sparsity_diagnostic: replicates must be at least 1");
  }
  const OracleQuantities q = oracle_quantities(model);
  SparsityCurves curves;
  curves.raw = sparsity_profile(q.beta).cumulative_energy;
  curves.oracle = rotated_beta_profile(model, oracle_rotation(model, rho)).cumulative_energy;
  curves.empirical = Vector::Zero(model.dim());
  const GaussianSampler sampler(model);
  for (int j = 0; j < replicates; ++j) {
    const LabeledDataset data =
        sampler.draw(n1, n2, derive_seed(seed, static_cast<std::uint64_t>(j), Stream::diagnostic));
    const RotationBasis basis = rotation_full(estimate_moments(data), rho);
    curves.empirical += rotated_beta_profile(model, basis).cumulative_energy;
  }
  curves.empirical /= static_cast<double>(replicates);
  return curves;
}

std::vector<SweepRow> rho_sweep(const ExperimentSpec& spec, const std::vector<double>& rho_grid) {
  if (rho_grid.empty()) {
    throw ValidationError("rho_sweep: grid is empty");
  }
  for (const double rho : rho_grid) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw ValidationError("rho_sweep: rho values must be positive");
    }
  }
  ExperimentSpec expanded = spec;
  expanded.methods.clear();
  // (spec method index, grid index) -> expanded method index
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> where;
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    const MethodSpec& method = spec.methods[m];
    if (!method.rotated()) {
      for (std::size_t g = 0; g < rho_grid.size(); ++g) {
        where[{m, g}] = expanded.methods.size();
      }
      expanded.methods.push_back(method);
      continue;
    }
    for (std::size_t g = 0; g < rho_grid.size(); ++g) {
      MethodSpec cell = method;
      std::ostringstream name;
      name.precision(17);
      name << method.name << "@" << rho_grid[g];
      cell.name = name.str();
      cell.rho = rho_grid[g];
      where[{m, g}] = expanded.methods.size();
      expanded.methods.push_back(std::move(cell));
    }
  }
  const ExperimentResult result = run_experiment(expanded);
  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < rho_grid.size(); ++g) {
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      const MethodResult& r = result.methods[where.at({m, g})];
      rows.push_back({rho_grid[g], spec.methods[m].name, r.mean, r.std, r.failure_count});
    }
  }
  return rows;
}

std::vector<SweepRow> sparsity_sweep(const ExperimentSpec& spec,
                                     const std::vector<double>& levels) {
  if (spec.model.family != ModelFamily::random) {
    throw ValidationError("sparsity_sweep: needs a random-family model (rand1 or rand2)");
  }
  if (levels.empty()) {
    throw ValidationError("sparsity_sweep: no sparsity levels");
  }
  std::vector<SweepRow> rows;
  for (const double level : levels) {
    if (!(level > 0.0 && level <= 1.0)) {
      throw ValidationError("sparsity_sweep: levels must lie in (0, 1]");
    }
    ExperimentSpec cell = spec;
    cell.model.sparsity = level;
    cell.redraw_model = true;
    const ExperimentResult result = run_experiment(cell);
    for (const auto& m : result.methods) {
      rows.push_back({level, m.name, m.mean, m.std, m.failure_count});
    }
  }
  return rows;
}

}  // namespace rsda
