#include "mtc/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "mtc/baselines.hpp"
#include "mtc/errors.hpp"
#include "mtc/gnp.hpp"
#include "mtc/kernels.hpp"

namespace mtc {

void ExchangeableModel::validate() const {
  if (n < 2) throw DomainError("ExchangeableModel: n must be at least 2");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("ExchangeableModel: rho must lie in [0, 1)");
  if (!mu.empty()) {
    if (mu.size() != n) throw DomainError("ExchangeableModel: mu must have n entries");
    for (double v : mu) {
      if (!std::isfinite(v)) throw DomainError("ExchangeableModel: mu must be finite");
    }
  }
}

void sample_exchangeable(const ExchangeableModel& model, NormalStream& stream,
                         std::span<double> out, std::span<double> scratch) {
  const double common = std::sqrt(model.rho) * stream();
  stream.fill(scratch);
  kernels::equicorrelated(out, scratch, model.mu, common, std::sqrt(1.0 - model.rho));
}

TestStatistics sample_exchangeable(const ExchangeableModel& model, NormalStream& stream) {
  model.validate();
  std::vector<double> out(model.n);
  std::vector<double> scratch(model.n);
  sample_exchangeable(model, stream, out, scratch);
  return TestStatistics(std::move(out));
}

std::string_view method_id(Method method) noexcept {
  switch (method) {
    case Method::gnp_mom: return "gnp-mom";
    case Method::bonferroni: return "bonferroni";
    case Method::hmp: return "hmp";
    case Method::hmp_adj: return "hmp-adj";
    case Method::fisher: return "fisher";
  }
  return "unknown";
}

Method parse_method(std::string_view id) {
  for (Method m : all_methods()) {
    if (method_id(m) == id) return m;
  }
  throw DomainError("unknown method '" + std::string(id) +
                    "' (expected gnp-mom, bonferroni, hmp, hmp-adj or fisher)");
}

std::vector<Method> all_methods() {
  return {Method::gnp_mom, Method::bonferroni, Method::hmp, Method::hmp_adj, Method::fisher};
}

std::string_view scenario_id(PowerScenario scenario) noexcept {
  switch (scenario) {
    case PowerScenario::sparse_single: return "sparse-single";
    case PowerScenario::density_sweep: return "density-sweep";
    case PowerScenario::selection: return "selection";
  }
  return "unknown";
}

PowerScenario parse_scenario(std::string_view id) {
  for (PowerScenario s : {PowerScenario::sparse_single, PowerScenario::density_sweep,
                          PowerScenario::selection}) {
    if (scenario_id(s) == id) return s;
  }
  throw DomainError("unknown scenario '" + std::string(id) +
                    "' (expected sparse-single, density-sweep or selection)");
}

namespace {

void check_grid(const std::vector<double>& grid, const char* name, double lo, double hi,
                bool hi_open) {
  if (grid.empty()) throw DomainError(std::string(name) + " must be nonempty");
  for (double v : grid) {
    if (!(v >= lo && (hi_open ? v < hi : v <= hi))) {
      throw DomainError(std::string(name) + " value " + std::to_string(v) + " out of range");
    }
  }
}

void check_alpha_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("alpha grid must be nonempty");
  for (double a : grid) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha values must lie in (0, 1)");
  }
}

}  // namespace

void SizeExperimentConfig::validate() const {
  if (n_grid.empty()) throw DomainError("n grid must be nonempty");
  for (std::size_t n : n_grid) {
    if (n < 2) throw DomainError("n grid values must be at least 2");
  }
  check_grid(rho_grid, "rho grid", 0.0, 1.0, true);
  check_alpha_grid(alpha_grid);
  if (replicates < 100) throw DomainError("replicates must be at least 100");
  if (methods.empty()) throw DomainError("at least one method is required");
  quadrature.validate();
}

PowerExperimentConfig PowerExperimentConfig::defaults(PowerScenario scenario) {
  PowerExperimentConfig cfg;
  cfg.scenario = scenario;
  switch (scenario) {
    case PowerScenario::sparse_single:
      for (int i = 0; i <= 60; ++i) cfg.sweep_grid.push_back(i / 20.0);
      break;
    case PowerScenario::density_sweep:
      for (int i = 1; i <= 100; ++i) cfg.sweep_grid.push_back(i / 100.0);
      break;
    case PowerScenario::selection:
      cfg.rho_grid = {0.5};
      cfg.alpha_grid = {0.10};
      cfg.replicates = 1;
      cfg.methods = {Method::gnp_mom};
      break;
  }
  return cfg;
}

void PowerExperimentConfig::validate() const {
  if (n < 2) throw DomainError("n must be at least 2");
  check_grid(rho_grid, "rho grid", 0.0, 1.0, true);
  check_alpha_grid(alpha_grid);
  if (methods.empty()) throw DomainError("at least one method is required");
  quadrature.validate();
  if (scenario == PowerScenario::selection) {
    if (n % 2 != 0) throw DomainError("selection scenario requires an even n");
    if (replicates < 1) throw DomainError("replicates must be at least 1");
    if (!(selection_fraction > 0.0 && selection_fraction <= 1.0)) {
      throw DomainError("selection fraction must lie in (0, 1]");
    }
    return;
  }
  if (replicates < 100) throw DomainError("replicates must be at least 100");
  if (sweep_grid.empty()) throw DomainError("sweep grid must be nonempty");
  for (std::size_t i = 1; i < sweep_grid.size(); ++i) {
    if (!(sweep_grid[i] > sweep_grid[i - 1])) {
      throw DomainError("sweep grid must be strictly increasing");
    }
  }
  if (scenario == PowerScenario::density_sweep) {
    check_grid(sweep_grid, "density sweep grid", 0.0, 1.0, false);
  } else {
    for (double v : sweep_grid) {
      if (!std::isfinite(v)) throw DomainError("sweep grid values must be finite");
    }
  }
}

std::optional<ExperimentRow> ExperimentResult::find(Method method, std::size_t n, double rho,
                                                    double alpha, double sweep_value) const {
  for (const ExperimentRow& row : rows) {
    if (row.method == method && row.n == n && row.rho == rho && row.alpha == alpha &&
        row.sweep_value == sweep_value) {
      return row;
    }
  }
  return std::nullopt;
}

std::vector<double> density_sweep_means(std::size_t n, double s) {
  std::vector<double> mu(n, 0.0);
  if (s <= 0.0) return mu;
  const auto count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(s * static_cast<double>(n))), 1, n);
  const double shift = std::sqrt(std::log(static_cast<double>(n))) / std::pow(s, 0.1);
  std::fill_n(mu.begin(), count, shift);
  return mu;
}

namespace {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(worker, task) for every task in [0, task_count). Tasks are handed out in
// chunks; the exception from the lowest failing task is rethrown.
void run_parallel(std::size_t task_count, unsigned workers,
                  const std::function<void(unsigned, std::size_t)>& body) {
  constexpr std::size_t kChunk = 16;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_task = std::numeric_limits<std::size_t>::max();
  std::atomic<bool> failed{false};

  const auto work = [&](unsigned worker) {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= task_count) return;
      const std::size_t end = std::min(task_count, begin + kChunk);
      for (std::size_t task = begin; task < end; ++task) {
        try {
          body(worker, task);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (task < error_task) {
            error_task = task;
            error = std::current_exception();
          }
          failed = true;
          return;
        }
      }
    }
  };

  if (workers <= 1 || task_count <= kChunk) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

// Per-thread buffers and the method evaluation for one draw.
class ReplicateEvaluator {
 public:
  ReplicateEvaluator(std::size_t n, const std::vector<Method>& methods,
                     const std::vector<double>& alphas, Sides sides,
                     const QuadratureSettings& quadrature)
      : methods_(methods), alphas_(alphas), sides_(sides), quadrature_(quadrature),
        x_(n), scratch_(n), pvalues_(n) {}

  std::span<double> x() { return x_; }
  std::span<double> scratch() { return scratch_; }

  // Adds 1 to counts[m * alphas + a] for each (method, alpha) that rejects on x().
  void evaluate(std::span<std::uint64_t> counts) {
    const std::size_t n = x_.size();
    bool have_p = false;
    for (std::size_t mi = 0; mi < methods_.size(); ++mi) {
      const Method method = methods_[mi];
      double p = 1.0;
      double bonferroni_min = 1.0;
      if (method != Method::gnp_mom && !have_p) {
        z_to_p(x_, sides_, pvalues_);
        have_p = true;
      }
      switch (method) {
        case Method::gnp_mom: p = gnp_mom_p_value(x_, sides_, quadrature_).p_value; break;
        case Method::bonferroni:
          bonferroni_min = *std::min_element(pvalues_.begin(), pvalues_.end());
          break;
        case Method::hmp: p = harmonic_mean_p(pvalues_); break;
        case Method::hmp_adj: p = hmp_adjusted_p(pvalues_); break;
        case Method::fisher: p = fisher_p(pvalues_); break;
      }
      for (std::size_t ai = 0; ai < alphas_.size(); ++ai) {
        const double alpha = alphas_[ai];
        const bool reject = method == Method::bonferroni
                                ? bonferroni_min <= alpha / static_cast<double>(n)
                                : p <= alpha;
        if (reject) ++counts[mi * alphas_.size() + ai];
      }
    }
  }

 private:
  const std::vector<Method>& methods_;
  const std::vector<double>& alphas_;
  Sides sides_;
  QuadratureSettings quadrature_;
  std::vector<double> x_;
  std::vector<double> scratch_;
  std::vector<double> pvalues_;
};

ExperimentRow make_row(Method method, std::size_t n, double rho, double alpha, double sweep,
                       std::uint64_t count, std::size_t replicates, std::uint64_t seed) {
  const double m = static_cast<double>(replicates);
  const double rate = static_cast<double>(count) / m;
  return {method, n,    rho,       alpha, sweep, rate, std::sqrt(rate * (1.0 - rate) / m),
          replicates, seed};
}

std::vector<std::uint64_t> merge_counts(const std::vector<std::vector<std::uint64_t>>& per_worker) {
  std::vector<std::uint64_t> total(per_worker.front().size(), 0);
  for (const auto& counts : per_worker) {
    for (std::size_t i = 0; i < counts.size(); ++i) total[i] += counts[i];
  }
  return total;
}

[[noreturn]] void rethrow_as_replicate_error(std::uint64_t key) {
  try {
    throw;
  } catch (const ReplicateError&) {
    throw;
  } catch (const std::exception& e) {
    throw ReplicateError(std::string("replicate failed: ") + e.what(), key);
  }
}

// Shared driver for the sparse and density sweeps: one stream per (rho, replicate),
// reused across every sweep value.
ExperimentResult run_sweep(const PowerExperimentConfig& cfg,
                           const std::function<std::vector<double>(double)>& means_for) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t rhos = cfg.rho_grid.size();
  const std::size_t sweeps = cfg.sweep_grid.size();
  const std::size_t per_sweep = cfg.methods.size() * cfg.alpha_grid.size();
  const std::size_t per_rho = sweeps * per_sweep;

  std::vector<std::vector<double>> means;
  means.reserve(sweeps);
  for (double v : cfg.sweep_grid) means.push_back(means_for(v));

  const unsigned workers = resolve_workers(cfg.workers);
  std::vector<std::vector<std::uint64_t>> counts(workers,
                                                 std::vector<std::uint64_t>(rhos * per_rho, 0));
  std::vector<std::unique_ptr<ReplicateEvaluator>> evaluators(workers);
  std::vector<std::vector<double>> bases(workers, std::vector<double>(n));

  run_parallel(rhos * cfg.replicates, workers, [&](unsigned w, std::size_t task) {
    const std::size_t ri = task / cfg.replicates;
    const std::size_t rep = task % cfg.replicates;
    const std::uint64_t key = derive_stream_key(cfg.master_seed, ri, rep);
    if (!evaluators[w]) {
      evaluators[w] = std::make_unique<ReplicateEvaluator>(n, cfg.methods, cfg.alpha_grid,
                                                           cfg.sides, cfg.quadrature);
    }
    ReplicateEvaluator& eval = *evaluators[w];
    try {
      NormalStream stream(key);
      const ExchangeableModel null_model{n, cfg.rho_grid[ri], {}};
      sample_exchangeable(null_model, stream, bases[w], eval.scratch());
      for (std::size_t si = 0; si < sweeps; ++si) {
        auto x = eval.x();
        for (std::size_t i = 0; i < n; ++i) x[i] = bases[w][i] + means[si][i];
        eval.evaluate(std::span(counts[w]).subspan(ri * per_rho + si * per_sweep, per_sweep));
      }
    } catch (...) {
      rethrow_as_replicate_error(key);
    }
  });

  const auto total = merge_counts(counts);
  ExperimentResult result;
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    for (std::size_t ri = 0; ri < rhos; ++ri) {
      for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
        for (std::size_t si = 0; si < sweeps; ++si) {
          const std::uint64_t c =
              total[ri * per_rho + si * per_sweep + mi * cfg.alpha_grid.size() + ai];
          result.rows.push_back(make_row(cfg.methods[mi], n, cfg.rho_grid[ri],
                                         cfg.alpha_grid[ai], cfg.sweep_grid[si], c,
                                         cfg.replicates, cfg.master_seed));
        }
      }
    }
  }
  return result;
}

}  // namespace

ExperimentResult run_size_experiment(const SizeExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t rhos = cfg.rho_grid.size();
  const std::size_t cells = cfg.n_grid.size() * rhos;
  const std::size_t per_cell = cfg.methods.size() * cfg.alpha_grid.size();

  const unsigned workers = resolve_workers(cfg.workers);
  std::vector<std::vector<std::uint64_t>> counts(workers,
                                                 std::vector<std::uint64_t>(cells * per_cell, 0));
  // One evaluator per (worker, n) so buffers match the cell size.
  std::vector<std::vector<std::unique_ptr<ReplicateEvaluator>>> evaluators(workers);
  for (auto& per_worker : evaluators) per_worker.resize(cfg.n_grid.size());

  run_parallel(cells * cfg.replicates, workers, [&](unsigned w, std::size_t task) {
    const std::size_t cell = task / cfg.replicates;
    const std::size_t rep = task % cfg.replicates;
    const std::size_t ni = cell / rhos;
    const std::size_t ri = cell % rhos;
    const std::uint64_t key = derive_stream_key(cfg.master_seed, cell, rep);
    auto& slot = evaluators[w][ni];
    if (!slot) {
      slot = std::make_unique<ReplicateEvaluator>(cfg.n_grid[ni], cfg.methods, cfg.alpha_grid,
                                                  cfg.sides, cfg.quadrature);
    }
    try {
      NormalStream stream(key);
      const ExchangeableModel model{cfg.n_grid[ni], cfg.rho_grid[ri], {}};
      sample_exchangeable(model, stream, slot->x(), slot->scratch());
      slot->evaluate(std::span(counts[w]).subspan(cell * per_cell, per_cell));
    } catch (...) {
      rethrow_as_replicate_error(key);
    }
  });

  const auto total = merge_counts(counts);
  ExperimentResult result;
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
      for (std::size_t ri = 0; ri < rhos; ++ri) {
        for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
          const std::size_t cell = ni * rhos + ri;
          const std::uint64_t c = total[cell * per_cell + mi * cfg.alpha_grid.size() + ai];
          result.rows.push_back(make_row(cfg.methods[mi], cfg.n_grid[ni], cfg.rho_grid[ri],
                                         cfg.alpha_grid[ai], 0.0, c, cfg.replicates,
                                         cfg.master_seed));
        }
      }
    }
  }
  return result;
}

ExperimentResult run_power_sparse(const PowerExperimentConfig& cfg) {
  if (cfg.scenario != PowerScenario::sparse_single) {
    throw DomainError("run_power_sparse: scenario must be sparse-single");
  }
  return run_sweep(cfg, [n = cfg.n](double mu1) {
    std::vector<double> mu(n, 0.0);
    mu[0] = mu1;
    return mu;
  });
}

ExperimentResult run_power_density_sweep(const PowerExperimentConfig& cfg) {
  if (cfg.scenario != PowerScenario::density_sweep) {
    throw DomainError("run_power_density_sweep: scenario must be density-sweep");
  }
  return run_sweep(cfg, [n = cfg.n](double s) { return density_sweep_means(n, s); });
}

std::vector<SelectionReplicate> run_selection_experiment(const PowerExperimentConfig& cfg) {
  if (cfg.scenario != PowerScenario::selection) {
    throw DomainError("run_selection_experiment: scenario must be selection");
  }
  cfg.validate();
  const std::size_t n = cfg.n;
  const auto non_null = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.selection_fraction * static_cast<double>(n))), 0,
      n);
  ExchangeableModel model{n, cfg.rho_grid.front(), std::vector<double>(n, 0.0)};
  std::fill_n(model.mu.begin(), non_null, cfg.selection_mean);
  const double alpha = cfg.alpha_grid.front();

  std::vector<SelectionReplicate> out(cfg.replicates);
  run_parallel(cfg.replicates, resolve_workers(cfg.workers), [&](unsigned, std::size_t rep) {
    const std::uint64_t key = derive_stream_key(cfg.master_seed, 0, rep);
    try {
      NormalStream stream(key);
      const TestStatistics x = sample_exchangeable(model, stream);
      SelectionReplicate& r = out[rep];
      r.stream_key = key;
      r.n = n;
      r.non_null_count = non_null;
      r.rho = model.rho;
      r.alpha = alpha;
      r.abs_values.resize(n);
      for (std::size_t i = 0; i < n; ++i) r.abs_values[i] = std::abs(x[i]);
      r.outcome = run_gnp_mom_test(x, alpha, cfg.sides, cfg.quadrature);
      r.flagged_non_null = static_cast<std::size_t>(
          std::count_if(r.outcome.significant_indices.begin(),
                        r.outcome.significant_indices.end(),
                        [non_null](std::size_t i) { return i < non_null; }));
      r.flagged_null = r.outcome.significant_indices.size() - r.flagged_non_null;
    } catch (...) {
      rethrow_as_replicate_error(key);
    }
  });
  return out;
}

MonteCarloEstimate monte_carlo_p_oracle(double m_stat, std::size_t n, double rho, Sides sides,
                                        std::size_t reps, std::uint64_t seed, unsigned workers) {
  if (reps < 10'000) throw DomainError("monte_carlo_p_oracle: reps must be at least 10^4");
  const ExchangeableModel model{n, rho, {}};
  model.validate();
  const unsigned pool = resolve_workers(workers);
  std::vector<std::uint64_t> hits(pool, 0);
  std::vector<std::vector<double>> x(pool, std::vector<double>(n));
  std::vector<std::vector<double>> scratch(pool, std::vector<double>(n));

  run_parallel(reps, pool, [&](unsigned w, std::size_t rep) {
    NormalStream stream(derive_stream_key(seed, 0, rep));
    sample_exchangeable(model, stream, x[w], scratch[w]);
    const double m = sides == Sides::two ? kernels::max_abs(x[w]).value
                                         : kernels::max_value(x[w]).value;
    if (m >= m_stat) ++hits[w];
  });

  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double r = static_cast<double>(reps);
  const double p_hat = static_cast<double>(total) / r;
  return {p_hat, std::sqrt(p_hat * (1.0 - p_hat) / r), reps};
}

}  // namespace mtc
