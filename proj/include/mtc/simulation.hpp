#pragma once

// Seeded Monte Carlo experiments for the max-statistic test and its comparators.
//
// Draws follow X_i = sqrt(rho) Z_0 + sqrt(1 - rho) Z_i + mu_i. Replicate r of cell k
// (one (n, rho) combination) uses the stream derive_stream_key(seed, k, r); all
// methods, alpha levels and sweep values are evaluated on that same draw.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mtc/outcome.hpp"
#include "mtc/quadrature.hpp"
#include "mtc/rng.hpp"

namespace mtc {

struct ExchangeableModel {
  std::size_t n = 2;
  double rho = 0.0;
  std::vector<double> mu;  // empty means all zeros

  /// Throws DomainError unless n >= 2, 0 <= rho < 1, and mu is empty or has n finite entries.
  void validate() const;
};

/// Fills `out` (size n) with one draw; consumes n + 1 normals from the stream.
/// `scratch` must also have size n.
void sample_exchangeable(const ExchangeableModel& model, NormalStream& stream,
                         std::span<double> out, std::span<double> scratch);

TestStatistics sample_exchangeable(const ExchangeableModel& model, NormalStream& stream);

enum class Method { gnp_mom, bonferroni, hmp, hmp_adj, fisher };

std::string_view method_id(Method method) noexcept;
/// Accepts the ids printed by method_id. Throws DomainError otherwise.
Method parse_method(std::string_view id);
std::vector<Method> all_methods();

struct SizeExperimentConfig {
  std::vector<std::size_t> n_grid{20, 100, 1000};
  std::vector<double> rho_grid{0.0, 0.2, 0.5, 0.9};
  std::vector<double> alpha_grid{0.01, 0.05, 0.10};
  std::size_t replicates = 2000;
  std::vector<Method> methods = all_methods();
  std::uint64_t master_seed = 20240101;
  unsigned workers = 0;  // 0: one per hardware thread
  Sides sides = Sides::two;
  QuadratureSettings quadrature{};

  void validate() const;
};

enum class PowerScenario { sparse_single, density_sweep, selection };

std::string_view scenario_id(PowerScenario scenario) noexcept;
PowerScenario parse_scenario(std::string_view id);

struct PowerExperimentConfig {
  PowerScenario scenario = PowerScenario::sparse_single;
  std::size_t n = 1000;
  std::vector<double> rho_grid{0.0, 0.2, 0.5, 0.9};
  std::vector<double> alpha_grid{0.01, 0.05, 0.10};
  std::vector<double> sweep_grid;  // mu_1 values, or non-null proportions s
  std::size_t replicates = 2000;
  std::vector<Method> methods = all_methods();
  std::uint64_t master_seed = 20240101;
  unsigned workers = 0;
  Sides sides = Sides::two;
  QuadratureSettings quadrature{};
  double selection_mean = 3.0;      // selection scenario: shift of the non-null half
  double selection_fraction = 0.5;  // selection scenario: share of non-null indices

  /// Desk-scale defaults for a scenario (sweep grids filled in).
  static PowerExperimentConfig defaults(PowerScenario scenario);
  void validate() const;
};

struct ExperimentRow {
  Method method;
  std::size_t n;
  double rho;
  double alpha;
  double sweep_value;
  double rejection_rate;
  double monte_carlo_se;  // sqrt(r (1 - r) / m)
  std::size_t replicates;
  std::uint64_t seed;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;

  /// Row for the given key, if present.
  std::optional<ExperimentRow> find(Method method, std::size_t n, double rho, double alpha,
                                    double sweep_value = 0.0) const;
};

/// Rejection frequency of every method under the global null, for each grid cell.
ExperimentResult run_size_experiment(const SizeExperimentConfig& cfg);

/// mu = (mu_1, 0, ..., 0) for mu_1 in the sweep grid.
ExperimentResult run_power_sparse(const PowerExperimentConfig& cfg);

/// For proportion s, the first max(1, round(s n)) coordinates (none when s = 0)
/// carry mean sqrt(log n) / s^0.1.
ExperimentResult run_power_density_sweep(const PowerExperimentConfig& cfg);

/// Means used by the density sweep at proportion s.
std::vector<double> density_sweep_means(std::size_t n, double s);

struct SelectionReplicate {
  std::uint64_t stream_key;
  std::size_t n;
  std::size_t non_null_count;  // indices [0, non_null_count) carry the shift
  double rho;
  double alpha;
  std::vector<double> abs_values;
  GlobalTestOutcome outcome;
  std::size_t flagged_non_null;
  std::size_t flagged_null;
};

/// One single-draw replicate per cfg.replicates, using rho_grid[0] and alpha_grid[0].
std::vector<SelectionReplicate> run_selection_experiment(const PowerExperimentConfig& cfg);

struct MonteCarloEstimate {
  double p_hat;
  double se;
  std::size_t replicates;
};

/// Empirical P(max |X_i| >= m) (two-sided) or P(max X_i >= m) under the null model.
/// Throws DomainError for reps < 10^4.
MonteCarloEstimate monte_carlo_p_oracle(double m_stat, std::size_t n, double rho, Sides sides,
                                        std::size_t reps, std::uint64_t seed,
                                        unsigned workers = 0);

}  // namespace mtc
