#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtc/outcome.hpp"
#include "mtc/quadrature.hpp"
#include "mtc/simulation.hpp"

namespace mtc::cli {

/// Bad command line or config file; the message names the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { test, critical_value, simulate_size, simulate_power, simulate_selection };
enum class OutputFormat { csv, json };

/// Direction of the alternative. `less` is handled by negating the statistics.
enum class Alternative { two_sided, greater, less };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  Command command = Command::test;
  std::optional<std::string> input_path;
  std::vector<double> alpha_grid;  // empty: command default
  Alternative alternative = Alternative::two_sided;
  std::optional<Method> method;  // test: gnp-mom when unset; simulations: all methods
  std::optional<double> rho_override;
  std::vector<std::size_t> n_grid;
  std::vector<double> rho_grid;
  std::vector<double> sweep_grid;
  std::optional<PowerScenario> scenario;
  std::optional<OutputFormat> output_format;
  std::optional<std::string> output_path;
  std::uint64_t seed = 20240101;
  bool full_scale = false;
  std::optional<std::size_t> replicates;
  unsigned workers = 0;
  QuadratureSettings quadrature{};

  double alpha() const { return alpha_grid.empty() ? 0.05 : alpha_grid.front(); }
  Sides sides() const { return alternative == Alternative::two_sided ? Sides::two : Sides::one; }
};

/// Parses argv (argv[0] is the program name). A TOML/INI file given by --config
/// supplies defaults for any flag; explicit flags win; unknown keys are errors.
/// MTC_SEED is read when neither --seed nor the config file sets the seed.
/// Throws UsageError; `help_text` receives the help message when --help is given
/// (the function then returns std::nullopt).
std::optional<RunConfig> parse_config(const std::vector<std::string>& argv, std::string* help_text);

/// One real per line, or a single-column CSV with an optional "z" header. Blank
/// lines are skipped. Throws ParseError naming the line, or when fewer than 2 values.
TestStatistics read_statistics(const std::string& path);
TestStatistics read_statistics(std::istream& in);

int cmd_test(const RunConfig& cfg, std::ostream& out);
int cmd_critical_value(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Parse and dispatch, mapping errors to exit statuses: 0 success, 2 usage or input
/// error, 3 numerical failure.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace mtc::cli
