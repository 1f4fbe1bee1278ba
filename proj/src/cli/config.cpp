#include <CLI11.hpp>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "mtc/cli.hpp"
#include "mtc/errors.hpp"

namespace mtc::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

void require_probability(const std::vector<double>& values, const char* flag) {
  for (double v : values) {
    if (!(v > 0.0 && v < 1.0)) {
      throw UsageError(std::string(flag) + ": value " + std::to_string(v) +
                       " must lie strictly between 0 and 1");
    }
  }
}

void require_correlation(double v, const char* flag) {
  if (!(v >= 0.0 && v < 1.0)) {
    throw UsageError(std::string(flag) + ": value " + std::to_string(v) + " must lie in [0, 1)");
  }
}

}  // namespace

std::optional<RunConfig> parse_config(const std::vector<std::string>& argv,
                                      std::string* help_text) {
  CLI::App app{"Max-statistic multiple testing for exchangeable normal statistics", "mtc"};
  app.set_config("--config", "", "TOML/INI file supplying defaults for any flag below");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  std::string input;
  std::vector<double> alphas;
  std::string sides = "two";
  std::string method;
  std::optional<double> rho_override;
  std::vector<std::size_t> ns;
  std::vector<double> rhos;
  std::vector<double> sweep;
  std::string scenario;
  std::uint64_t seed = 20240101;
  bool full = false;
  std::string output;
  std::string output_format;
  int quad_nodes = QuadratureSettings{}.node_count;
  double quad_tol = QuadratureSettings{}.abs_tolerance;
  std::size_t replicates = 0;
  unsigned workers = 0;

  app.add_option("--input", input, "File of z-scores: one per line, optional header 'z'");
  app.add_option("--alpha", alphas, "Significance level(s), comma-separated for simulations "
              "[default: 0.05; simulations 0.01,0.05,0.10]")
      ->delimiter(',');
  app.add_option("--sides", sides, "Alternative: two, one (upper tail) or less (lower tail)")
      ->capture_default_str()
      ->check(CLI::IsMember({"one", "two", "less"}));
  app.add_option("--method", method, "gnp-mom (default), bonferroni, hmp, hmp-adj or fisher");
  app.add_option("--rho-override", rho_override, "Use this correlation instead of estimating it");
  app.add_option("--n", ns, "Number of statistics; comma-separated grid for simulate-size "
              "[default: 20,100,1000 for simulate-size; 1000 for power and selection]")
      ->delimiter(',');
  app.add_option("--rho", rhos, "Correlation; comma-separated grid for simulations "
              "[default: 0 for critical-value; 0,0.2,0.5,0.9 for size/power, 0.5 for selection]")
      ->delimiter(',');
  app.add_option("--sweep", sweep, "Sweep grid for simulate-power: mu_1 values or non-null proportions "
              "[default: 0,0.05,...,3 or 0.01,0.02,...,1]")
      ->delimiter(',');
  app.add_option("--scenario", scenario, "simulate-power scenario: sparse-single or density-sweep [default: sparse-single]");
  app.add_option("--seed", seed, "Master seed (falls back to MTC_SEED)")
      ->capture_default_str()
      ->envname("MTC_SEED");
  app.add_flag("--full", full, "Use 10,000 replicates instead of the 2,000 desk-scale default");
  app.add_option("--output", output, "Write primary output here instead of stdout");
  app.add_option("--output-format", output_format, "csv or json [default: json for test, csv for simulations, text for critical-value]")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--quad-nodes", quad_nodes, "Gauss-Hermite nodes (2..512)")->capture_default_str();
  app.add_option("--quad-tol", quad_tol, "Absolute quadrature tolerance")->capture_default_str();
  app.add_option("--replicates", replicates, "Monte Carlo replicates (overrides --full)");
  app.add_option("--workers", workers, "Worker threads for simulations (0: all cores)")
      ->capture_default_str();

  const std::pair<const char*, Command> commands[] = {
      {"test", Command::test},
      {"critical-value", Command::critical_value},
      {"simulate-size", Command::simulate_size},
      {"simulate-power", Command::simulate_power},
      {"simulate-selection", Command::simulate_selection},
  };
  const char* descriptions[] = {
      "Global test of a file of z-scores, with per-test selection",
      "Critical value for given --n, --rho, --alpha, --sides",
      "Empirical size of every method over an (n, rho, alpha) grid",
      "Power curves for --scenario sparse-single or density-sweep",
      "Single-draw selection replicates (half the statistics shifted by 3)",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, descriptions[i])->fallthrough());
  }

  std::vector<const char*> raw;
  raw.reserve(argv.size());
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp&) {
    if (help_text) *help_text = app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    if (help_text) *help_text = app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) cfg.command = commands[i].second;
  }
  if (!input.empty()) cfg.input_path = input;
  require_probability(alphas, "--alpha");
  cfg.alpha_grid = alphas;
  cfg.alternative = sides == "two" ? Alternative::two_sided
                    : sides == "one" ? Alternative::greater
                                     : Alternative::less;
  try {
    if (!method.empty()) cfg.method = parse_method(method);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--method: ") + e.what());
  }
  if (rho_override) require_correlation(*rho_override, "--rho-override");
  cfg.rho_override = rho_override;
  for (double r : rhos) require_correlation(r, "--rho");
  cfg.rho_grid = rhos;
  cfg.n_grid = ns;
  cfg.sweep_grid = sweep;
  if (!scenario.empty()) {
    try {
      cfg.scenario = parse_scenario(scenario);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--scenario: ") + e.what());
    }
    if (cfg.scenario == PowerScenario::selection) {
      throw UsageError("--scenario: use the simulate-selection command for the selection scenario");
    }
  }
  cfg.seed = seed;
  cfg.full_scale = full;
  if (!output.empty()) cfg.output_path = output;
  if (!output_format.empty()) {
    cfg.output_format = output_format == "csv" ? OutputFormat::csv : OutputFormat::json;
  }
  if (replicates > 0) cfg.replicates = replicates;
  cfg.workers = workers;
  cfg.quadrature.node_count = quad_nodes;
  cfg.quadrature.abs_tolerance = quad_tol;
  try {
    cfg.quadrature.validate();
  } catch (const DomainError& e) {
    throw UsageError(std::string("--quad-nodes/--quad-tol: ") + e.what());
  }

  switch (cfg.command) {
    case Command::test:
      if (!cfg.input_path) throw UsageError("--input: required by the test command");
      if (cfg.alpha_grid.size() > 1) throw UsageError("--alpha: test takes a single level");
      break;
    case Command::critical_value:
      if (cfg.n_grid.size() != 1) throw UsageError("--n: critical-value needs exactly one n");
      if (cfg.n_grid.front() < 1) throw UsageError("--n: must be at least 1");
      if (cfg.rho_grid.size() > 1) throw UsageError("--rho: critical-value takes a single rho");
      if (cfg.alpha_grid.size() > 1) throw UsageError("--alpha: critical-value takes one level");
      break;
    case Command::simulate_size:
    case Command::simulate_power:
    case Command::simulate_selection:
      for (std::size_t n : cfg.n_grid) {
        if (n < 2) throw UsageError("--n: simulations need n >= 2");
      }
      if (cfg.command != Command::simulate_size && cfg.n_grid.size() > 1) {
        throw UsageError("--n: power and selection simulations take a single n");
      }
      break;
  }
  if (cfg.command != Command::simulate_power && cfg.scenario) {
    throw UsageError("--scenario: only valid with simulate-power");
  }
  return cfg;
}

TestStatistics read_statistics(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (!seen_content) {
      seen_content = true;
      if (text == "z" || text == "\"z\"") continue;
    }
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" + text +
                           "' as a finite real number",
                       line_no);
    }
    values.push_back(v);
  }
  if (values.size() < 2) {
    throw ParseError("need at least 2 statistics, found " + std::to_string(values.size()), 0);
  }
  return TestStatistics(std::move(values));
}

TestStatistics read_statistics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file '" + path + "'", 0);
  return read_statistics(in);
}

}  // namespace mtc::cli
