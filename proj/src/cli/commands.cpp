#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mtc/baselines.hpp"
#include "mtc/cli.hpp"
#include "mtc/errors.hpp"
#include "mtc/experiment_io.hpp"
#include "mtc/gnp.hpp"

namespace mtc::cli {

namespace {

// Writes to --output when given, otherwise to `fallback`.
class OutputSink {
 public:
  OutputSink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ParseError("cannot open output file '" + *path + "'", 0);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw ParseError("failed writing output", 0);
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string_view alternative_id(Alternative a) {
  switch (a) {
    case Alternative::two_sided: return "two";
    case Alternative::greater: return "one";
    case Alternative::less: return "less";
  }
  return "two";
}

GlobalTestOutcome run_method(Method method, const TestStatistics& x, const RunConfig& cfg) {
  const Sides sides = cfg.sides();
  switch (method) {
    case Method::gnp_mom:
      return run_gnp_mom_test(x, cfg.alpha(), sides, cfg.quadrature, cfg.rho_override);
    case Method::bonferroni: return bonferroni_test(z_to_p(x, sides), cfg.alpha());
    case Method::hmp: return hmp_test(z_to_p(x, sides), cfg.alpha());
    case Method::hmp_adj: return hmp_adjusted_test(z_to_p(x, sides), cfg.alpha());
    case Method::fisher: return fisher_combined_test(z_to_p(x, sides), cfg.alpha());
  }
  throw DomainError("unknown method");
}

std::size_t replicates_for(const RunConfig& cfg, std::size_t desk_default) {
  if (cfg.replicates) return *cfg.replicates;
  return cfg.full_scale ? 10'000 : desk_default;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void print_size_summary(std::ostream& log, const ExperimentResult& result) {
  log << "method       n      rho    alpha   size     se\n";
  for (const auto& row : result.rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-11s %5zu  %5.2f  %6.3f  %6.4f  %6.4f\n",
                  std::string(method_id(row.method)).c_str(), row.n, row.rho, row.alpha,
                  row.rejection_rate, row.monte_carlo_se);
    log << line;
  }
}

void print_power_summary(std::ostream& log, const ExperimentResult& result) {
  // Power at the first, middle and last sweep value of every curve.
  std::map<std::tuple<int, double, double>, std::vector<const ExperimentRow*>> curves;
  for (const auto& row : result.rows) {
    curves[{static_cast<int>(row.method), row.rho, row.alpha}].push_back(&row);
  }
  log << "method        rho    alpha   power@first  power@mid  power@last\n";
  for (const auto& [key, rows] : curves) {
    const ExperimentRow* first = rows.front();
    const ExperimentRow* mid = rows[rows.size() / 2];
    const ExperimentRow* last = rows.back();
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-11s  %5.2f  %6.3f   %.4f (%g)  %.4f (%g)  %.4f (%g)\n",
                  std::string(method_id(first->method)).c_str(), first->rho, first->alpha,
                  first->rejection_rate, first->sweep_value, mid->rejection_rate,
                  mid->sweep_value, last->rejection_rate, last->sweep_value);
    log << line;
  }
}

}  // namespace

int cmd_test(const RunConfig& cfg, std::ostream& out) {
  if (cfg.output_format == OutputFormat::csv) {
    throw UsageError("--output-format: test reports a JSON object; csv is not available");
  }
  TestStatistics x = read_statistics(*cfg.input_path);
  if (cfg.alternative == Alternative::less) x = x.negated();
  const Method method = cfg.method.value_or(Method::gnp_mom);
  const GlobalTestOutcome outcome = run_method(method, x, cfg);

  nlohmann::json report;
  report["method"] = outcome.method;
  report["n"] = x.size();
  report["sides"] = alternative_id(cfg.alternative);
  if (method == Method::gnp_mom) {
    report["rho_hat"] = outcome.estimate->rho_hat;
    report["rho_source"] = cfg.rho_override ? "override" : "estimated";
    report["rho_used"] = *outcome.rho_used;
    report["estimator_flags"] = {{"sample_variance", outcome.estimate->sample_variance},
                                 {"indicator_fired", outcome.estimate->indicator_fired},
                                 {"upper_clipped", outcome.estimate->upper_clipped}};
  } else {
    report["rho_hat"] = nullptr;
    report["rho_source"] = nullptr;
    report["rho_used"] = nullptr;
    report["estimator_flags"] = nullptr;
  }
  report["m_stat"] = outcome.m_stat;
  report["argmax_index"] =
      outcome.argmax_index ? nlohmann::json(*outcome.argmax_index) : nlohmann::json(nullptr);
  report["p_value"] = outcome.p_value;
  report["alpha"] = outcome.alpha;
  report["critical_value"] =
      outcome.critical_value ? nlohmann::json(*outcome.critical_value) : nlohmann::json(nullptr);
  report["reject_global"] = outcome.reject_global;
  report["significant_indices"] = outcome.significant_indices;

  OutputSink sink(cfg.output_path, out);
  sink.stream() << report.dump(2) << '\n';
  sink.finish();
  return kExitOk;
}

int cmd_critical_value(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = cfg.n_grid.front();
  const double rho = cfg.rho_grid.empty() ? 0.0 : cfg.rho_grid.front();
  double c = critical_value(n, rho, cfg.alpha(), cfg.sides(), cfg.quadrature);
  // Lower-tail tests flag X_i <= -c.
  if (cfg.alternative == Alternative::less) c = -c;

  OutputSink sink(cfg.output_path, out);
  if (cfg.output_format == OutputFormat::json) {
    const nlohmann::json record = {{"n", n},
                                   {"rho", rho},
                                   {"alpha", cfg.alpha()},
                                   {"sides", alternative_id(cfg.alternative)},
                                   {"critical_value", c}};
    sink.stream() << record.dump(2) << '\n';
  } else {
    sink.stream() << fixed(c, 9) << '\n';
  }
  sink.finish();
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  if (cfg.alternative == Alternative::less) {
    throw UsageError("--sides: simulations support one or two (the null is symmetric)");
  }
  const auto started = std::chrono::steady_clock::now();
  const OutputFormat format = cfg.output_format.value_or(OutputFormat::csv);
  std::vector<Method> methods = cfg.method ? std::vector<Method>{*cfg.method} : all_methods();

  ExperimentResult result;
  std::vector<SelectionReplicate> selection;
  if (cfg.command == Command::simulate_size) {
    SizeExperimentConfig sc;
    if (!cfg.n_grid.empty()) sc.n_grid = cfg.n_grid;
    if (!cfg.rho_grid.empty()) sc.rho_grid = cfg.rho_grid;
    if (!cfg.alpha_grid.empty()) sc.alpha_grid = cfg.alpha_grid;
    sc.replicates = replicates_for(cfg, 2000);
    sc.methods = methods;
    sc.master_seed = cfg.seed;
    sc.workers = cfg.workers;
    sc.sides = cfg.sides();
    sc.quadrature = cfg.quadrature;
    result = run_size_experiment(sc);
  } else if (cfg.command == Command::simulate_power) {
    const PowerScenario scenario = cfg.scenario.value_or(PowerScenario::sparse_single);
    PowerExperimentConfig pc = PowerExperimentConfig::defaults(scenario);
    if (!cfg.n_grid.empty()) pc.n = cfg.n_grid.front();
    if (!cfg.rho_grid.empty()) pc.rho_grid = cfg.rho_grid;
    if (!cfg.alpha_grid.empty()) pc.alpha_grid = cfg.alpha_grid;
    if (!cfg.sweep_grid.empty()) pc.sweep_grid = cfg.sweep_grid;
    pc.replicates = replicates_for(cfg, 2000);
    pc.methods = methods;
    pc.master_seed = cfg.seed;
    pc.workers = cfg.workers;
    pc.sides = cfg.sides();
    pc.quadrature = cfg.quadrature;
    result = scenario == PowerScenario::sparse_single ? run_power_sparse(pc)
                                                      : run_power_density_sweep(pc);
  } else {
    PowerExperimentConfig pc = PowerExperimentConfig::defaults(PowerScenario::selection);
    if (!cfg.n_grid.empty()) pc.n = cfg.n_grid.front();
    if (!cfg.rho_grid.empty()) pc.rho_grid = {cfg.rho_grid.front()};
    if (!cfg.alpha_grid.empty()) pc.alpha_grid = {cfg.alpha_grid.front()};
    pc.replicates = cfg.replicates.value_or(1);
    pc.master_seed = cfg.seed;
    pc.workers = cfg.workers;
    pc.sides = cfg.sides();
    pc.quadrature = cfg.quadrature;
    selection = run_selection_experiment(pc);
  }

  OutputSink sink(cfg.output_path, out);
  std::ostream& os = sink.stream();
  if (cfg.command == Command::simulate_selection) {
    if (format == OutputFormat::json) {
      nlohmann::json records = nlohmann::json::array();
      for (const auto& r : selection) records.push_back(selection_to_json(r));
      os << records.dump(2) << '\n';
    } else {
      os << "replicate,index,abs_value,non_null,flagged,critical_value\n";
      for (std::size_t r = 0; r < selection.size(); ++r) {
        const auto& rep = selection[r];
        std::vector<bool> flagged(rep.n, false);
        for (std::size_t i : rep.outcome.significant_indices) flagged[i] = true;
        for (std::size_t i = 0; i < rep.n; ++i) {
          os << r << ',' << i << ',' << format_real(rep.abs_values[i]) << ','
             << (i < rep.non_null_count ? 1 : 0) << ',' << (flagged[i] ? 1 : 0) << ','
             << format_real(*rep.outcome.critical_value) << '\n';
        }
      }
    }
  } else if (format == OutputFormat::json) {
    os << experiment_to_json(result).dump(2) << '\n';
  } else {
    write_experiment_csv(os, result);
  }
  sink.finish();

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (cfg.command == Command::simulate_size) {
    print_size_summary(log, result);
  } else if (cfg.command == Command::simulate_power) {
    print_power_summary(log, result);
  } else {
    log << "replicate  rho_hat   critical   p_value   reject  flagged(non-null/null)\n";
    for (std::size_t r = 0; r < selection.size(); ++r) {
      const auto& rep = selection[r];
      char line[160];
      std::snprintf(line, sizeof(line), "%9zu  %7.4f  %9.4f  %8.2e  %6s  %zu/%zu\n", r,
                    rep.outcome.estimate->rho_hat, *rep.outcome.critical_value,
                    rep.outcome.p_value, rep.outcome.reject_global ? "yes" : "no",
                    rep.flagged_non_null, rep.flagged_null);
      log << line;
    }
  }
  log << "elapsed " << fixed(seconds, 1) << " s\n";
  return kExitOk;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    std::string help;
    const std::optional<RunConfig> cfg = parse_config(argv, &help);
    if (!cfg) {
      out << help;
      return kExitOk;
    }
    switch (cfg->command) {
      case Command::test: return cmd_test(*cfg, out);
      case Command::critical_value: return cmd_critical_value(*cfg, out);
      default: return cmd_simulate(*cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for the list of flags.\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ReplicateError& e) {
    err << "numerical failure: " << e.what() << " (replicate stream key " << e.replicate_seed()
        << ")\n";
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace mtc::cli
