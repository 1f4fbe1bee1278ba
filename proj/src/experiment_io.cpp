#include "mtc/experiment_io.hpp"

#include <charconv>
#include <ostream>
#include <system_error>

namespace mtc {

std::string format_real(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
  out << kExperimentCsvHeader << '\n';
  for (const ExperimentRow& row : result.rows) {
    out << method_id(row.method) << ',' << row.n << ',' << format_real(row.rho) << ','
        << format_real(row.alpha) << ',' << format_real(row.sweep_value) << ','
        << format_real(row.rejection_rate) << ',' << format_real(row.monte_carlo_se) << ','
        << row.replicates << ',' << row.seed << '\n';
  }
}

nlohmann::json experiment_to_json(const ExperimentResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ExperimentRow& row : result.rows) {
    rows.push_back({{"method", method_id(row.method)},
                    {"n", row.n},
                    {"rho", row.rho},
                    {"alpha", row.alpha},
                    {"sweep_value", row.sweep_value},
                    {"rejection_rate", row.rejection_rate},
                    {"se", row.monte_carlo_se},
                    {"replicates", row.replicates},
                    {"seed", row.seed}});
  }
  return rows;
}

nlohmann::json outcome_to_json(const GlobalTestOutcome& outcome) {
  nlohmann::json j;
  j["method"] = outcome.method;
  j["sides"] = to_string(outcome.sides);
  j["m_stat"] = outcome.m_stat;
  j["p_value"] = outcome.p_value;
  j["alpha"] = outcome.alpha;
  j["reject_global"] = outcome.reject_global;
  j["critical_value"] = outcome.critical_value ? nlohmann::json(*outcome.critical_value) : nullptr;
  j["rho_used"] = outcome.rho_used ? nlohmann::json(*outcome.rho_used) : nullptr;
  j["argmax_index"] = outcome.argmax_index ? nlohmann::json(*outcome.argmax_index) : nullptr;
  j["significant_indices"] = outcome.significant_indices;
  return j;
}

nlohmann::json selection_to_json(const SelectionReplicate& replicate) {
  nlohmann::json j;
  j["stream_key"] = replicate.stream_key;
  j["n"] = replicate.n;
  j["non_null_count"] = replicate.non_null_count;
  j["rho"] = replicate.rho;
  j["alpha"] = replicate.alpha;
  j["rho_hat"] = replicate.outcome.estimate ? replicate.outcome.estimate->rho_hat : 0.0;
  j["p_value"] = replicate.outcome.p_value;
  j["critical_value"] =
      replicate.outcome.critical_value ? nlohmann::json(*replicate.outcome.critical_value) : nullptr;
  j["reject_global"] = replicate.outcome.reject_global;
  j["argmax_index"] =
      replicate.outcome.argmax_index ? nlohmann::json(*replicate.outcome.argmax_index) : nullptr;
  j["flagged_indices"] = replicate.outcome.significant_indices;
  j["flagged_non_null"] = replicate.flagged_non_null;
  j["flagged_null"] = replicate.flagged_null;
  j["abs_values"] = replicate.abs_values;
  return j;
}

}  // namespace mtc
